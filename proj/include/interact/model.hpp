#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "interact/common.hpp"
#include "interact/sampler_core.hpp"

namespace interact {

enum class ModelKind { ipm, uipm, cipm };

std::string_view to_string(ModelKind kind);
/// Throws ValidationError for anything but "ipm", "uipm", "cipm".
ModelKind parse_model_kind(std::string_view name);

struct EstimateMetadata {
  ModelKind kind = ModelKind::ipm;
  Hyperparams hyperparams;
  std::uint64_t seed = 0;
  std::int64_t sweeps = 0;
  std::string rng_algorithm;
};

/// Point estimates read from a chain's counts.
///
/// phi is K x W. theta is D x K where a row is a document (IPM) or a user
/// (UIPM, CIPM). mu is U x C and only present for CIPM.
struct ModelEstimate {
  EstimateMetadata meta;
  RealMatrix phi;
  RealMatrix theta;
  std::optional<RealMatrix> mu;
  std::vector<std::string> words;
  std::vector<std::string> actors;  // theta row labels
  std::vector<std::string> users;

  int num_topics() const { return static_cast<int>(phi.rows()); }
  int num_words() const { return static_cast<int>(phi.cols()); }
};

/// phi[k][w] = (n_k^w + beta) / (n_k + W beta)
RealMatrix estimate_phi(const CountMatrices& counts, double beta);
/// theta[a][k] = (n_a^k + alpha) / (n_a + K alpha)
RealMatrix estimate_theta(const CountMatrices& counts, double alpha);
/// mu[u][c] = (n_u^c + gamma) / (n_u + C gamma)
RealMatrix estimate_mu(const CountMatrices& counts, double gamma);

/// Estimate straight from counts. `actors` labels the theta rows.
ModelEstimate make_estimate(const CountMatrices& counts, const EstimateMetadata& meta,
                            std::vector<std::string> words, std::vector<std::string> actors,
                            std::vector<std::string> users);

struct RankedWord {
  std::string word;
  double probability = 0.0;
};

/// Highest-probability words of topic k; ties go to the lexicographically
/// smaller word.
std::vector<RankedWord> top_words(const ModelEstimate& estimate, int topic, std::size_t n);

struct RankedUser {
  std::string user_id;
  std::int32_t user_index = 0;
  double probability = 0.0;
};

/// P(u | k) = n_u^k / n^k: the share of topic k's tokens written by u. Not
/// smoothed. Ties go to the lower user index; an empty topic yields nothing.
/// Requires user-keyed counts (UIPM, CIPM).
std::vector<RankedUser> top_users(const CountMatrices& counts, std::span<const std::string> users,
                                  int topic, std::size_t n);

/// Cosine similarity of two theta rows.
double theta_cosine(const ModelEstimate& estimate, int a, int b);

}  // namespace interact
