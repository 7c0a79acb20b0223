#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "interact/topic_chain.hpp"

namespace interact {

/// Community interest pattern model.
///
/// Each post carries one community label c_m; its author's topic mixture and
/// the users it mentions depend on that label. A sweep first resamples every
/// post's community (with the post's own contributions removed), then every
/// token's topic with the user-keyed conditional.
///
/// Community conditional for post m by author u mentioning x_1..x_J:
///
///   (n_u^c + gamma) / (n_u + C gamma)
///     * prod_j (n_c^{x_j} + delta + r_j) / (n_c + U delta + j - 1)
///
/// where r_j counts earlier mentions of x_j in the same post. That is the
/// collapsed Dirichlet-multinomial predictive for the post's mention block;
/// with a single mention it is the plain ratio of the two smoothed shares.
///
/// Topics and communities draw from two independent streams derived from the
/// seed, so with C = 1 the topic chain is draw-for-draw the UIPM chain.
class CipmSampler {
 public:
  CipmSampler(const Corpus& corpus, const Hyperparams& hp, std::uint64_t seed);

  void sweep();
  void resample_community(std::size_t doc);
  /// Unnormalized community weights of `doc` with its own contributions excluded.
  void community_conditional(std::size_t doc, std::span<double> out) const;

  std::span<const std::int32_t> communities() const { return c_; }
  void set_communities(std::span<const std::int32_t> communities);

  ModelEstimate estimate() const;
  /// Topic and community counts recomputed from (z, c).
  CountMatrices rebuild_counts() const;

  const TopicChain& chain() const { return chain_; }
  TopicChain& chain() { return chain_; }

 private:
  void fill_log_weights(const CountMatrices& counts, std::size_t doc, std::span<double> out) const;

  TopicChain chain_;
  std::vector<std::int32_t> c_;
  Rng community_rng_;
  std::vector<double> log_weights_;
  std::vector<double> weights_;
};

enum class AssignmentMode { threshold, argmax };

std::string_view to_string(AssignmentMode mode);
AssignmentMode parse_assignment_mode(std::string_view name);

struct CommunityAssignment {
  AssignmentMode mode = AssignmentMode::threshold;
  double threshold = 0.0;  // 1/C; unused for argmax
  std::vector<std::vector<std::int32_t>> memberships;  // per user, ascending
};

/// Membership threshold 1/C.
double community_threshold(int num_communities);

/// Threshold mode puts u in every c with mu[u][c] >= 1/C; argmax mode in the
/// single most probable community (lowest index on ties). The threshold test
/// allows 1e-12 of rounding slack so uniform rows land in every community.
CommunityAssignment assign_communities(const ModelEstimate& estimate, AssignmentMode mode);

struct InterestRow {
  std::string user_id;
  std::int32_t user_index = 0;
  int topic = 0;
  double probability = 0.0;
};

/// Users whose argmax community is `community`, each with their most probable
/// topic (lowest index on ties) and its theta value.
std::vector<InterestRow> mention_similarity_report(const ModelEstimate& estimate, int community);

/// True for users that authored no post; their community rows are prior-only.
std::vector<bool> low_evidence_users(const Corpus& corpus);

}  // namespace interact
