#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "interact/common.hpp"
#include "interact/corpus.hpp"
#include "json.hpp"

namespace interact {

struct SynthSpec {
  int num_topics = 10;
  int num_words = 1000;
  int num_docs = 1000;  // IPM only
  int num_users = 100;  // UIPM, CIPM
  int docs_per_user = 10;
  int tokens_per_doc = 20;
  /// Draw each post length from Poisson(tokens_per_doc), at least 1.
  bool poisson_lengths = false;
  double alpha = 0.1;
  double beta = 0.01;

  // CIPM
  int num_communities = 4;
  int mentions_per_doc = 3;
  double gamma = 0.1;
  double delta = 0.1;
  /// Planted partition: a user keeps 1 - epsilon of its community mass on its
  /// own block and spreads epsilon evenly over the others. Unset: each user's
  /// community distribution is a Dirichlet(gamma) draw instead.
  std::optional<double> epsilon = 0.1;

  std::uint64_t seed = 0;

  void validate_topics() const;
};

struct GroundTruth {
  RealMatrix phi;    // K x W
  RealMatrix theta;  // per post (IPM) or per user
  // CIPM only
  std::optional<RealMatrix> mu;              // U x C, per-user community distribution
  std::optional<RealMatrix> mention;         // C x U, per-community mention distribution
  std::vector<std::int32_t> block;           // planted block of each user
  std::vector<std::int32_t> doc_community;   // community drawn for each post
};

struct SyntheticCorpus {
  std::vector<InteractionRecord> records;
  /// Built directly from the draws: word i is "w{i}", user i is "u{i}",
  /// post m is "d{m}", all interned in index order.
  Corpus corpus;
  GroundTruth truth;
};

/// phi_k ~ Dir(beta), theta_m ~ Dir(alpha) per post, z ~ theta_m, w ~ phi_z.
/// Post m is written by "u{m}".
SyntheticCorpus generate_ipm(const SynthSpec& spec);

/// As generate_ipm but theta is drawn per user and shared by the user's posts.
/// With one post per user the draws (and the output) equal generate_ipm with
/// num_docs = num_users.
SyntheticCorpus generate_uipm(const SynthSpec& spec);

/// UIPM tokens plus one community per post and mentions drawn from that
/// community's mention distribution, which lives on its block's users.
/// Mentions in a post are distinct and never the author. Community and
/// mention draws use their own stream, so the text equals generate_uipm's.
/// Throws ValidationError if some block has fewer than mentions_per_doc + 1 users.
SyntheticCorpus generate_cipm(const SynthSpec& spec);

/// Ground-truth sidecar document.
nlohmann::json ground_truth_to_json(const GroundTruth& truth);

}  // namespace interact
