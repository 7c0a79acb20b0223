#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "interact/common.hpp"
#include "interact/rng.hpp"

namespace interact {

/// Dirichlet priors and model sizes shared by the three samplers.
///
/// `gamma` is the prior on each user's community proportions; `delta` is the
/// prior on each community's distribution over mentioned users.
struct Hyperparams {
  double alpha = 0.5;
  double beta = 0.01;
  double gamma = 0.1;
  double delta = 0.1;
  int num_topics = 100;
  int num_communities = 1;

  /// alpha = 50/K, beta = 0.01, gamma = delta = 0.1.
  static Hyperparams defaults(int num_topics, int num_communities = 1);

  /// Throws ValidationError unless every prior is positive and K, C >= 1.
  void validate() const;

  bool operator==(const Hyperparams&) const = default;
};

/// (count + prior) / (total + dim * prior): the Dirichlet-smoothed share used
/// by every conditional and estimator.
double smoothed_ratio(std::int64_t count, std::int64_t total, double prior, std::int64_t dim);

/// Draws index k with probability weights[k] / sum(weights), consuming exactly
/// one uniform from `rng`. Throws ValidationError on a negative, NaN or
/// infinite weight, or when every weight is zero.
std::size_t sample_categorical(std::span<const double> weights, Rng& rng);

/// Sufficient statistics of a chain.
///
/// Topic-word counts are stored word-major (W x K) so the per-token scan over
/// topics is contiguous; `topic_word(k, w)` hides the layout.
class CountMatrices {
 public:
  CountMatrices() = default;
  CountMatrices(int num_topics, int num_words, int num_actors);

  /// Adds the U x C user-community and C x U community-user tables.
  void enable_communities(int num_users, int num_communities);
  bool has_communities() const { return num_communities_ > 0; }

  int num_topics() const { return num_topics_; }
  int num_words() const { return num_words_; }
  int num_actors() const { return num_actors_; }
  int num_users() const { return num_users_; }
  int num_communities() const { return num_communities_; }

  std::int32_t topic_word(int k, int w) const { return word_topic_(w, k); }
  std::span<const std::int32_t> word_row(int w) const { return word_topic_.row(w); }
  std::int32_t topic_total(int k) const { return topic_total_[k]; }
  std::span<const std::int32_t> topic_totals() const { return topic_total_; }
  std::int32_t actor_topic(int a, int k) const { return actor_topic_(a, k); }
  std::span<const std::int32_t> actor_row(int a) const { return actor_topic_.row(a); }
  std::int32_t actor_total(int a) const { return actor_total_[a]; }

  std::int32_t user_community(int u, int c) const { return user_community_(u, c); }
  std::int32_t user_total(int u) const { return user_total_[u]; }
  std::int32_t community_user(int c, int x) const { return community_user_(c, x); }
  std::int32_t community_total(int c) const { return community_total_[c]; }

  void add_token(int word, int actor, int topic);
  /// Throws InternalFault if any affected cell is already zero.
  void remove_token(int word, int actor, int topic);
  /// Moves one token between topics; a no-op when from == to.
  void move_token(int word, int actor, int from, int to);

  void add_doc_community(int author, std::span<const std::int32_t> mentions, int community);
  void remove_doc_community(int author, std::span<const std::int32_t> mentions, int community);
  void move_doc_community(int author, std::span<const std::int32_t> mentions, int from, int to);

  /// Verifies non-negativity and that every total equals its row sum; when
  /// `expected_tokens` >= 0, also that the topic totals add up to it.
  /// Throws InternalFault on violation.
  void check_invariants(std::int64_t expected_tokens = -1) const;

  /// K x W view of the topic-word counts.
  CountMatrix topic_word_matrix() const;
  const CountMatrix& actor_topic_matrix() const { return actor_topic_; }
  const CountMatrix& user_community_matrix() const { return user_community_; }
  const CountMatrix& community_user_matrix() const { return community_user_; }

  /// Builds counts from explicit tables (snapshot loading). Totals are derived.
  static CountMatrices from_tables(const CountMatrix& topic_word, const CountMatrix& actor_topic);
  void set_community_tables(const CountMatrix& user_community, const CountMatrix& community_user);

  bool operator==(const CountMatrices&) const = default;

 private:
  int num_topics_ = 0;
  int num_words_ = 0;
  int num_actors_ = 0;
  int num_users_ = 0;
  int num_communities_ = 0;

  CountMatrix word_topic_;
  std::vector<std::int32_t> topic_total_;
  CountMatrix actor_topic_;
  std::vector<std::int32_t> actor_total_;

  CountMatrix user_community_;
  std::vector<std::int32_t> user_total_;
  CountMatrix community_user_;
  std::vector<std::int32_t> community_total_;
};

}  // namespace interact
