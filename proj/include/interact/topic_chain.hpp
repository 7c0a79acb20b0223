#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "interact/corpus.hpp"
#include "interact/model.hpp"
#include "interact/rng.hpp"
#include "interact/sampler_core.hpp"

namespace interact {

/// Which count row a token's topic is charged to.
enum class ActorKey {
  document,  // n_m^k, one row per doc
  author,    // n_u^k, one row per user in the user table
};

/// Collapsed Gibbs chain over token topics, shared by all three models.
///
/// Tokens are stored flat in corpus order. A sweep visits them in that order
/// and draws each from
///   (n_{-i,k}^{w} + beta) / (n_{-i,k} + W beta) * (n_{-i,a}^k + alpha) / (n_{-i,a} + K alpha)
/// where a is the token's doc or author. The chain keeps a pointer to the
/// corpus, which must outlive it.
class TopicChain {
 public:
  /// Assigns every token a uniform topic, drawn in corpus order.
  TopicChain(const Corpus& corpus, const Hyperparams& hp, std::uint64_t seed, ActorKey key);

  void sweep();
  void resample(std::size_t token);

  /// Unnormalized conditional of `token` with its own assignment excluded.
  void conditional(std::size_t token, std::span<double> out) const;

  const Corpus& corpus() const { return *corpus_; }
  const Hyperparams& hyperparams() const { return hp_; }
  ActorKey key() const { return key_; }
  std::uint64_t seed() const { return seed_; }
  std::int64_t sweeps_done() const { return sweeps_; }

  std::size_t num_tokens() const { return z_.size(); }
  std::span<const std::int32_t> topics() const { return z_; }
  std::int32_t token_word(std::size_t i) const { return token_word_[i]; }
  std::int32_t token_actor(std::size_t i) const { return token_actor_[i]; }
  /// Tokens of doc m occupy [doc_begin(m), doc_begin(m + 1)).
  std::size_t doc_begin(std::size_t m) const { return doc_offsets_[m]; }

  const CountMatrices& counts() const { return counts_; }
  CountMatrices& mutable_counts() { return counts_; }

  /// Counts recomputed from the assignments alone (topic part only).
  CountMatrices rebuild_counts() const;

  /// Replaces every assignment and rebuilds the topic counts.
  void set_topics(std::span<const std::int32_t> topics);

  /// Per-token train perplexity under the current point estimate.
  double train_perplexity() const;

  std::vector<std::string> actor_labels() const;
  EstimateMetadata metadata(ModelKind kind) const;

 private:
  void fill_weights(std::int32_t word, std::int32_t actor, std::span<double> out) const;

  const Corpus* corpus_;
  Hyperparams hp_;
  ActorKey key_;
  std::uint64_t seed_;
  std::int64_t sweeps_ = 0;

  std::vector<std::int32_t> token_word_;
  std::vector<std::int32_t> token_actor_;
  std::vector<std::size_t> doc_offsets_;
  std::vector<std::int32_t> z_;
  CountMatrices counts_;
  Rng rng_;
  std::vector<double> weights_;
};

}  // namespace interact
