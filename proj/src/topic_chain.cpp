#include "interact/topic_chain.hpp"

#include <cmath>

namespace interact {

TopicChain::TopicChain(const Corpus& corpus, const Hyperparams& hp, std::uint64_t seed, ActorKey key)
    : corpus_(&corpus), hp_(hp), key_(key), seed_(seed), rng_(seed) {
  hp_.validate();
  if (corpus.docs.empty() || corpus.num_tokens == 0) throw EmptyInputError("corpus is empty");

  const int K = hp_.num_topics;
  const int D = key_ == ActorKey::document ? static_cast<int>(corpus.num_docs())
                                           : static_cast<int>(corpus.num_users());
  counts_ = CountMatrices(K, static_cast<int>(corpus.num_words()), D);

  token_word_.reserve(corpus.num_tokens);
  token_actor_.reserve(corpus.num_tokens);
  doc_offsets_.reserve(corpus.num_docs() + 1);
  for (std::size_t m = 0; m < corpus.docs.size(); ++m) {
    const TokenizedDoc& doc = corpus.docs[m];
    doc_offsets_.push_back(token_word_.size());
    const auto actor = key_ == ActorKey::document ? static_cast<std::int32_t>(m) : doc.author;
    for (std::int32_t w : doc.tokens) {
      token_word_.push_back(w);
      token_actor_.push_back(actor);
    }
  }
  doc_offsets_.push_back(token_word_.size());

  z_.resize(token_word_.size());
  for (std::size_t i = 0; i < z_.size(); ++i) {
    z_[i] = static_cast<std::int32_t>(rng_.below(static_cast<std::uint64_t>(K)));
    counts_.add_token(token_word_[i], token_actor_[i], z_[i]);
  }
  weights_.resize(K);
}

void TopicChain::fill_weights(std::int32_t word, std::int32_t actor, std::span<double> out) const {
  const int K = hp_.num_topics;
  const double word_prior_mass = counts_.num_words() * hp_.beta;
  const double actor_denom = counts_.actor_total(actor) + K * hp_.alpha;
  const auto word_row = counts_.word_row(word);
  const auto actor_row = counts_.actor_row(actor);
  const auto totals = counts_.topic_totals();
  for (int k = 0; k < K; ++k) {
    out[k] = (word_row[k] + hp_.beta) / (totals[k] + word_prior_mass) *
             ((actor_row[k] + hp_.alpha) / actor_denom);
  }
}

void TopicChain::resample(std::size_t i) {
  const std::int32_t w = token_word_[i];
  const std::int32_t a = token_actor_[i];
  counts_.remove_token(w, a, z_[i]);
  fill_weights(w, a, weights_);
  z_[i] = static_cast<std::int32_t>(sample_categorical(weights_, rng_));
  counts_.add_token(w, a, z_[i]);
#ifdef INTERACT_CHECK_EVERY_UPDATE
  counts_.check_invariants(static_cast<std::int64_t>(z_.size()));
#endif
}

void TopicChain::sweep() {
  for (std::size_t i = 0; i < z_.size(); ++i) resample(i);
  ++sweeps_;
  counts_.check_invariants(static_cast<std::int64_t>(z_.size()));
}

void TopicChain::conditional(std::size_t i, std::span<double> out) const {
  // Same arithmetic as resample(), with the exclusion applied on a copy.
  CountMatrices excluded = counts_;
  excluded.remove_token(token_word_[i], token_actor_[i], z_[i]);
  const int K = hp_.num_topics;
  const double word_prior_mass = excluded.num_words() * hp_.beta;
  const double actor_denom = excluded.actor_total(token_actor_[i]) + K * hp_.alpha;
  for (int k = 0; k < K; ++k) {
    out[k] = (excluded.topic_word(k, token_word_[i]) + hp_.beta) /
             (excluded.topic_total(k) + word_prior_mass) *
             ((excluded.actor_topic(token_actor_[i], k) + hp_.alpha) / actor_denom);
  }
}

CountMatrices TopicChain::rebuild_counts() const {
  CountMatrices rebuilt(counts_.num_topics(), counts_.num_words(), counts_.num_actors());
  for (std::size_t i = 0; i < z_.size(); ++i) rebuilt.add_token(token_word_[i], token_actor_[i], z_[i]);
  return rebuilt;
}

void TopicChain::set_topics(std::span<const std::int32_t> topics) {
  if (topics.size() != z_.size()) throw ValidationError("assignment vector has the wrong length");
  for (std::int32_t k : topics) {
    if (k < 0 || k >= hp_.num_topics) throw ValidationError("topic assignment out of range");
  }
  CountMatrices rebuilt(counts_.num_topics(), counts_.num_words(), counts_.num_actors());
  for (std::size_t i = 0; i < topics.size(); ++i) rebuilt.add_token(token_word_[i], token_actor_[i], topics[i]);
  if (counts_.has_communities()) {
    rebuilt.set_community_tables(counts_.user_community_matrix(), counts_.community_user_matrix());
  }
  z_.assign(topics.begin(), topics.end());
  counts_ = std::move(rebuilt);
}

double TopicChain::train_perplexity() const {
  const RealMatrix phi = estimate_phi(counts_, hp_.beta);
  const RealMatrix theta = estimate_theta(counts_, hp_.alpha);
  double log_likelihood = 0.0;
  for (std::size_t i = 0; i < z_.size(); ++i) {
    const auto th = theta.row(token_actor_[i]);
    double p = 0.0;
    for (int k = 0; k < hp_.num_topics; ++k) p += th[k] * phi(k, token_word_[i]);
    log_likelihood += std::log(p);
  }
  return std::exp(-log_likelihood / static_cast<double>(z_.size()));
}

std::vector<std::string> TopicChain::actor_labels() const {
  std::vector<std::string> labels;
  if (key_ == ActorKey::document) {
    labels.reserve(corpus_->docs.size());
    for (const TokenizedDoc& doc : corpus_->docs) labels.push_back(doc.record_id);
  } else {
    labels.assign(corpus_->users.keys().begin(), corpus_->users.keys().end());
  }
  return labels;
}

EstimateMetadata TopicChain::metadata(ModelKind kind) const {
  return {kind, hp_, seed_, sweeps_, std::string(Rng::kAlgorithm)};
}

}  // namespace interact
