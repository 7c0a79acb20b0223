#pragma once

#include "interact/topic_chain.hpp"

namespace interact {

/// Interest pattern model: LDA over posts, one topic mixture per post.
class IpmSampler {
 public:
  IpmSampler(const Corpus& corpus, const Hyperparams& hp, std::uint64_t seed)
      : chain_(corpus, hp, seed, ActorKey::document) {}

  void sweep() { chain_.sweep(); }
  /// theta rows are posts, labelled by record id.
  ModelEstimate estimate() const {
    return make_estimate(chain_.counts(), chain_.metadata(ModelKind::ipm),
                         {chain_.corpus().vocabulary.keys().begin(), chain_.corpus().vocabulary.keys().end()},
                         chain_.actor_labels(),
                         {chain_.corpus().users.keys().begin(), chain_.corpus().users.keys().end()});
  }

  const TopicChain& chain() const { return chain_; }
  TopicChain& chain() { return chain_; }

 private:
  TopicChain chain_;
};

}  // namespace interact
