#pragma once

#include "interact/topic_chain.hpp"

namespace interact {

/// User interest pattern model: one topic mixture per user, pooled over all
/// of that user's posts. Mention-only users keep an all-zero count row.
class UipmSampler {
 public:
  UipmSampler(const Corpus& corpus, const Hyperparams& hp, std::uint64_t seed)
      : chain_(corpus, hp, seed, ActorKey::author) {}

  void sweep() { chain_.sweep(); }
  ModelEstimate estimate() const {
    std::vector<std::string> users(chain_.corpus().users.keys().begin(), chain_.corpus().users.keys().end());
    return make_estimate(chain_.counts(), chain_.metadata(ModelKind::uipm),
                         {chain_.corpus().vocabulary.keys().begin(), chain_.corpus().vocabulary.keys().end()},
                         users, users);
  }

  std::vector<RankedUser> top_users(int topic, std::size_t n) const {
    return interact::top_users(chain_.counts(), chain_.corpus().users.keys(), topic, n);
  }

  const TopicChain& chain() const { return chain_; }
  TopicChain& chain() { return chain_; }

 private:
  TopicChain chain_;
};

}  // namespace interact
