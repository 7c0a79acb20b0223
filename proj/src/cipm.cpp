#include "interact/cipm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace interact {

namespace {
constexpr std::uint64_t kCommunityStream = 0x636f6d6d756e6974ULL;
}

CipmSampler::CipmSampler(const Corpus& corpus, const Hyperparams& hp, std::uint64_t seed)
    : chain_(corpus, hp, seed, ActorKey::author), community_rng_(mix_seed(seed ^ kCommunityStream)) {
  const int C = hp.num_communities;
  CountMatrices& counts = chain_.mutable_counts();
  counts.enable_communities(static_cast<int>(corpus.num_users()), C);
  c_.resize(corpus.num_docs());
  for (std::size_t m = 0; m < c_.size(); ++m) {
    c_[m] = static_cast<std::int32_t>(community_rng_.below(static_cast<std::uint64_t>(C)));
    counts.add_doc_community(corpus.docs[m].author, corpus.docs[m].mentions, c_[m]);
  }
  log_weights_.resize(C);
  weights_.resize(C);
}

void CipmSampler::fill_log_weights(const CountMatrices& counts, std::size_t m, std::span<double> out) const {
  const Hyperparams& hp = chain_.hyperparams();
  const TokenizedDoc& doc = chain_.corpus().docs[m];
  const int C = hp.num_communities;
  const double user_prior_mass = counts.num_users() * hp.delta;
  const double author_denom = std::log(counts.user_total(doc.author) + C * hp.gamma);
  const auto& mentions = doc.mentions;
  for (int c = 0; c < C; ++c) {
    double lw = std::log(counts.user_community(doc.author, c) + hp.gamma) - author_denom;
    for (std::size_t j = 0; j < mentions.size(); ++j) {
      const auto repeats = std::count(mentions.begin(), mentions.begin() + static_cast<std::ptrdiff_t>(j), mentions[j]);
      lw += std::log(counts.community_user(c, mentions[j]) + hp.delta + static_cast<double>(repeats)) -
            std::log(counts.community_total(c) + user_prior_mass + static_cast<double>(j));
    }
    out[c] = lw;
  }
}

void CipmSampler::resample_community(std::size_t m) {
  const TokenizedDoc& doc = chain_.corpus().docs[m];
  CountMatrices& counts = chain_.mutable_counts();
  counts.remove_doc_community(doc.author, doc.mentions, c_[m]);
  fill_log_weights(counts, m, log_weights_);
  const double top = *std::max_element(log_weights_.begin(), log_weights_.end());
  for (std::size_t c = 0; c < weights_.size(); ++c) weights_[c] = std::exp(log_weights_[c] - top);
  c_[m] = static_cast<std::int32_t>(sample_categorical(weights_, community_rng_));
  counts.add_doc_community(doc.author, doc.mentions, c_[m]);
}

void CipmSampler::community_conditional(std::size_t m, std::span<double> out) const {
  const TokenizedDoc& doc = chain_.corpus().docs[m];
  CountMatrices excluded = chain_.counts();
  excluded.remove_doc_community(doc.author, doc.mentions, c_[m]);
  fill_log_weights(excluded, m, out);
  for (double& w : out) w = std::exp(w);
}

void CipmSampler::sweep() {
  if (chain_.hyperparams().num_communities > 1) {
    for (std::size_t m = 0; m < c_.size(); ++m) resample_community(m);
  }
  chain_.sweep();
}

void CipmSampler::set_communities(std::span<const std::int32_t> communities) {
  if (communities.size() != c_.size()) throw ValidationError("community vector has the wrong length");
  const int C = chain_.hyperparams().num_communities;
  for (std::int32_t c : communities) {
    if (c < 0 || c >= C) throw ValidationError("community assignment out of range");
  }
  const Corpus& corpus = chain_.corpus();
  CountMatrices& counts = chain_.mutable_counts();
  counts.enable_communities(static_cast<int>(corpus.num_users()), C);
  c_.assign(communities.begin(), communities.end());
  for (std::size_t m = 0; m < c_.size(); ++m) {
    counts.add_doc_community(corpus.docs[m].author, corpus.docs[m].mentions, c_[m]);
  }
}

ModelEstimate CipmSampler::estimate() const {
  const Corpus& corpus = chain_.corpus();
  std::vector<std::string> users(corpus.users.keys().begin(), corpus.users.keys().end());
  return make_estimate(chain_.counts(), chain_.metadata(ModelKind::cipm),
                       {corpus.vocabulary.keys().begin(), corpus.vocabulary.keys().end()}, users, users);
}

CountMatrices CipmSampler::rebuild_counts() const {
  CountMatrices rebuilt = chain_.rebuild_counts();
  const Corpus& corpus = chain_.corpus();
  rebuilt.enable_communities(static_cast<int>(corpus.num_users()), chain_.hyperparams().num_communities);
  for (std::size_t m = 0; m < c_.size(); ++m) {
    rebuilt.add_doc_community(corpus.docs[m].author, corpus.docs[m].mentions, c_[m]);
  }
  return rebuilt;
}

std::string_view to_string(AssignmentMode mode) {
  return mode == AssignmentMode::threshold ? "threshold" : "argmax";
}

AssignmentMode parse_assignment_mode(std::string_view name) {
  if (name == "threshold") return AssignmentMode::threshold;
  if (name == "argmax") return AssignmentMode::argmax;
  throw ValidationError("unknown assignment mode '" + std::string(name) + "' (expected threshold or argmax)");
}

double community_threshold(int num_communities) {
  if (num_communities < 1) throw ValidationError("number of communities must be >= 1");
  return 1.0 / num_communities;
}

CommunityAssignment assign_communities(const ModelEstimate& estimate, AssignmentMode mode) {
  if (!estimate.mu) throw ValidationError("community assignment needs a CIPM estimate");
  const RealMatrix& mu = *estimate.mu;
  const int C = static_cast<int>(mu.cols());
  CommunityAssignment result;
  result.mode = mode;
  result.threshold = community_threshold(C);
  result.memberships.resize(mu.rows());
  for (std::size_t u = 0; u < mu.rows(); ++u) {
    const auto row = mu.row(u);
    if (mode == AssignmentMode::threshold) {
      for (int c = 0; c < C; ++c) {
        if (row[c] >= result.threshold - 1e-12) result.memberships[u].push_back(c);
      }
    } else {
      const auto best = std::max_element(row.begin(), row.end()) - row.begin();
      result.memberships[u].push_back(static_cast<std::int32_t>(best));
    }
  }
  return result;
}

std::vector<InterestRow> mention_similarity_report(const ModelEstimate& estimate, int community) {
  const CommunityAssignment argmax = assign_communities(estimate, AssignmentMode::argmax);
  if (community < 0 || community >= static_cast<int>(estimate.mu->cols())) {
    throw ValidationError("community index out of range");
  }
  std::vector<InterestRow> rows;
  for (std::size_t u = 0; u < argmax.memberships.size(); ++u) {
    if (argmax.memberships[u].front() != community) continue;
    const auto theta = estimate.theta.row(u);
    const auto best = std::max_element(theta.begin(), theta.end()) - theta.begin();
    rows.push_back({estimate.users[u], static_cast<std::int32_t>(u), static_cast<int>(best), theta[best]});
  }
  return rows;
}

std::vector<bool> low_evidence_users(const Corpus& corpus) {
  std::vector<bool> low(corpus.num_users(), true);
  for (const TokenizedDoc& doc : corpus.docs) low[doc.author] = false;
  return low;
}

}  // namespace interact
