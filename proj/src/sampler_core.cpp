#include "interact/sampler_core.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace interact {

Hyperparams Hyperparams::defaults(int num_topics, int num_communities) {
  Hyperparams hp;
  hp.num_topics = num_topics;
  hp.num_communities = num_communities;
  hp.alpha = num_topics > 0 ? 50.0 / num_topics : 0.0;
  hp.beta = 0.01;
  hp.gamma = 0.1;
  hp.delta = 0.1;
  return hp;
}

void Hyperparams::validate() const {
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!positive(alpha)) throw ValidationError("alpha must be > 0");
  if (!positive(beta)) throw ValidationError("beta must be > 0");
  if (!positive(gamma)) throw ValidationError("gamma must be > 0");
  if (!positive(delta)) throw ValidationError("delta must be > 0");
  if (num_topics < 1) throw ValidationError("number of topics must be >= 1");
  if (num_communities < 1) throw ValidationError("number of communities must be >= 1");
}

double smoothed_ratio(std::int64_t count, std::int64_t total, double prior, std::int64_t dim) {
  if (!(prior > 0.0) || !std::isfinite(prior)) throw ValidationError("prior must be > 0");
  if (count < 0 || total < count) throw ValidationError("require 0 <= count <= total");
  if (dim < 1) throw ValidationError("dim must be >= 1");
  return (static_cast<double>(count) + prior) /
         (static_cast<double>(total) + static_cast<double>(dim) * prior);
}

std::size_t sample_categorical(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || std::isinf(w)) throw ValidationError("weights must be finite and >= 0");
    total += w;
  }
  if (!(total > 0.0) || std::isinf(total)) throw ValidationError("weights must not all be zero");

  const double target = rng.uniform() * total;
  double running = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] <= 0.0) continue;
    running += weights[k];
    last_positive = k;
    if (target < running) return k;
  }
  // Rounding can leave target == running at the end.
  return last_positive;
}

CountMatrices::CountMatrices(int num_topics, int num_words, int num_actors)
    : num_topics_(num_topics),
      num_words_(num_words),
      num_actors_(num_actors),
      word_topic_(num_words, num_topics),
      topic_total_(num_topics, 0),
      actor_topic_(num_actors, num_topics),
      actor_total_(num_actors, 0) {}

void CountMatrices::enable_communities(int num_users, int num_communities) {
  num_users_ = num_users;
  num_communities_ = num_communities;
  user_community_ = CountMatrix(num_users, num_communities);
  user_total_.assign(num_users, 0);
  community_user_ = CountMatrix(num_communities, num_users);
  community_total_.assign(num_communities, 0);
}

void CountMatrices::add_token(int word, int actor, int topic) {
  ++word_topic_(word, topic);
  ++topic_total_[topic];
  ++actor_topic_(actor, topic);
  ++actor_total_[actor];
}

void CountMatrices::remove_token(int word, int actor, int topic) {
  if (word_topic_(word, topic) == 0 || topic_total_[topic] == 0 || actor_topic_(actor, topic) == 0 ||
      actor_total_[actor] == 0) {
    throw InternalFault("decrement of a zero count (word " + std::to_string(word) + ", topic " +
                        std::to_string(topic) + ")");
  }
  --word_topic_(word, topic);
  --topic_total_[topic];
  --actor_topic_(actor, topic);
  --actor_total_[actor];
}

void CountMatrices::move_token(int word, int actor, int from, int to) {
  if (from == to) return;
  remove_token(word, actor, from);
  add_token(word, actor, to);
}

void CountMatrices::add_doc_community(int author, std::span<const std::int32_t> mentions,
                                      int community) {
  ++user_community_(author, community);
  ++user_total_[author];
  for (std::int32_t x : mentions) ++community_user_(community, x);
  community_total_[community] += static_cast<std::int32_t>(mentions.size());
}

void CountMatrices::remove_doc_community(int author, std::span<const std::int32_t> mentions,
                                         int community) {
  if (user_community_(author, community) == 0) {
    throw InternalFault("decrement of a zero user-community count");
  }
  --user_community_(author, community);
  --user_total_[author];
  for (std::int32_t x : mentions) {
    if (community_user_(community, x) == 0) {
      throw InternalFault("decrement of a zero community-user count");
    }
    --community_user_(community, x);
  }
  community_total_[community] -= static_cast<std::int32_t>(mentions.size());
}

void CountMatrices::move_doc_community(int author, std::span<const std::int32_t> mentions, int from,
                                       int to) {
  if (from == to) return;
  remove_doc_community(author, mentions, from);
  add_doc_community(author, mentions, to);
}

namespace {

void check_rows(const CountMatrix& m, std::span<const std::int32_t> totals, const char* what) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::int64_t sum = 0;
    for (std::int32_t v : m.row(r)) {
      if (v < 0) throw InternalFault(std::string("negative count in ") + what);
      sum += v;
    }
    if (sum != totals[r]) throw InternalFault(std::string("row total mismatch in ") + what);
  }
}

}  // namespace

void CountMatrices::check_invariants(std::int64_t expected_tokens) const {
  std::vector<std::int64_t> topic_sums(num_topics_, 0);
  for (int w = 0; w < num_words_; ++w) {
    for (int k = 0; k < num_topics_; ++k) {
      const std::int32_t v = word_topic_(w, k);
      if (v < 0) throw InternalFault("negative topic-word count");
      topic_sums[k] += v;
    }
  }
  std::int64_t tokens = 0;
  for (int k = 0; k < num_topics_; ++k) {
    if (topic_sums[k] != topic_total_[k]) throw InternalFault("topic total mismatch");
    tokens += topic_total_[k];
  }
  if (expected_tokens >= 0 && tokens != expected_tokens) {
    throw InternalFault("topic totals do not add up to the token count");
  }
  check_rows(actor_topic_, actor_total_, "actor-topic counts");
  const std::int64_t actor_tokens = std::accumulate(actor_total_.begin(), actor_total_.end(), std::int64_t{0});
  if (actor_tokens != tokens) throw InternalFault("actor totals disagree with topic totals");
  if (has_communities()) {
    check_rows(user_community_, user_total_, "user-community counts");
    check_rows(community_user_, community_total_, "community-user counts");
  }
}

CountMatrix CountMatrices::topic_word_matrix() const {
  CountMatrix out(num_topics_, num_words_);
  for (int w = 0; w < num_words_; ++w) {
    for (int k = 0; k < num_topics_; ++k) out(k, w) = word_topic_(w, k);
  }
  return out;
}

CountMatrices CountMatrices::from_tables(const CountMatrix& topic_word, const CountMatrix& actor_topic) {
  if (actor_topic.cols() != topic_word.rows()) {
    throw ValidationError("actor-topic table width does not match the number of topics");
  }
  CountMatrices counts(static_cast<int>(topic_word.rows()), static_cast<int>(topic_word.cols()),
                       static_cast<int>(actor_topic.rows()));
  for (int k = 0; k < counts.num_topics_; ++k) {
    for (int w = 0; w < counts.num_words_; ++w) {
      counts.word_topic_(w, k) = topic_word(k, w);
      counts.topic_total_[k] += topic_word(k, w);
    }
  }
  counts.actor_topic_ = actor_topic;
  for (int a = 0; a < counts.num_actors_; ++a) {
    for (std::int32_t v : actor_topic.row(a)) counts.actor_total_[a] += v;
  }
  return counts;
}

void CountMatrices::set_community_tables(const CountMatrix& user_community,
                                         const CountMatrix& community_user) {
  if (user_community.cols() != community_user.rows() || user_community.rows() != community_user.cols()) {
    throw ValidationError("community tables have inconsistent shapes");
  }
  enable_communities(static_cast<int>(user_community.rows()), static_cast<int>(user_community.cols()));
  user_community_ = user_community;
  community_user_ = community_user;
  for (int u = 0; u < num_users_; ++u) {
    for (std::int32_t v : user_community.row(u)) user_total_[u] += v;
  }
  for (int c = 0; c < num_communities_; ++c) {
    for (std::int32_t v : community_user.row(c)) community_total_[c] += v;
  }
}

}  // namespace interact
