#include "interact/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace interact {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::ipm: return "ipm";
    case ModelKind::uipm: return "uipm";
    case ModelKind::cipm: return "cipm";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "ipm") return ModelKind::ipm;
  if (name == "uipm") return ModelKind::uipm;
  if (name == "cipm") return ModelKind::cipm;
  throw ValidationError("unknown model kind '" + std::string(name) + "' (expected ipm, uipm or cipm)");
}

RealMatrix estimate_phi(const CountMatrices& counts, double beta) {
  const int K = counts.num_topics();
  const int W = counts.num_words();
  RealMatrix phi(K, W);
  for (int k = 0; k < K; ++k) {
    const double denom = counts.topic_total(k) + W * beta;
    for (int w = 0; w < W; ++w) phi(k, w) = (counts.topic_word(k, w) + beta) / denom;
  }
  return phi;
}

RealMatrix estimate_theta(const CountMatrices& counts, double alpha) {
  const int K = counts.num_topics();
  const int D = counts.num_actors();
  RealMatrix theta(D, K);
  for (int a = 0; a < D; ++a) {
    const double denom = counts.actor_total(a) + K * alpha;
    for (int k = 0; k < K; ++k) theta(a, k) = (counts.actor_topic(a, k) + alpha) / denom;
  }
  return theta;
}

RealMatrix estimate_mu(const CountMatrices& counts, double gamma) {
  const int U = counts.num_users();
  const int C = counts.num_communities();
  RealMatrix mu(U, C);
  for (int u = 0; u < U; ++u) {
    const double denom = counts.user_total(u) + C * gamma;
    for (int c = 0; c < C; ++c) mu(u, c) = (counts.user_community(u, c) + gamma) / denom;
  }
  return mu;
}

ModelEstimate make_estimate(const CountMatrices& counts, const EstimateMetadata& meta,
                            std::vector<std::string> words, std::vector<std::string> actors,
                            std::vector<std::string> users) {
  ModelEstimate estimate;
  estimate.meta = meta;
  estimate.phi = estimate_phi(counts, meta.hyperparams.beta);
  estimate.theta = estimate_theta(counts, meta.hyperparams.alpha);
  if (counts.has_communities()) estimate.mu = estimate_mu(counts, meta.hyperparams.gamma);
  estimate.words = std::move(words);
  estimate.actors = std::move(actors);
  estimate.users = std::move(users);
  return estimate;
}

std::vector<RankedWord> top_words(const ModelEstimate& estimate, int topic, std::size_t n) {
  if (topic < 0 || topic >= estimate.num_topics()) throw ValidationError("topic index out of range");
  const auto row = estimate.phi.row(topic);
  std::vector<int> order(row.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (row[a] != row[b]) return row[a] > row[b];
    return estimate.words[a] < estimate.words[b];
  });
  order.resize(std::min(n, order.size()));
  std::vector<RankedWord> ranked;
  ranked.reserve(order.size());
  for (int w : order) ranked.push_back({estimate.words[w], row[w]});
  return ranked;
}

std::vector<RankedUser> top_users(const CountMatrices& counts, std::span<const std::string> users,
                                  int topic, std::size_t n) {
  if (topic < 0 || topic >= counts.num_topics()) throw ValidationError("topic index out of range");
  if (static_cast<std::size_t>(counts.num_actors()) != users.size()) {
    throw ValidationError("top_users needs user-keyed counts (uipm or cipm)");
  }
  const std::int32_t total = counts.topic_total(topic);
  std::vector<RankedUser> ranked;
  if (total == 0) return ranked;
  for (int u = 0; u < counts.num_actors(); ++u) {
    const std::int32_t c = counts.actor_topic(u, topic);
    if (c > 0) ranked.push_back({users[u], u, static_cast<double>(c) / total});
  }
  std::sort(ranked.begin(), ranked.end(), [](const RankedUser& a, const RankedUser& b) {
    if (a.probability != b.probability) return a.probability > b.probability;
    return a.user_index < b.user_index;
  });
  if (ranked.size() > n) ranked.resize(n);
  return ranked;
}

double theta_cosine(const ModelEstimate& estimate, int a, int b) {
  const auto x = estimate.theta.row(a);
  const auto y = estimate.theta.row(b);
  double dot = 0.0, nx = 0.0, ny = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    dot += x[k] * y[k];
    nx += x[k] * x[k];
    ny += y[k] * y[k];
  }
  return std::clamp(dot / std::sqrt(nx * ny), 0.0, 1.0);
}

}  // namespace interact
