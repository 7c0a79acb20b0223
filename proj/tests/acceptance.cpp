// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <type_traits>

#include "graph_oracle.hpp"
#include "interact/cipm.hpp"
#include "interact/cli.hpp"
#include "interact/evaluation.hpp"
#include "interact/graph.hpp"
#include "interact/ipm.hpp"
#include "interact/snapshot.hpp"
#include "interact/synthgen.hpp"
#include "interact/training.hpp"
#include "interact/uipm.hpp"
#include "support.hpp"

using namespace interact;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  if (!o.pass) ++failures;
  std::printf("%s [%2d] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(),
              elapsed.count());
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Greedy TV matching of estimated phi rows to the truth; returns the mean TV
// and fills match[true topic] = estimated topic.
double matched_phi_tv(const RealMatrix& truth, const RealMatrix& est, std::vector<int>& match) {
  const int K = static_cast<int>(truth.rows());
  match = testing::greedy_match(
      K, [&](int i) { return truth.row(i); }, [&](int j) { return est.row(j); });
  double tv = 0.0;
  for (int k = 0; k < K; ++k) tv += testing::total_variation(truth.row(k), est.row(match[k]));
  return tv / K;
}

Hyperparams train_hp(int K, double alpha, double beta, int C = 1) {
  Hyperparams hp = Hyperparams::defaults(K, C);
  hp.alpha = alpha;
  hp.beta = beta;
  return hp;
}

SynthSpec recovery_spec() {
  SynthSpec s;
  s.num_topics = 5;
  s.num_words = 50;
  s.tokens_per_doc = 20;
  s.alpha = 0.1;
  s.beta = 0.01;
  s.seed = 2024;
  return s;
}

Outcome ipm_recovery() {
  const auto start = std::chrono::steady_clock::now();
  SynthSpec s = recovery_spec();
  s.num_docs = 2000;
  const SyntheticCorpus g = generate_ipm(s);
  TrainOptions o;
  o.kind = ModelKind::ipm;
  o.hyperparams = train_hp(5, 0.1, 0.01);
  o.sweeps = 500;
  o.trace_every = 0;
  o.seed = 1;
  const TrainedModel m = train_model(g.corpus, o);
  std::vector<int> match;
  const double tv = matched_phi_tv(g.truth.phi, m.estimate.phi, match);
  const double secs = seconds_since(start);
  return {tv <= 0.10 && secs <= 60.0, fmt("mean TV(phi) = %.4f (<= 0.10)", tv) + fmt(", %.1f s (<= 60)", secs)};
}

Outcome uipm_recovery() {
  const auto start = std::chrono::steady_clock::now();
  SynthSpec s = recovery_spec();
  s.num_users = 200;
  s.docs_per_user = 10;
  const SyntheticCorpus g = generate_uipm(s);
  TrainOptions o;
  o.kind = ModelKind::uipm;
  o.hyperparams = train_hp(5, 0.1, 0.01);
  o.sweeps = 500;
  o.trace_every = 0;
  o.seed = 1;
  const TrainedModel m = train_model(g.corpus, o);
  std::vector<int> match;
  const double tv_phi = matched_phi_tv(g.truth.phi, m.estimate.phi, match);
  double tv_theta = 0.0;
  std::vector<double> permuted(5);
  for (int u = 0; u < 200; ++u) {
    for (int k = 0; k < 5; ++k) permuted[k] = m.estimate.theta(u, match[k]);
    tv_theta += testing::total_variation(g.truth.theta.row(u), permuted);
  }
  tv_theta /= 200;
  const double secs = seconds_since(start);
  return {tv_phi <= 0.10 && tv_theta <= 0.15 && secs <= 120.0,
          fmt("mean TV(phi) = %.4f (<= 0.10)", tv_phi) + fmt(", mean TV(theta) = %.4f (<= 0.15)", tv_theta) +
              fmt(", %.1f s (<= 120)", secs)};
}

Outcome cipm_recovery() {
  const auto start = std::chrono::steady_clock::now();
  SynthSpec s = recovery_spec();
  s.num_users = 200;
  s.docs_per_user = 10;
  s.num_communities = 4;
  s.epsilon = 0.1;
  s.mentions_per_doc = 3;
  const SyntheticCorpus g = generate_cipm(s);
  TrainOptions o;
  o.kind = ModelKind::cipm;
  o.hyperparams = train_hp(5, 0.1, 0.01, 4);
  o.sweeps = 500;
  o.trace_every = 0;
  o.seed = 1;
  const TrainedModel m = train_model(g.corpus, o);
  const CommunityAssignment a = assign_communities(m.estimate, AssignmentMode::argmax);
  std::vector<int> perm{0, 1, 2, 3};
  double best = 0.0;
  do {
    int hits = 0;
    for (int u = 0; u < 200; ++u) hits += perm[a.memberships[u][0]] == g.truth.block[u];
    best = std::max(best, hits / 200.0);
  } while (std::next_permutation(perm.begin(), perm.end()));
  const double secs = seconds_since(start);
  return {best >= 0.80 && secs <= 300.0, fmt("argmax accuracy = %.3f (>= 0.80)", best) + fmt(", %.1f s (<= 300)", secs)};
}

Outcome perplexity_identity() {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const int W = 20 + 17 * static_cast<int>(seed);
    const Corpus c = testing::random_corpus(seed, 60, 10, W, 30);
    const std::vector<std::string> words(c.vocabulary.keys().begin(), c.vocabulary.keys().end());
    const RealMatrix phi(4, W, 1.0 / W);
    const auto closed = perplexity_with_theta(phi, words, RealMatrix(c.docs.size(), 4, 0.25), c);
    worst = std::max(worst, std::abs(closed.perplexity - W) / W);
    ModelEstimate e;
    e.phi = phi;
    e.words = words;
    e.meta.hyperparams = train_hp(4, 0.5, 0.01);
    for (ModelKind kind : {ModelKind::ipm, ModelKind::uipm}) {
      e.meta.kind = kind;
      worst = std::max(worst, std::abs(perplexity(e, c).perplexity - W) / W);
    }
  }
  return {worst <= 1e-9, fmt("max relative deviation from W = %.2e (<= 1e-9)", worst)};
}

Outcome perplexity_monotone() {
  SynthSpec s;
  s.num_topics = 10;
  s.num_words = 200;
  s.num_docs = 1500;
  s.tokens_per_doc = 40;
  s.alpha = 0.1;
  s.beta = 0.01;
  s.seed = 77;
  const SyntheticCorpus g = generate_ipm(s);
  SweepConfig cfg;
  cfg.kind = ModelKind::ipm;
  cfg.hyperparams = train_hp(10, 0.1, 0.01);
  cfg.alpha_from_k = true;
  cfg.sweeps = 200;
  cfg.seed = 3;
  cfg.split = {0.9, SplitUnit::by_doc, 3};
  const std::vector<int> ks{2, 10, 20};
  const auto rows = k_sweep(g.corpus, ks, cfg);
  const double p2 = rows[0].perplexity, p10 = rows[1].perplexity, p20 = rows[2].perplexity;
  const bool ok = p10 < p2 && std::abs(p10 - p20) < p2 - p10;
  return {ok, fmt("K=2: %.2f", p2) + fmt(", K=10: %.2f", p10) + fmt(", K=20: %.2f", p20)};
}

Outcome threshold_constant() {
  ModelEstimate e;
  e.mu = RealMatrix(3, 40, 1.0 / 40);
  const CommunityAssignment a = assign_communities(e, AssignmentMode::threshold);
  const bool ok = a.threshold == 0.025 && community_threshold(40) == 0.025 && a.memberships[0].size() == 40;
  return {ok, fmt("threshold = %.17g", a.threshold)};
}

Outcome reductions() {
  // 10^3-token fixture with one post per user
  Corpus c = testing::random_corpus(42, 50, 50, 60, 39, 3);
  std::size_t tokens = c.num_tokens;
  const bool size_ok = tokens >= 900 && tokens <= 1100;
  const Hyperparams hp = train_hp(6, 0.3, 0.02);
  IpmSampler ipm(c, hp, 99);
  UipmSampler uipm(c, hp, 99);
  Hyperparams hp1 = hp;
  hp1.num_communities = 1;
  CipmSampler cipm(c, hp1, 99);
  for (int s = 0; s < 100; ++s) {
    ipm.sweep();
    uipm.sweep();
    cipm.sweep();
  }
  const bool a = std::ranges::equal(ipm.chain().topics(), uipm.chain().topics());
  const bool b = std::ranges::equal(uipm.chain().topics(), cipm.chain().topics());
  return {size_ok && a && b, std::to_string(tokens) + " tokens; ipm==uipm: " + (a ? "yes" : "no") +
                                 ", uipm==cipm(C=1): " + (b ? "yes" : "no")};
}

Outcome graph_oracle() {
  double worst = 0.0;
  int graphs = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const int n = 2 + static_cast<int>(seed % 9);
    const auto g = testing::random_connected_graph(seed, n, 0.1 + 0.05 * static_cast<double>(seed % 8));
    const testing::GraphOracle oracle(g);
    worst = std::max(worst, testing::metrics_deviation(node_metrics(g), oracle.node_metrics(g), graph_metrics(g),
                                                       oracle.graph_metrics()));
    ++graphs;
  }
  // analytic references
  bool analytic = true;
  const auto star = node_metrics(testing::graph_of(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}));
  analytic &= std::abs(star[1].closeness_centrality - 4.0 / 7) < 1e-12;
  analytic &= std::abs(star[0].betweenness_centrality - 1.0) < 1e-12;
  const auto tri = testing::graph_of(3, {{0, 1}, {1, 2}, {2, 0}});
  analytic &= graph_metrics(tri).transitivity == 1.0 && node_metrics(tri)[0].clustering_coefficient == 1.0;
  const auto path = node_metrics(testing::graph_of(4, {{0, 1}, {1, 2}, {2, 3}}));
  analytic &= std::abs(path[1].betweenness_centrality - 2.0 / 3) < 1e-12 && path[0].eccentricity == 3;
  return {worst <= 1e-12 && analytic, std::to_string(graphs) + " graphs, max deviation " + fmt("%.2e", worst) +
                                          ", analytic values " + (analytic ? "match" : "differ")};
}

Outcome table_schema() {
  const std::string want =
      "user_id,degree,clustering_coefficient,eccentricity,average_neighbor_degree,betweenness_centrality,"
      "closeness_centrality";
  bool header = std::string(kNodeMetricsHeader) == want;
  int checked = 0;
  bool bounds = true;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto g = testing::random_connected_graph(seed, 2 + static_cast<int>(seed % 40), 0.05);
    const GraphMetrics gm = graph_metrics(g);
    bounds &= gm.radius <= gm.diameter && gm.diameter <= 2 * gm.radius;
    ++checked;
  }
  // a graph with radius 3 and diameter 5: path of 6 nodes
  const GraphMetrics p6 = graph_metrics(testing::graph_of(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}}));
  bounds &= p6.radius == 3 && p6.diameter == 5;
  return {header && bounds, std::string("header ") + (header ? "matches" : "differs") + ", radius <= diameter <= " +
                                "2 radius on " + std::to_string(checked + 1) + " graphs: " + (bounds ? "yes" : "no")};
}

std::vector<std::int64_t> power_law_sample(double alpha, std::size_t n, std::uint64_t seed) {
  const std::int64_t cap = 5'000'000;
  std::vector<double> cdf;
  cdf.reserve(cap);
  double total = 0.0;
  for (std::int64_t x = 1; x <= cap; ++x) {
    total += std::pow(static_cast<double>(x), -alpha);
    cdf.push_back(total);
  }
  testing::Rng rng(seed);
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform() * total;
    out.push_back(1 + (std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin()));
  }
  return out;
}

// Preferential attachment: each new node links to m existing nodes chosen
// proportionally to degree.
InteractionGraph preferential_attachment(std::uint64_t seed, int n, int m) {
  testing::Rng rng(seed);
  InteractionGraph g;
  std::vector<std::int32_t> ends;
  for (int v = 0; v <= m; ++v) {
    g.add_node("n" + std::to_string(v));
    for (int u = 0; u < v; ++u) {
      g.add_edge_event(v, u);
      ends.push_back(v);
      ends.push_back(u);
    }
  }
  for (int v = m + 1; v < n; ++v) {
    g.add_node("n" + std::to_string(v));
    std::vector<std::int32_t> targets;
    while (static_cast<int>(targets.size()) < m) {
      const std::int32_t t = ends[rng.below(ends.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (std::int32_t t : targets) {
      g.add_edge_event(v, t);
      ends.push_back(v);
      ends.push_back(t);
    }
  }
  return g;
}

Outcome power_law() {
  const auto sample = power_law_sample(2.5, 10000, 2718);
  const PowerLawFit fit = fit_power_law(sample, {.xmin = 1});
  bool monotone = true;
  std::string pa;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto g = preferential_attachment(seed, 5000, 2);
    const auto dist = degree_distribution(g, DegreeMode::total);
    for (std::size_t i = 1; i < dist.ccdf.size(); ++i) monotone &= dist.ccdf[i].second < dist.ccdf[i - 1].second;
    if (seed == 1) {
      const PowerLawFit f = fit_power_law(node_degrees(g, DegreeMode::total));
      pa = fmt(", attachment graph alpha %.2f", f.alpha) + " (xmin " + std::to_string(f.xmin) + ")";
    }
  }
  const bool ok = fit.alpha >= 2.35 && fit.alpha <= 2.65 && monotone;
  return {ok, fmt("alpha-hat = %.4f in [2.35, 2.65]", fit.alpha) + ", CCDFs monotone: " + (monotone ? "yes" : "no") +
                  pa};
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) files[fs::relative(entry.path(), dir).string()] = read_file(entry.path());
  }
  return files;
}

Outcome cli_determinism() {
  const fs::path root = fs::temp_directory_path() / "interact_acceptance_cli";
  fs::remove_all(root);
  fs::create_directories(root);
  std::ostringstream sink;
  const auto run = [&](const fs::path& base, std::vector<std::string> args) {
    for (auto& a : args) {
      if (a.rfind("@", 0) == 0) a = (base / a.substr(1)).string();
      if (a.rfind("%", 0) == 0) a = (root / "shared" / a.substr(1)).string();
    }
    const int code = run_cli(args, sink, sink);
    if (code != 0) throw std::runtime_error("command failed: " + args[0]);
  };
  // shared inputs
  run(root, {"generate", "--process", "cipm", "-o", "%gen", "-K", "4", "--words", "60", "--users", "40",
             "--docs-per-user", "5", "--tokens-per-doc", "15", "-C", "3", "--mentions-per-doc", "2", "--seed", "9"});
  run(root, {"ingest", "-i", "%gen/records.jsonl", "-o", "%corpus"});
  run(root, {"train", "--corpus", "%corpus/corpus.json", "--model", "cipm", "-K", "4", "-C", "3", "--sweeps", "30",
             "--seed", "4", "-o", "%model"});
  const std::vector<std::vector<std::string>> commands = {
      {"generate", "--process", "cipm", "-o", "@generate", "-K", "4", "--words", "60", "--users", "40", "-C", "3",
       "--mentions-per-doc", "2", "--seed", "9"},
      {"ingest", "-i", "%gen/records.jsonl", "-o", "@ingest"},
      {"train", "--corpus", "%corpus/corpus.json", "--model", "cipm", "-K", "4", "-C", "3", "--sweeps", "30",
       "--seed", "4", "-o", "@train"},
      {"topics", "-m", "%model/model.json", "-o", "@topics"},
      {"users", "-m", "%model/model.json", "-o", "@users"},
      {"communities", "-m", "%model/model.json", "-o", "@communities"},
      {"perplexity", "--corpus", "%corpus/corpus.json", "--model", "uipm", "--values", "2,4", "--sweeps", "20",
       "--no-timing", "-o", "@perplexity"},
      {"graph", "-i", "%gen/records.jsonl", "-o", "@graph", "--lcc", "--metrics", "--fit-powerlaw"},
  };
  std::size_t files = 0;
  std::string differing;
  for (const auto& cmd : commands) {
    run(root / "first", cmd);
    run(root / "second", cmd);
  }
  const auto a = read_tree(root / "first");
  const auto b = read_tree(root / "second");
  for (const auto& [name, content] : a) {
    ++files;
    auto it = b.find(name);
    if (it == b.end() || it->second != content) differing += " " + name;
  }
  const bool ok = a.size() == b.size() && differing.empty() && files > 0;
  fs::remove_all(root);
  return {ok, std::to_string(commands.size()) + " commands, " + std::to_string(files) + " files compared" +
                  (differing.empty() ? ", all identical" : ", differing:" + differing)};
}

template <typename Sampler>
bool conserves(Sampler& sampler, const Corpus& c, int sweeps) {
  for (int s = 0; s < sweeps; ++s) {
    sampler.sweep();
    const CountMatrices& counts = sampler.chain().counts();
    if constexpr (std::is_same_v<Sampler, CipmSampler>) {
      if (!(sampler.rebuild_counts() == counts)) return false;
    } else {
      if (!(sampler.chain().rebuild_counts() == counts)) return false;
    }
    std::int64_t total = 0;
    for (auto v : counts.topic_totals()) total += v;
    if (total != static_cast<std::int64_t>(c.num_tokens)) return false;
  }
  return true;
}

Outcome count_conservation() {
  int fixtures = 0;
  bool ok = true;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Corpus c = testing::random_corpus(seed, 30 + static_cast<int>(seed), 8, 25, 12, 3);
    const int K = 1 + static_cast<int>(seed % 7);
    Hyperparams hp = train_hp(K, 0.2, 0.05);
    IpmSampler ipm(c, hp, seed);
    UipmSampler uipm(c, hp, seed);
    hp.num_communities = 1 + static_cast<int>(seed % 4);
    CipmSampler cipm(c, hp, seed);
    ok &= conserves(ipm, c, 10) && conserves(uipm, c, 10) && conserves(cipm, c, 10);
    fixtures += 3;
  }
  return {ok, std::to_string(fixtures) + " chains x 10 sweeps, rebuilt counts " + (ok ? "equal" : "differ")};
}

}  // namespace

int main() {
  criterion(1, "IPM recovery", ipm_recovery);
  criterion(2, "UIPM recovery", uipm_recovery);
  criterion(3, "CIPM community recovery", cipm_recovery);
  criterion(4, "Perplexity baseline identity", perplexity_identity);
  criterion(5, "Perplexity monotonicity", perplexity_monotone);
  criterion(6, "Threshold constant", threshold_constant);
  criterion(7, "Reduction identities", reductions);
  criterion(8, "Graph oracle equivalence", graph_oracle);
  criterion(9, "Node-metrics schema and radius/diameter bounds", table_schema);
  criterion(10, "Power-law estimator", power_law);
  criterion(11, "CLI determinism", cli_determinism);
  criterion(12, "Count conservation", count_conservation);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
