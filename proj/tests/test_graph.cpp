#include <cmath>
#include <functional>

#include "doctest.h"
#include "interact/graph.hpp"
#include "graph_oracle.hpp"
#include "support.hpp"

using namespace interact;

namespace {

using testing::graph_of;
using testing::random_graph;

void check_against_oracle(const InteractionGraph& g) {
  const testing::GraphOracle oracle(g);
  const auto got = node_metrics(g);
  const auto want = oracle.node_metrics(g);
  REQUIRE(got.size() == want.size());
  for (std::size_t v = 0; v < got.size(); ++v) {
    CHECK(got[v].user_id == want[v].user_id);
    CHECK(got[v].degree == want[v].degree);
    CHECK(got[v].eccentricity == want[v].eccentricity);
    CHECK(got[v].closeness_centrality == doctest::Approx(want[v].closeness_centrality).epsilon(1e-12));
    CHECK(got[v].average_neighbor_degree == doctest::Approx(want[v].average_neighbor_degree).epsilon(1e-12));
    CHECK(got[v].clustering_coefficient == doctest::Approx(want[v].clustering_coefficient).epsilon(1e-12));
    CHECK(std::abs(got[v].betweenness_centrality - want[v].betweenness_centrality) < 1e-12);
  }
  const GraphMetrics gm = graph_metrics(g);
  const GraphMetrics om = oracle.graph_metrics();
  CHECK(gm.radius == om.radius);
  CHECK(gm.diameter == om.diameter);
  CHECK(gm.edges == om.edges);
  CHECK(gm.density == doctest::Approx(om.density).epsilon(1e-12));
  CHECK(gm.transitivity == doctest::Approx(om.transitivity).epsilon(1e-12));
  CHECK(gm.radius <= gm.diameter);
  CHECK(gm.diameter <= 2 * gm.radius);
}

const NodeMetrics& metric_of(const std::vector<NodeMetrics>& ms, const std::string& id) {
  for (const auto& m : ms) {
    if (m.user_id == id) return m;
  }
  throw std::runtime_error("no node " + id);
}

}  // namespace

TEST_CASE("reference graphs") {
  SUBCASE("star with 4 leaves") {
    const auto g = graph_of(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    const auto ms = node_metrics(g);
    CHECK(ms[0].betweenness_centrality == doctest::Approx(1.0));
    CHECK(ms[0].closeness_centrality == doctest::Approx(1.0));
    CHECK(ms[0].eccentricity == 1);
    CHECK(ms[1].betweenness_centrality == 0.0);
    CHECK(ms[1].eccentricity == 2);
    CHECK(ms[1].average_neighbor_degree == 4.0);
    CHECK(ms[1].closeness_centrality == doctest::Approx(4.0 / 7));
    const auto gm = graph_metrics(g);
    CHECK(gm.radius == 1);
    CHECK(gm.diameter == 2);
    CHECK(gm.transitivity == 0.0);
    CHECK(gm.density == doctest::Approx(0.4));
  }
  SUBCASE("triangle") {
    const auto g = graph_of(3, {{0, 1}, {1, 2}, {2, 0}});
    for (const auto& m : node_metrics(g)) {
      CHECK(m.clustering_coefficient == 1.0);
      CHECK(m.betweenness_centrality == 0.0);
    }
    CHECK(graph_metrics(g).transitivity == 1.0);
  }
  SUBCASE("K4") {
    std::vector<std::pair<int, int>> e;
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) e.emplace_back(a, b);
    }
    const auto g = graph_of(4, e);
    CHECK(graph_metrics(g).transitivity == 1.0);
    CHECK(graph_metrics(g).density == 1.0);
    CHECK(kernels::triangles_serial(g.undirected()) == std::vector<std::int64_t>{3, 3, 3, 3});
  }
  SUBCASE("path of 4") {
    const auto g = graph_of(4, {{0, 1}, {1, 2}, {2, 3}});
    const auto ms = node_metrics(g);
    CHECK(ms[1].betweenness_centrality == doctest::Approx(2.0 / 3));
    CHECK(ms[0].eccentricity == 3);
    CHECK(ms[1].eccentricity == 2);
    CHECK(ms[0].closeness_centrality == doctest::Approx(0.5));
    CHECK(ms[1].closeness_centrality == doctest::Approx(0.75));
    const auto gm = graph_metrics(g);
    CHECK(gm.radius == 2);
    CHECK(gm.diameter == 3);
    check_against_oracle(g);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(node_metrics(InteractionGraph{}), ValidationError);
    CHECK_THROWS_AS(node_metrics(graph_of(4, {{0, 1}, {2, 3}})), ValidationError);
    CHECK_THROWS_AS(graph_metrics(graph_of(1, {})), ValidationError);
  }
}

TEST_CASE("metrics match the brute-force oracle on random graphs") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto g = largest_connected_component(random_graph(seed, 4 + static_cast<int>(seed % 9), 0.25));
    if (g.num_nodes() < 3) continue;
    CAPTURE(seed);
    check_against_oracle(g);
  }
}

TEST_CASE("connected random graphs with up to 10 nodes") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    CAPTURE(seed);
    check_against_oracle(testing::random_connected_graph(seed, 2 + static_cast<int>(seed % 9), 0.3));
  }
}

TEST_CASE("parallel kernels equal the serial reference") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = largest_connected_component(random_graph(seed, 60, 0.05));
    const auto view = g.undirected();
    const auto a = kernels::all_sources_serial(view);
    const auto b = kernels::all_sources_parallel(view);
    CHECK(a.betweenness == b.betweenness);
    CHECK(a.eccentricity == b.eccentricity);
    CHECK(a.distance_sum == b.distance_sum);
    CHECK(kernels::triangles_serial(view) == kernels::triangles_parallel(view));
    const auto ms = node_metrics(g);
    const auto mr = node_metrics_serial(g);
    for (std::size_t v = 0; v < ms.size(); ++v) {
      CHECK(ms[v].betweenness_centrality == mr[v].betweenness_centrality);
      CHECK(ms[v].clustering_coefficient == mr[v].clustering_coefficient);
    }
  }
}

TEST_CASE("metrics are invariant under node relabeling") {
  const auto g = largest_connected_component(random_graph(3, 30, 0.1));
  const int n = static_cast<int>(g.num_nodes());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  testing::Rng rng(8);
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  InteractionGraph h;
  std::vector<int> inverse(n);
  for (int i = 0; i < n; ++i) inverse[perm[i]] = i;
  for (int i = 0; i < n; ++i) h.add_node(g.node_id(perm[i]));
  for (const auto& [e, w] : g.directed_edges()) h.add_edge_event(inverse[e.first], inverse[e.second], w);
  const auto a = node_metrics(g);
  const auto b = node_metrics(h);
  for (const auto& m : a) {
    const auto& o = metric_of(b, m.user_id);
    CHECK(o.degree == m.degree);
    CHECK(o.eccentricity == m.eccentricity);
    CHECK(o.betweenness_centrality == doctest::Approx(m.betweenness_centrality).epsilon(1e-12));
    CHECK(o.closeness_centrality == doctest::Approx(m.closeness_centrality).epsilon(1e-12));
    CHECK(o.clustering_coefficient == doctest::Approx(m.clustering_coefficient).epsilon(1e-12));
  }
  CHECK(graph_metrics(g).diameter == graph_metrics(h).diameter);
}

TEST_CASE("graph construction") {
  SUBCASE("example posts: mention edges under both directions") {
    const auto records = testing::records_of({
        {"3239853627", "rally tonight", {"709920419529281537"}},
        {"325069363", "see you there", {"3239853627", "709920419529281537"}},
    });
    const auto fwd = build_graph(records);
    const auto rev = build_graph(records, EdgeDirection::mentioned_to_mentioner);
    CHECK(fwd.num_nodes() == 3);
    const auto id = [&](const InteractionGraph& g, const char* s) { return *g.find_node(s); };
    CHECK(fwd.directed_edges().count({id(fwd, "3239853627"), id(fwd, "709920419529281537")}) == 1);
    CHECK(rev.directed_edges().count({id(rev, "709920419529281537"), id(rev, "3239853627")}) == 1);
    CHECK(rev.directed_edges().count({id(rev, "709920419529281537"), id(rev, "325069363")}) == 1);
    CHECK(rev.directed_edges().count({id(rev, "3239853627"), id(rev, "325069363")}) == 1);
    CHECK(rev.num_directed_edges() == 3);
    CHECK(parse_edge_direction(to_string(EdgeDirection::mentioned_to_mentioner)) ==
          EdgeDirection::mentioned_to_mentioner);
    CHECK_THROWS_AS(parse_edge_direction("sideways"), ValidationError);
  }
  SUBCASE("multiplicity and self-loops") {
    InteractionGraph g;
    g.add_node("a");
    g.add_node("b");
    g.add_edge_event(0, 1);
    g.add_edge_event(0, 1);
    g.add_edge_event(1, 0);
    g.add_edge_event(0, 0);
    CHECK(g.num_directed_edges() == 2);
    CHECK(g.directed_edges().at({0, 1}) == 2);
    CHECK(g.num_undirected_edges() == 1);
    const auto view = g.undirected();
    CHECK(view.weights[0] == 3);
    CHECK(node_degrees(g, DegreeMode::out) == std::vector<std::int64_t>{1, 1});
    CHECK(node_degrees(g, DegreeMode::total) == std::vector<std::int64_t>{1, 1});
    CHECK_THROWS_AS(g.add_edge_event(0, 5), ValidationError);
    CHECK_THROWS_AS(g.add_edge_event(0, 1, 0), ValidationError);
  }
  SUBCASE("degree distribution of a star") {
    const auto g = graph_of(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    const auto d = degree_distribution(g, DegreeMode::total);
    CHECK(d.histogram == std::map<std::int64_t, std::int64_t>{{1, 4}, {4, 1}});
    REQUIRE(d.ccdf.size() == 2);
    CHECK(d.ccdf[0] == std::pair<std::int64_t, double>{1, 1.0});
    CHECK(d.ccdf[1].second == doctest::Approx(0.2));
    CHECK(node_degrees(g, DegreeMode::in) == std::vector<std::int64_t>{0, 1, 1, 1, 1});
  }
  SUBCASE("handshake and monotone ccdf on random graphs") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto g = random_graph(seed, 40, 0.08);
      const auto deg = node_degrees(g, DegreeMode::total);
      CHECK(std::accumulate(deg.begin(), deg.end(), std::int64_t{0}) ==
            static_cast<std::int64_t>(2 * g.num_undirected_edges()));
      const auto d = degree_distribution(g, DegreeMode::total);
      for (std::size_t i = 1; i < d.ccdf.size(); ++i) CHECK(d.ccdf[i].second < d.ccdf[i - 1].second);
    }
  }
}

TEST_CASE("largest connected component") {
  SUBCASE("picks the bigger piece and keeps its edges") {
    const auto g = graph_of(7, {{0, 1}, {2, 3}, {3, 4}, {4, 2}, {5, 6}});
    const auto lcc = largest_connected_component(g);
    CHECK(lcc.num_nodes() == 3);
    CHECK(lcc.node_id(0) == "n2");
    CHECK(lcc.num_undirected_edges() == 3);
    CHECK(is_connected(lcc.undirected()));
    const auto again = largest_connected_component(lcc);
    CHECK(again.directed_edges() == lcc.directed_edges());
  }
  SUBCASE("ties go to the component with the smallest index") {
    const auto lcc = largest_connected_component(graph_of(4, {{2, 3}, {0, 1}}));
    CHECK(lcc.node_id(0) == "n0");
    CHECK(lcc.node_id(1) == "n1");
  }
  SUBCASE("isolated nodes") {
    const auto lcc = largest_connected_component(graph_of(3, {}));
    CHECK(lcc.num_nodes() == 1);
  }
}

namespace {

// Exact inverse-CDF draws from the discrete power law on [xmin, inf),
// truncated far out in the tail.
std::vector<std::int64_t> power_law_sample(double alpha, std::int64_t xmin, std::size_t n, std::uint64_t seed) {
  const std::int64_t cap = 2'000'000;
  std::vector<double> cdf;
  double total = 0.0;
  for (std::int64_t x = xmin; x <= cap; ++x) {
    total += std::pow(static_cast<double>(x), -alpha);
    cdf.push_back(total);
  }
  testing::Rng rng(seed);
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform() * total;
    out.push_back(xmin + (std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin()));
  }
  return out;
}

}  // namespace

TEST_CASE("power-law fit") {
  SUBCASE("recovers alpha from exact samples") {
    for (double alpha : {2.2, 2.5, 3.0}) {
      const auto data = power_law_sample(alpha, 1, 20000, 17);
      const auto fit = fit_power_law(data, {.xmin = 1});
      CHECK(fit.alpha == doctest::Approx(alpha).epsilon(0.06 / alpha));
      CHECK(fit.n_tail == 20000);
      CHECK(fit.ks_distance < 0.02);
    }
  }
  SUBCASE("scanned xmin finds the tail of a mixture") {
    auto data = power_law_sample(2.5, 5, 20000, 3);
    for (int i = 0; i < 2000; ++i) data.push_back(1 + i % 4);
    const auto fit = fit_power_law(data);
    CHECK(fit.xmin >= 4);
    CHECK(fit.xmin <= 20);
    CHECK(fit.alpha == doctest::Approx(2.5).epsilon(0.04));
  }
  SUBCASE("values below a fixed xmin do not matter") {
    const auto data = power_law_sample(2.5, 3, 3000, 5);
    auto more = data;
    more.insert(more.end(), {1, 1, 2, 2, 2, 0});
    const auto a = fit_power_law(data, {.xmin = 3});
    const auto b = fit_power_law(more, {.xmin = 3});
    CHECK(a.alpha == b.alpha);
    CHECK(a.n_tail == b.n_tail);
  }
  SUBCASE("approximate method is close for larger xmin") {
    const auto data = power_law_sample(2.5, 10, 20000, 9);
    const auto fit = fit_power_law(data, {.xmin = 10, .method = PowerLawMethod::approximate});
    CHECK(fit.method == PowerLawMethod::approximate);
    CHECK(fit.alpha == doctest::Approx(2.5).epsilon(0.04));
  }
  SUBCASE("degenerate tails") {
    CHECK_THROWS_AS(fit_power_law(std::vector<std::int64_t>{3, 3, 3, 3}), ValidationError);
    CHECK_THROWS_AS(fit_power_law(std::vector<std::int64_t>{1, 2, 9}, {.xmin = 9}), ValidationError);
    CHECK_THROWS_AS(fit_power_law(std::vector<std::int64_t>{}), ValidationError);
  }
}
