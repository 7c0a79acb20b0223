#include "interact/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include <boost/math/tools/minima.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_zeta.h>
#include <omp.h>

#include "interact/common.hpp"

namespace interact {

std::string_view to_string(EdgeDirection direction) {
  return direction == EdgeDirection::mentioner_to_mentioned ? "mentioner_to_mentioned" : "mentioned_to_mentioner";
}

EdgeDirection parse_edge_direction(std::string_view name) {
  if (name == "mentioner_to_mentioned") return EdgeDirection::mentioner_to_mentioned;
  if (name == "mentioned_to_mentioner") return EdgeDirection::mentioned_to_mentioner;
  throw ValidationError("unknown edge direction: " + std::string(name));
}

void InteractionGraph::add_edge_event(std::int32_t src, std::int32_t dst, std::int64_t weight) {
  const auto n = static_cast<std::int32_t>(num_nodes());
  if (src < 0 || dst < 0 || src >= n || dst >= n) throw ValidationError("edge endpoint out of range");
  if (weight <= 0) throw ValidationError("edge weight must be positive");
  if (src == dst) return;
  edges_[{src, dst}] += weight;
}

std::size_t InteractionGraph::num_undirected_edges() const {
  std::size_t count = 0;
  for (const auto& [edge, w] : edges_) {
    const auto [a, b] = edge;
    // a reciprocated pair is one undirected edge; count it from its smaller end
    if (a < b || !edges_.contains({b, a})) ++count;
  }
  return count;
}

UndirectedView InteractionGraph::undirected() const {
  const std::size_t n = num_nodes();
  std::vector<std::map<std::int32_t, std::int64_t>> adj(n);
  for (const auto& [edge, w] : edges_) {
    adj[edge.first][edge.second] += w;
    adj[edge.second][edge.first] += w;
  }
  UndirectedView view;
  view.offsets.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) view.offsets[v + 1] = view.offsets[v] + adj[v].size();
  view.neighbors.reserve(view.offsets[n]);
  view.weights.reserve(view.offsets[n]);
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& [u, w] : adj[v]) {
      view.neighbors.push_back(u);
      view.weights.push_back(w);
    }
  }
  return view;
}

InteractionGraph InteractionGraph::induced_subgraph(std::span<const std::int32_t> nodes) const {
  InteractionGraph sub;
  std::vector<std::int32_t> remap(num_nodes(), -1);
  for (std::int32_t v : nodes) {
    if (v < 0 || static_cast<std::size_t>(v) >= num_nodes()) throw ValidationError("node out of range");
    if (remap[v] >= 0) throw ValidationError("duplicate node in subgraph selection");
    remap[v] = sub.add_node(node_id(v));
  }
  for (const auto& [edge, w] : edges_) {
    const std::int32_t a = remap[edge.first];
    const std::int32_t b = remap[edge.second];
    if (a >= 0 && b >= 0) sub.edges_[{a, b}] += w;
  }
  return sub;
}

InteractionGraph build_graph(std::span<const InteractionRecord> records, EdgeDirection direction) {
  InteractionGraph graph;
  for (const auto& record : records) {
    const std::int32_t author = graph.add_node(record.author_id);
    for (const auto& mention : record.mentions) {
      const std::int32_t other = graph.add_node(mention);
      if (direction == EdgeDirection::mentioner_to_mentioned) {
        graph.add_edge_event(author, other);
      } else {
        graph.add_edge_event(other, author);
      }
    }
  }
  return graph;
}

InteractionGraph build_graph(const Corpus& corpus, EdgeDirection direction) {
  InteractionGraph graph;
  for (const auto& doc : corpus.docs) {
    const std::int32_t author = graph.add_node(corpus.users.at(doc.author));
    for (std::int32_t m : doc.mentions) {
      const std::int32_t other = graph.add_node(corpus.users.at(m));
      if (direction == EdgeDirection::mentioner_to_mentioned) {
        graph.add_edge_event(author, other);
      } else {
        graph.add_edge_event(other, author);
      }
    }
  }
  return graph;
}

std::vector<std::int64_t> node_degrees(const InteractionGraph& graph, DegreeMode mode) {
  std::vector<std::int64_t> degree(graph.num_nodes(), 0);
  if (mode == DegreeMode::total) {
    const UndirectedView view = graph.undirected();
    for (std::size_t v = 0; v < degree.size(); ++v) {
      degree[v] = static_cast<std::int64_t>(view.degree(static_cast<std::int32_t>(v)));
    }
    return degree;
  }
  for (const auto& [edge, w] : graph.directed_edges()) {
    ++degree[mode == DegreeMode::out ? edge.first : edge.second];
  }
  return degree;
}

DegreeDistribution degree_distribution(const InteractionGraph& graph, DegreeMode mode) {
  DegreeDistribution dist;
  const auto degrees = node_degrees(graph, mode);
  for (std::int64_t d : degrees) ++dist.histogram[d];
  const auto n = static_cast<double>(degrees.size());
  std::int64_t at_least = static_cast<std::int64_t>(degrees.size());
  for (const auto& [d, count] : dist.histogram) {
    dist.ccdf.emplace_back(d, static_cast<double>(at_least) / n);
    at_least -= count;
  }
  return dist;
}

namespace {

double hurwitz_zeta(double s, double q) {
  gsl_sf_result result;
  const int status = gsl_sf_hzeta_e(s, q, &result);
  if (status != GSL_SUCCESS) {
    throw ValidationError(std::string("Hurwitz zeta failed: ") + gsl_strerror(status));
  }
  return result.val;
}

struct GslHandlerOff {
  GslHandlerOff() { gsl_set_error_handler_off(); }
};

double fit_alpha(std::span<const std::int64_t> tail, std::int64_t xmin, PowerLawMethod method) {
  const auto n = static_cast<double>(tail.size());
  if (method == PowerLawMethod::approximate) {
    double s = 0.0;
    for (std::int64_t d : tail) s += std::log(static_cast<double>(d) / (static_cast<double>(xmin) - 0.5));
    return 1.0 + n / s;
  }
  double log_sum = 0.0;
  for (std::int64_t d : tail) log_sum += std::log(static_cast<double>(d));
  const double q = static_cast<double>(xmin);
  const auto neg_log_likelihood = [&](double a) { return n * std::log(hurwitz_zeta(a, q)) + a * log_sum; };
  const auto [alpha, value] =
      boost::math::tools::brent_find_minima(neg_log_likelihood, 1.0 + 1e-6, 20.0, std::numeric_limits<double>::digits / 2);
  (void)value;
  return alpha;
}

// Max distance between the empirical CDF of the tail and the fitted discrete CDF.
double ks_distance(std::span<const std::int64_t> sorted_tail, std::int64_t xmin, double alpha) {
  const double norm = hurwitz_zeta(alpha, static_cast<double>(xmin));
  const auto n = static_cast<double>(sorted_tail.size());
  double worst = 0.0;
  std::size_t i = 0;
  while (i < sorted_tail.size()) {
    const std::int64_t x = sorted_tail[i];
    std::size_t j = i;
    while (j < sorted_tail.size() && sorted_tail[j] == x) ++j;
    const double empirical = static_cast<double>(j) / n;
    const double model = 1.0 - hurwitz_zeta(alpha, static_cast<double>(x + 1)) / norm;
    worst = std::max(worst, std::abs(empirical - model));
    i = j;
  }
  return worst;
}

PowerLawFit fit_at(std::span<const std::int64_t> sorted, std::int64_t xmin, PowerLawMethod method) {
  const auto first = std::lower_bound(sorted.begin(), sorted.end(), xmin);
  const std::span<const std::int64_t> tail(first, sorted.end());
  if (tail.size() < 2) throw ValidationError("power-law tail needs at least two observations >= xmin");
  if (tail.front() == tail.back()) throw ValidationError("power-law tail is degenerate (all values equal)");
  PowerLawFit fit;
  fit.method = method;
  fit.xmin = xmin;
  fit.n_tail = tail.size();
  fit.alpha = fit_alpha(tail, xmin, method);
  fit.ks_distance = ks_distance(tail, xmin, fit.alpha);
  return fit;
}

}  // namespace

PowerLawFit fit_power_law(std::span<const std::int64_t> degrees, const PowerLawOptions& options) {
  static const GslHandlerOff gsl_handler_off;
  std::vector<std::int64_t> sorted;
  sorted.reserve(degrees.size());
  for (std::int64_t d : degrees) {
    if (d >= 1) sorted.push_back(d);
  }
  std::sort(sorted.begin(), sorted.end());
  if (options.xmin) {
    if (*options.xmin < 1) throw ValidationError("xmin must be >= 1");
    return fit_at(sorted, *options.xmin, options.method);
  }
  std::optional<PowerLawFit> best;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0 && sorted[i] == sorted[i - 1]) continue;
    if (sorted.size() - i < 2 || sorted[i] == sorted.back()) break;
    const PowerLawFit fit = fit_at(sorted, sorted[i], options.method);
    if (!best || fit.ks_distance < best->ks_distance) best = fit;
  }
  if (!best) throw ValidationError("power-law fit needs at least two distinct degrees >= 1");
  return *best;
}

bool is_connected(const UndirectedView& view) {
  const std::size_t n = view.num_nodes();
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::vector<std::int32_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::int32_t v = stack.back();
    stack.pop_back();
    for (std::int32_t u : view.adjacent(v)) {
      if (!seen[u]) {
        seen[u] = 1;
        ++reached;
        stack.push_back(u);
      }
    }
  }
  return reached == n;
}

InteractionGraph largest_connected_component(const InteractionGraph& graph) {
  const UndirectedView view = graph.undirected();
  const std::size_t n = view.num_nodes();
  std::vector<std::int32_t> component(n, -1);
  std::vector<std::int32_t> best;
  std::int32_t label = 0;
  for (std::size_t start = 0; start < n; ++start) {
    if (component[start] >= 0) continue;
    std::vector<std::int32_t> members{static_cast<std::int32_t>(start)};
    component[start] = label;
    for (std::size_t head = 0; head < members.size(); ++head) {
      for (std::int32_t u : view.adjacent(members[head])) {
        if (component[u] < 0) {
          component[u] = label;
          members.push_back(u);
        }
      }
    }
    if (members.size() > best.size()) best = std::move(members);
    ++label;
  }
  std::sort(best.begin(), best.end());
  return graph.induced_subgraph(best);
}

namespace kernels {

namespace {

struct Workspace {
  std::vector<std::int64_t> dist;
  std::vector<double> sigma;
  std::vector<double> delta;
  std::vector<std::int32_t> order;

  explicit Workspace(std::size_t n) : dist(n), sigma(n), delta(n) { order.reserve(n); }
};

// BFS from s plus Brandes dependency accumulation into `bc` (unnormalized).
void single_source(const UndirectedView& view, std::int32_t s, Workspace& ws, std::span<double> bc,
                   std::int64_t& eccentricity, std::int64_t& distance_sum) {
  std::fill(ws.dist.begin(), ws.dist.end(), -1);
  std::fill(ws.sigma.begin(), ws.sigma.end(), 0.0);
  std::fill(ws.delta.begin(), ws.delta.end(), 0.0);
  ws.order.clear();
  ws.dist[s] = 0;
  ws.sigma[s] = 1.0;
  ws.order.push_back(s);
  for (std::size_t head = 0; head < ws.order.size(); ++head) {
    const std::int32_t v = ws.order[head];
    for (std::int32_t u : view.adjacent(v)) {
      if (ws.dist[u] < 0) {
        ws.dist[u] = ws.dist[v] + 1;
        ws.order.push_back(u);
      }
      if (ws.dist[u] == ws.dist[v] + 1) ws.sigma[u] += ws.sigma[v];
    }
  }
  eccentricity = 0;
  distance_sum = 0;
  for (std::int32_t v : ws.order) {
    eccentricity = std::max(eccentricity, ws.dist[v]);
    distance_sum += ws.dist[v];
  }
  for (auto it = ws.order.rbegin(); it != ws.order.rend(); ++it) {
    const std::int32_t w = *it;
    for (std::int32_t v : view.adjacent(w)) {
      if (ws.dist[v] == ws.dist[w] - 1) ws.delta[v] += ws.sigma[v] / ws.sigma[w] * (1.0 + ws.delta[w]);
    }
    if (w != s) bc[w] += ws.delta[w];
  }
}

void normalize(std::vector<double>& bc) {
  const std::size_t n = bc.size();
  // each unordered pair was counted from both ends
  const double scale = n > 2 ? 1.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2)) : 0.0;
  for (double& b : bc) b *= scale;
}

}  // namespace

SourceSweep all_sources_serial(const UndirectedView& view) {
  const std::size_t n = view.num_nodes();
  SourceSweep out{std::vector<double>(n, 0.0), std::vector<std::int64_t>(n, 0), std::vector<std::int64_t>(n, 0)};
  Workspace ws(n);
  for (std::size_t s = 0; s < n; ++s) {
    single_source(view, static_cast<std::int32_t>(s), ws, out.betweenness, out.eccentricity[s], out.distance_sum[s]);
  }
  normalize(out.betweenness);
  return out;
}

SourceSweep all_sources_parallel(const UndirectedView& view) {
  const std::size_t n = view.num_nodes();
  SourceSweep out{std::vector<double>(n, 0.0), std::vector<std::int64_t>(n, 0), std::vector<std::int64_t>(n, 0)};
  const int threads = omp_get_max_threads();
  std::vector<std::vector<double>> partial(static_cast<std::size_t>(threads));
#pragma omp parallel num_threads(threads)
  {
    const int t = omp_get_thread_num();
    auto& bc = partial[static_cast<std::size_t>(t)];
    bc.assign(n, 0.0);
    Workspace ws(n);
#pragma omp for schedule(static)
    for (std::int64_t s = 0; s < static_cast<std::int64_t>(n); ++s) {
      single_source(view, static_cast<std::int32_t>(s), ws, bc, out.eccentricity[s], out.distance_sum[s]);
    }
  }
  // reduce in thread order so the result only depends on the thread count
  for (const auto& bc : partial) {
    if (bc.empty()) continue;
    for (std::size_t v = 0; v < n; ++v) out.betweenness[v] += bc[v];
  }
  normalize(out.betweenness);
  return out;
}

namespace {

std::int64_t triangles_at(const UndirectedView& view, std::int32_t v, std::vector<char>& mark) {
  for (std::int32_t u : view.adjacent(v)) mark[u] = 1;
  std::int64_t links = 0;
  for (std::int32_t u : view.adjacent(v)) {
    for (std::int32_t w : view.adjacent(u)) links += mark[w];
  }
  for (std::int32_t u : view.adjacent(v)) mark[u] = 0;
  return links / 2;
}

}  // namespace

std::vector<std::int64_t> triangles_serial(const UndirectedView& view) {
  const std::size_t n = view.num_nodes();
  std::vector<std::int64_t> tri(n, 0);
  std::vector<char> mark(n, 0);
  for (std::size_t v = 0; v < n; ++v) tri[v] = triangles_at(view, static_cast<std::int32_t>(v), mark);
  return tri;
}

std::vector<std::int64_t> triangles_parallel(const UndirectedView& view) {
  const std::size_t n = view.num_nodes();
  std::vector<std::int64_t> tri(n, 0);
#pragma omp parallel
  {
    std::vector<char> mark(n, 0);
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t v = 0; v < static_cast<std::int64_t>(n); ++v) {
      tri[v] = triangles_at(view, static_cast<std::int32_t>(v), mark);
    }
  }
  return tri;
}

}  // namespace kernels

namespace {

UndirectedView connected_view(const InteractionGraph& graph) {
  UndirectedView view = graph.undirected();
  if (view.num_nodes() == 0) throw ValidationError("graph has no nodes");
  if (!is_connected(view)) {
    throw ValidationError("graph is disconnected; restrict it to the largest connected component first");
  }
  return view;
}

std::vector<NodeMetrics> assemble(const InteractionGraph& graph, const UndirectedView& view,
                                  const kernels::SourceSweep& sweep, const std::vector<std::int64_t>& triangles) {
  const std::size_t n = view.num_nodes();
  std::vector<NodeMetrics> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = static_cast<std::int32_t>(i);
    NodeMetrics& row = rows[i];
    row.user_id = graph.node_id(v);
    const auto deg = static_cast<std::int64_t>(view.degree(v));
    row.degree = deg;
    row.clustering_coefficient =
        deg < 2 ? 0.0 : 2.0 * static_cast<double>(triangles[i]) / (static_cast<double>(deg) * static_cast<double>(deg - 1));
    row.eccentricity = sweep.eccentricity[i];
    if (deg > 0) {
      double sum = 0.0;
      for (std::int32_t u : view.adjacent(v)) sum += static_cast<double>(view.degree(u));
      row.average_neighbor_degree = sum / static_cast<double>(deg);
    }
    row.betweenness_centrality = sweep.betweenness[i];
    row.closeness_centrality =
        sweep.distance_sum[i] > 0 ? static_cast<double>(n - 1) / static_cast<double>(sweep.distance_sum[i]) : 0.0;
  }
  return rows;
}

}  // namespace

std::vector<NodeMetrics> node_metrics(const InteractionGraph& graph) {
  const UndirectedView view = connected_view(graph);
  return assemble(graph, view, kernels::all_sources_parallel(view), kernels::triangles_parallel(view));
}

std::vector<NodeMetrics> node_metrics_serial(const InteractionGraph& graph) {
  const UndirectedView view = connected_view(graph);
  return assemble(graph, view, kernels::all_sources_serial(view), kernels::triangles_serial(view));
}

GraphMetrics graph_metrics(const InteractionGraph& graph) {
  if (graph.num_nodes() < 2) throw ValidationError("graph metrics need at least 2 nodes");
  const UndirectedView view = connected_view(graph);
  const auto sweep = kernels::all_sources_parallel(view);
  const auto triangles = kernels::triangles_parallel(view);
  GraphMetrics m;
  m.nodes = view.num_nodes();
  m.edges = view.num_edges();
  const auto n = static_cast<double>(m.nodes);
  m.density = 2.0 * static_cast<double>(m.edges) / (n * (n - 1.0));
  m.radius = *std::min_element(sweep.eccentricity.begin(), sweep.eccentricity.end());
  m.diameter = *std::max_element(sweep.eccentricity.begin(), sweep.eccentricity.end());
  std::int64_t closed = 0;
  std::int64_t triads = 0;
  for (std::size_t v = 0; v < m.nodes; ++v) {
    const auto d = static_cast<std::int64_t>(view.degree(static_cast<std::int32_t>(v)));
    closed += triangles[v];
    triads += d * (d - 1) / 2;
  }
  m.transitivity = triads > 0 ? static_cast<double>(closed) / static_cast<double>(triads) : 0.0;
  return m;
}

}  // namespace interact
