#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "interact/corpus.hpp"

namespace interact {

enum class EdgeDirection {
  mentioner_to_mentioned,  // author -> each mentioned user (default)
  mentioned_to_mentioner,
};

std::string_view to_string(EdgeDirection direction);
EdgeDirection parse_edge_direction(std::string_view name);

/// Compressed adjacency of the undirected view. Neighbor lists are sorted.
struct UndirectedView {
  std::vector<std::size_t> offsets;  // size n + 1
  std::vector<std::int32_t> neighbors;
  std::vector<std::int64_t> weights;  // summed multiplicity of both directions

  std::size_t num_nodes() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::size_t num_edges() const { return neighbors.size() / 2; }
  std::size_t degree(std::int32_t v) const { return offsets[v + 1] - offsets[v]; }
  std::span<const std::int32_t> adjacent(std::int32_t v) const {
    return {neighbors.data() + offsets[v], degree(v)};
  }
};

/// Mention graph: a node per user, a weighted directed edge per ordered pair
/// that interacted. Self-loops are never stored.
class InteractionGraph {
 public:
  std::int32_t add_node(std::string_view user_id) { return nodes_.intern(user_id); }
  /// Adds `weight` mention events src -> dst; ignored when src == dst.
  void add_edge_event(std::int32_t src, std::int32_t dst, std::int64_t weight = 1);

  std::size_t num_nodes() const { return nodes_.size(); }
  const std::string& node_id(std::int32_t v) const { return nodes_.at(v); }
  std::optional<std::int32_t> find_node(std::string_view user_id) const { return nodes_.find(user_id); }

  /// Ordered by (src, dst).
  const std::map<std::pair<std::int32_t, std::int32_t>, std::int64_t>& directed_edges() const { return edges_; }
  std::size_t num_directed_edges() const { return edges_.size(); }
  std::size_t num_undirected_edges() const;

  UndirectedView undirected() const;

  /// Subgraph on `nodes` (kept in the given order) with every edge between them.
  InteractionGraph induced_subgraph(std::span<const std::int32_t> nodes) const;

 private:
  Interner nodes_;
  std::map<std::pair<std::int32_t, std::int32_t>, std::int64_t> edges_;
};

/// One edge event per (author, mention) pair of each record; every author and
/// every mentioned user becomes a node, in first-seen order.
InteractionGraph build_graph(std::span<const InteractionRecord> records,
                             EdgeDirection direction = EdgeDirection::mentioner_to_mentioned);
/// Same construction from a corpus (only posts that survived ingestion).
InteractionGraph build_graph(const Corpus& corpus,
                             EdgeDirection direction = EdgeDirection::mentioner_to_mentioned);

enum class DegreeMode { in, out, total };

/// in/out count distinct directed neighbors; total is the undirected degree.
std::vector<std::int64_t> node_degrees(const InteractionGraph& graph, DegreeMode mode);

struct DegreeDistribution {
  std::map<std::int64_t, std::int64_t> histogram;            // degree -> node count
  std::vector<std::pair<std::int64_t, double>> ccdf;         // (d, P(D >= d)), d ascending
};

DegreeDistribution degree_distribution(const InteractionGraph& graph, DegreeMode mode);

enum class PowerLawMethod {
  exact,        // maximizes the Hurwitz-zeta likelihood
  approximate,  // 1 + n / sum ln(d / (xmin - 1/2)); accurate only for larger xmin
};

struct PowerLawOptions {
  std::optional<std::int64_t> xmin;  // unset: choose by minimum KS distance
  PowerLawMethod method = PowerLawMethod::exact;
};

struct PowerLawFit {
  double alpha = 0.0;
  std::int64_t xmin = 1;
  std::size_t n_tail = 0;
  double ks_distance = 0.0;
  PowerLawMethod method = PowerLawMethod::exact;
};

/// Discrete power-law fit to the tail d >= xmin. Throws ValidationError when
/// fewer than two observations reach xmin or they are all equal.
PowerLawFit fit_power_law(std::span<const std::int64_t> degrees, const PowerLawOptions& options = {});

/// Node-induced subgraph of the largest undirected component; ties go to the
/// component holding the smallest node index.
InteractionGraph largest_connected_component(const InteractionGraph& graph);

bool is_connected(const UndirectedView& view);

struct NodeMetrics {
  std::string user_id;
  std::int64_t degree = 0;
  double clustering_coefficient = 0.0;
  std::int64_t eccentricity = 0;
  double average_neighbor_degree = 0.0;
  double betweenness_centrality = 0.0;
  double closeness_centrality = 0.0;
};

/// CSV header of the node metrics table, in column order.
inline constexpr std::string_view kNodeMetricsHeader =
    "user_id,degree,clustering_coefficient,eccentricity,average_neighbor_degree,"
    "betweenness_centrality,closeness_centrality";

/// Metrics on the unweighted undirected view of a connected graph.
/// Betweenness is normalized by (n-1)(n-2)/2 and closeness is (n-1)/sum(d).
/// Per-source BFS and Brandes accumulation run in parallel.
/// Throws ValidationError if the graph is empty or disconnected.
std::vector<NodeMetrics> node_metrics(const InteractionGraph& graph);
/// Single-threaded reference for node_metrics().
std::vector<NodeMetrics> node_metrics_serial(const InteractionGraph& graph);

struct GraphMetrics {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double density = 0.0;
  std::int64_t radius = 0;
  std::int64_t diameter = 0;
  double transitivity = 0.0;
};

/// Throws ValidationError for fewer than 2 nodes or a disconnected graph.
GraphMetrics graph_metrics(const InteractionGraph& graph);

// Kernels over an undirected view, exposed for tests and benchmarks.
namespace kernels {

struct SourceSweep {
  std::vector<double> betweenness;  // normalized
  std::vector<std::int64_t> eccentricity;
  std::vector<std::int64_t> distance_sum;
};

SourceSweep all_sources_serial(const UndirectedView& view);
SourceSweep all_sources_parallel(const UndirectedView& view);

/// Triangles through each node.
std::vector<std::int64_t> triangles_serial(const UndirectedView& view);
std::vector<std::int64_t> triangles_parallel(const UndirectedView& view);

}  // namespace kernels

}  // namespace interact
