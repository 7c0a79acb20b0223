#include "interact/reports.hpp"

#include <charconv>
#include <cmath>

namespace interact {

std::string format_real(double value) {
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, end);
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char ch : value) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string topics_csv(const ModelEstimate& estimate, std::size_t top_n) {
  std::string out = "topic,rank,word,probability\n";
  for (int k = 0; k < estimate.num_topics(); ++k) {
    const auto ranked = top_words(estimate, k, top_n);
    for (std::size_t r = 0; r < ranked.size(); ++r) {
      out += std::to_string(k) + ',' + std::to_string(r + 1) + ',' + csv_field(ranked[r].word) + ',' +
             format_real(ranked[r].probability) + '\n';
    }
  }
  return out;
}

std::string users_csv(const CountMatrices& counts, std::span<const std::string> users, std::size_t top_n) {
  std::string out = "topic,rank,user_id,probability\n";
  for (int k = 0; k < counts.num_topics(); ++k) {
    const auto ranked = top_users(counts, users, k, top_n);
    for (std::size_t r = 0; r < ranked.size(); ++r) {
      out += std::to_string(k) + ',' + std::to_string(r + 1) + ',' + csv_field(ranked[r].user_id) + ',' +
             format_real(ranked[r].probability) + '\n';
    }
  }
  return out;
}

std::string communities_csv(const ModelEstimate& estimate, const CommunityAssignment& assignment) {
  if (!estimate.mu) throw ValidationError("estimate has no community proportions");
  const std::string mode(to_string(assignment.mode));
  std::string out = "user_id,community,mu_probability,assignment_mode\n";
  for (std::size_t u = 0; u < assignment.memberships.size(); ++u) {
    for (std::int32_t c : assignment.memberships[u]) {
      out += csv_field(estimate.users[u]) + ',' + std::to_string(c) + ',' + format_real((*estimate.mu)(u, c)) + ',' +
             mode + '\n';
    }
  }
  return out;
}

std::string interest_csv(std::span<const InterestRow> rows) {
  std::string out = "user_id,topic,probability\n";
  for (const auto& row : rows) {
    out += csv_field(row.user_id) + ',' + std::to_string(row.topic) + ',' + format_real(row.probability) + '\n';
  }
  return out;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "value,perplexity,sweeps,seconds\n";
  for (const auto& row : rows) {
    out += std::to_string(row.value) + ',' + format_real(row.perplexity) + ',' + std::to_string(row.sweeps) + ',' +
           format_real(row.seconds) + '\n';
  }
  return out;
}

std::string community_sweep_csv(std::span<const CommunitySweepRow> rows) {
  std::string out = "communities,users_assigned\n";
  for (const auto& row : rows) out += std::to_string(row.communities) + ',' + std::to_string(row.users_assigned) + '\n';
  return out;
}

std::string node_metrics_csv(std::span<const NodeMetrics> rows) {
  std::string out(kNodeMetricsHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += csv_field(r.user_id) + ',' + std::to_string(r.degree) + ',' + format_real(r.clustering_coefficient) + ',' +
           std::to_string(r.eccentricity) + ',' + format_real(r.average_neighbor_degree) + ',' +
           format_real(r.betweenness_centrality) + ',' + format_real(r.closeness_centrality) + '\n';
  }
  return out;
}

std::string edge_list_csv(const InteractionGraph& graph) {
  std::string out = "src_id,dst_id,weight\n";
  for (const auto& [edge, w] : graph.directed_edges()) {
    out += csv_field(graph.node_id(edge.first)) + ',' + csv_field(graph.node_id(edge.second)) + ',' +
           std::to_string(w) + '\n';
  }
  return out;
}

std::string degree_distribution_csv(const DegreeDistribution& dist) {
  std::string out = "degree,count,ccdf\n";
  for (const auto& [d, p] : dist.ccdf) {
    out += std::to_string(d) + ',' + std::to_string(dist.histogram.at(d)) + ',' + format_real(p) + '\n';
  }
  return out;
}

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string graphml(const InteractionGraph& graph) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n"
      "  <graph id=\"interactions\" edgedefault=\"directed\">\n";
  for (std::size_t v = 0; v < graph.num_nodes(); ++v) {
    out += "    <node id=\"" + xml_escape(graph.node_id(static_cast<std::int32_t>(v))) + "\"/>\n";
  }
  for (const auto& [edge, w] : graph.directed_edges()) {
    out += "    <edge source=\"" + xml_escape(graph.node_id(edge.first)) + "\" target=\"" +
           xml_escape(graph.node_id(edge.second)) + "\"><data key=\"weight\">" + std::to_string(w) +
           "</data></edge>\n";
  }
  out += "  </graph>\n</graphml>\n";
  return out;
}

}  // namespace interact
