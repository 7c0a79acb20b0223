#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "interact/cipm.hpp"
#include "interact/corpus.hpp"
#include "interact/evaluation.hpp"
#include "interact/graph.hpp"
#include "interact/model.hpp"

namespace interact {

// CSV output: comma separated, header row, LF line endings. Reals use the
// shortest representation that round-trips.

std::string format_real(double value);
/// Quotes the field if it contains a comma, quote or line break.
std::string csv_field(std::string_view value);

/// topic,rank,word,probability
std::string topics_csv(const ModelEstimate& estimate, std::size_t top_n);
/// topic,rank,user_id,probability
std::string users_csv(const CountMatrices& counts, std::span<const std::string> users, std::size_t top_n);
/// user_id,community,mu_probability,assignment_mode
std::string communities_csv(const ModelEstimate& estimate, const CommunityAssignment& assignment);
/// user_id,topic,probability
std::string interest_csv(std::span<const InterestRow> rows);
/// value,perplexity,sweeps,seconds
std::string sweep_csv(std::span<const SweepRow> rows);
/// communities,users_assigned
std::string community_sweep_csv(std::span<const CommunitySweepRow> rows);
/// The seven node metric columns.
std::string node_metrics_csv(std::span<const NodeMetrics> rows);
/// src_id,dst_id,weight
std::string edge_list_csv(const InteractionGraph& graph);
/// degree,count,ccdf
std::string degree_distribution_csv(const DegreeDistribution& dist);
/// Directed GraphML with an integer `weight` edge attribute.
std::string graphml(const InteractionGraph& graph);

}  // namespace interact
