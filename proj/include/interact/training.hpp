#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "interact/corpus.hpp"
#include "interact/model.hpp"

namespace interact {

struct TracePoint {
  std::int64_t sweep = 0;
  double perplexity = 0.0;
};

struct TrainOptions {
  ModelKind kind = ModelKind::ipm;
  Hyperparams hyperparams;
  std::uint64_t seed = 0;
  std::int64_t sweeps = 1000;
  /// Train perplexity is recorded every `trace_every` sweeps; 0 disables it.
  std::int64_t trace_every = 10;
  std::function<void(const TracePoint&)> on_trace;
};

/// Final state of a single chain; estimates come from the last sweep only.
struct TrainedModel {
  ModelEstimate estimate;
  CountMatrices counts;
  std::vector<std::int32_t> topics;
  std::vector<std::int32_t> communities;  // CIPM only
  std::vector<TracePoint> trace;
};

TrainedModel train_model(const Corpus& corpus, const TrainOptions& options);

}  // namespace interact
