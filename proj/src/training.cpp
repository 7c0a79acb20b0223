#include "interact/training.hpp"

#include "interact/cipm.hpp"
#include "interact/ipm.hpp"
#include "interact/uipm.hpp"

namespace interact {

namespace {

template <typename Sampler>
TrainedModel run(Sampler& sampler, const TrainOptions& options) {
  TrainedModel trained;
  for (std::int64_t s = 1; s <= options.sweeps; ++s) {
    sampler.sweep();
    if (options.trace_every > 0 && (s % options.trace_every == 0 || s == options.sweeps)) {
      const TracePoint point{s, sampler.chain().train_perplexity()};
      trained.trace.push_back(point);
      if (options.on_trace) options.on_trace(point);
    }
  }
  trained.estimate = sampler.estimate();
  trained.counts = sampler.chain().counts();
  trained.topics.assign(sampler.chain().topics().begin(), sampler.chain().topics().end());
  return trained;
}

}  // namespace

TrainedModel train_model(const Corpus& corpus, const TrainOptions& options) {
  if (options.sweeps < 0) throw ValidationError("sweeps must be >= 0");
  options.hyperparams.validate();
  switch (options.kind) {
    case ModelKind::ipm: {
      IpmSampler sampler(corpus, options.hyperparams, options.seed);
      return run(sampler, options);
    }
    case ModelKind::uipm: {
      UipmSampler sampler(corpus, options.hyperparams, options.seed);
      return run(sampler, options);
    }
    case ModelKind::cipm: {
      CipmSampler sampler(corpus, options.hyperparams, options.seed);
      TrainedModel trained = run(sampler, options);
      trained.communities.assign(sampler.communities().begin(), sampler.communities().end());
      return trained;
    }
  }
  throw ValidationError("unknown model kind");
}

}  // namespace interact
