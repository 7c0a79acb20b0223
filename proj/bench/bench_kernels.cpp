// Serial reference vs OpenMP kernel, pairwise.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <string>

#include "graph_oracle.hpp"
#include "interact/corpus.hpp"
#include "interact/evaluation.hpp"
#include "interact/graph.hpp"
#include "interact/synthgen.hpp"

using namespace interact;

namespace {

const UndirectedView& bench_graph(int n) {
  static std::map<int, UndirectedView> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    const auto g = largest_connected_component(testing::random_connected_graph(7, n, 8.0 / n));
    it = cache.emplace(n, g.undirected()).first;
  }
  return it->second;
}

void BM_AllSourcesSerial(benchmark::State& state) {
  const auto& view = bench_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::all_sources_serial(view));
}

void BM_AllSourcesParallel(benchmark::State& state) {
  const auto& view = bench_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::all_sources_parallel(view));
}

void BM_TrianglesSerial(benchmark::State& state) {
  const auto& view = bench_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::triangles_serial(view));
}

void BM_TrianglesParallel(benchmark::State& state) {
  const auto& view = bench_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::triangles_parallel(view));
}

struct PerplexityFixture {
  ModelEstimate estimate;
  Corpus test;
};

const PerplexityFixture& perplexity_fixture() {
  static const PerplexityFixture f = [] {
    SynthSpec s;
    s.num_topics = 20;
    s.num_words = 2000;
    s.num_users = 400;
    s.docs_per_user = 5;
    s.seed = 1;
    const SyntheticCorpus g = generate_uipm(s);
    PerplexityFixture out;
    out.test = g.corpus;
    out.estimate.phi = g.truth.phi;
    out.estimate.words = {g.corpus.vocabulary.keys().begin(), g.corpus.vocabulary.keys().end()};
    out.estimate.meta.kind = ModelKind::uipm;
    out.estimate.meta.hyperparams = Hyperparams::defaults(20);
    return out;
  }();
  return f;
}

void BM_PerplexitySerial(benchmark::State& state) {
  const auto& f = perplexity_fixture();
  for (auto _ : state) benchmark::DoNotOptimize(perplexity_serial(f.estimate, f.test));
}

void BM_PerplexityParallel(benchmark::State& state) {
  const auto& f = perplexity_fixture();
  for (auto _ : state) benchmark::DoNotOptimize(perplexity(f.estimate, f.test));
}

const std::string& records_text() {
  static const std::string text = [] {
    SynthSpec s;
    s.num_users = 2000;
    s.docs_per_user = 20;
    s.num_communities = 10;
    s.seed = 2;
    std::string out;
    for (const auto& r : generate_cipm(s).records) out += to_json_line(r) + "\n";
    return out;
  }();
  return text;
}

// No separate serial function here: one thread is the reference.
void BM_ParseRecords(benchmark::State& state) {
  const std::string& text = records_text();
  const int saved = omp_get_max_threads();
  omp_set_num_threads(state.range(0) == 0 ? saved : static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(parse_records(text));
  omp_set_num_threads(saved);
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}

}  // namespace

BENCHMARK(BM_AllSourcesSerial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AllSourcesParallel)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrianglesSerial)->Arg(2000)->Arg(20000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_TrianglesParallel)->Arg(2000)->Arg(20000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PerplexitySerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PerplexityParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ParseRecords)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
