#include <benchmark/benchmark.h>

#include <sstream>

#include "foilgen/pipeline.hpp"
#include "harness.hpp"
#include "synthetic.hpp"

namespace {

using namespace foilgen;

void BM_GenerateImage(benchmark::State& state) {
  const auto scenes = testing::synthetic_corpus({.scenes = 500, .seed = 3});
  const auto tables = build_tables(scenes);
  const CandidateIndex index(tables);
  const auto config = testing::config_for("clean-strict", 1, FoilWeighting::Matched,
                                          static_cast<int>(state.range(0)));
  const GenerationContext ctx(index, testing::default_assets().clusters,
                              testing::default_assets().lexicons, config);
  auto it = scenes.begin();
  std::size_t pairs = 0;
  for (auto _ : state) {
    pairs += generate_for_image(it->second, ctx).pairs.size();
    if (++it == scenes.end()) it = scenes.begin();
  }
  state.SetItemsProcessed(state.iterations());
  state.counters["pairs_per_image"] =
      benchmark::Counter(static_cast<double>(pairs), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_GenerateImage)->Arg(1)->Arg(1000);

void BM_Pipeline(benchmark::State& state) {
  const auto scenes = testing::synthetic_corpus({.scenes = 2000, .seed = 4});
  const auto tables = build_tables(scenes);
  const CandidateIndex index(tables);
  const auto config = testing::config_for("clean-strict", 1);
  const GenerationContext ctx(index, testing::default_assets().clusters,
                              testing::default_assets().lexicons, config);
  std::ostringstream doc;
  write_scene_graphs(scenes, doc);
  const std::string text = doc.str();
  const auto workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    std::istringstream in(text);
    std::ostringstream out;
    auto r = run_generation(in, ctx, SplitAssignment(), out, {.workers = workers});
    benchmark::DoNotOptimize(r.stats.total_captions);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(scenes.size()));
}
BENCHMARK(BM_Pipeline)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace
