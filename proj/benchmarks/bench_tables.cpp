#include <benchmark/benchmark.h>

#include <sstream>

#include "foilgen/corpus_stats.hpp"
#include "synthetic.hpp"

namespace {

using namespace foilgen;

std::vector<SceneGraph> corpus(std::size_t n) {
  std::vector<SceneGraph> out;
  for (auto& [id, s] : testing::synthetic_corpus({.scenes = n, .seed = 1})) out.push_back(s);
  return out;
}

void BM_ParseScenes(benchmark::State& state) {
  std::ostringstream text;
  write_scene_graphs(testing::synthetic_corpus({.scenes = static_cast<std::size_t>(state.range(0)), .seed = 1}),
                     text);
  const std::string doc = text.str();
  for (auto _ : state) {
    std::istringstream in(doc);
    ParseReport report;
    std::size_t n = 0;
    for_each_scene_graph(in, [&](SceneGraph&&) { ++n; }, report);
    benchmark::DoNotOptimize(n);
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * doc.size()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ParseScenes)->Arg(100)->Arg(1000);

void BM_BuildTables(benchmark::State& state) {
  const auto scenes = corpus(2000);
  const auto workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto t = build_tables(scenes, workers);
    benchmark::DoNotOptimize(t.scene_count);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(scenes.size()));
}
BENCHMARK(BM_BuildTables)->Arg(1)->Arg(4)->UseRealTime();

void BM_TableRoundTrip(benchmark::State& state) {
  const auto tables = build_tables(corpus(2000));
  for (auto _ : state) {
    std::stringstream buf;
    write_tables(tables, buf);
    auto back = read_tables(buf);
    benchmark::DoNotOptimize(back.scene_count);
  }
}
BENCHMARK(BM_TableRoundTrip);

}  // namespace
