#include <benchmark/benchmark.h>

#include "foilgen/bias_audit.hpp"
#include "harness.hpp"
#include "synthetic.hpp"

namespace {

using namespace foilgen;

const std::vector<DatasetRecord>& records() {
  static const auto recs = [] {
    const auto scenes = testing::synthetic_corpus({.scenes = 1000, .seed = 5});
    const auto tables = build_tables(scenes);
    const auto config = testing::config_for("clean-strict", 1);
    return testing::to_records(testing::generate_all(scenes, tables, config).pairs, config);
  }();
  return recs;
}

void BM_Featurize(benchmark::State& state) {
  const auto& recs = records();
  for (auto _ : state) {
    BowFeaturizer f;
    for (const auto& r : recs) f.fit(r.text);
    benchmark::DoNotOptimize(f.size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(recs.size()));
}
BENCHMARK(BM_Featurize)->Unit(benchmark::kMillisecond);

void BM_TrainProbe(benchmark::State& state) {
  const auto& recs = records();
  BowFeaturizer f;
  for (const auto& r : recs) f.fit(r.text);
  std::vector<Example> examples;
  for (const auto& r : recs) examples.push_back({f.transform(r.text), r.label, r.caption_type});
  ProbeHyperparams params;
  params.epochs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto m = train_probe(examples, f.size(), params);
    benchmark::DoNotOptimize(m.final_loss);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<std::int64_t>(examples.size()));
}
BENCHMARK(BM_TrainProbe)->Arg(1)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_Audit(benchmark::State& state) {
  const auto& recs = records();
  for (auto _ : state) benchmark::DoNotOptimize(run_audit(recs).probe_accuracy);
}
BENCHMARK(BM_Audit)->Unit(benchmark::kMillisecond);

}  // namespace
