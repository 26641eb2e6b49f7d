#include <benchmark/benchmark.h>

#include "foilgen/foil_sampler.hpp"
#include "synthetic.hpp"

namespace {

using namespace foilgen;

void BM_Draw(benchmark::State& state) {
  WeightedCandidates<int> c;
  for (int i = 0; i < state.range(0); ++i) c.push_back({i, 1.0 + i % 7});
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(draw(c, rng));
}
BENCHMARK(BM_Draw)->Arg(2)->Arg(16)->Arg(256);

struct SamplerData {
  SceneGraphMap scenes = testing::synthetic_corpus({.scenes = 1000, .seed = 2});
  LookupTables tables = build_tables(scenes);
  CandidateIndex index{tables};
};

const SamplerData& data() {
  static const SamplerData d;
  return d;
}

void BM_CandidatePredicates(benchmark::State& state) {
  const auto& d = data();
  SamplerSettings s;
  s.regime.plausibility = state.range(0) == 0 ? Plausibility::Strict : Plausibility::Relaxed;
  std::vector<std::pair<const SceneGraph*, RelationTriple>> triples;
  for (const auto& [id, scene] : d.scenes) {
    for (auto& t : relation_triples(scene)) triples.emplace_back(&scene, t);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [scene, t] = triples[i++ % triples.size()];
    benchmark::DoNotOptimize(candidate_predicates(t, *scene, d.index, s));
  }
}
BENCHMARK(BM_CandidatePredicates)->Arg(0)->Arg(1);

void BM_CandidateEntities(benchmark::State& state) {
  const auto& d = data();
  SamplerSettings s;
  std::vector<std::pair<const SceneGraph*, RelationTriple>> triples;
  for (const auto& [id, scene] : d.scenes) {
    for (auto& t : relation_triples(scene)) triples.emplace_back(&scene, t);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [scene, t] = triples[i++ % triples.size()];
    benchmark::DoNotOptimize(candidate_entities(FoilSlot::Object, t, *scene, d.index, s));
  }
}
BENCHMARK(BM_CandidateEntities);

}  // namespace
