#pragma once

#include <cassert>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "foilgen/constraints.hpp"
#include "foilgen/corpus_stats.hpp"
#include "foilgen/rng.hpp"
#include "foilgen/scene_graph.hpp"
#include "foilgen/types.hpp"

namespace foilgen {

template <class T>
struct Weighted {
  T value;
  double weight = 1.0;

  bool operator==(const Weighted&) const = default;
};

/// Foil values with positive weights, duplicate-free, sorted by value. An
/// empty list means the slot is infeasible for this anchor.
template <class T>
using WeightedCandidates = std::vector<Weighted<T>>;

struct SamplerSettings {
  SamplingRegime regime;
  FoilWeighting weighting = FoilWeighting::Matched;
  GeometryParams geometry;
  /// Largest count a caption may state.
  int max_count = 10;
};

/// Per-key views over LookupTables that the candidate functions need. Build
/// once per corpus; read-only afterwards and safe to share across threads.
class CandidateIndex {
 public:
  using Counted = std::pair<std::string, std::uint64_t>;

  explicit CandidateIndex(const LookupTables& tables);

  const LookupTables& tables() const { return *tables_; }

  /// Attributes seen on `cls`, with their (attribute, class) counts.
  std::span<const Counted> attributes_of(std::string_view cls) const;
  /// Predicates seen between a subject class and an object class.
  std::span<const Counted> predicates_between(std::string_view subj, std::string_view obj) const;
  /// Predicates seen with `subj` as subject.
  std::span<const Counted> predicates_of_subject(std::string_view subj) const;

 private:
  const LookupTables* tables_;
  std::unordered_map<std::string, std::vector<Counted>> attrs_by_class_;
  std::unordered_map<std::string, std::vector<Counted>> preds_by_pair_;
  std::unordered_map<std::string, std::vector<Counted>> preds_by_subject_;
};

/// Negative attributes for `object`'s `true_attr`. Never proposes an
/// attribute annotated on the object. Strict keeps attributes attested with
/// the object's class; Relaxed also admits members of true_attr's cluster.
WeightedCandidates<std::string> candidate_attributes(std::string_view true_attr,
                                                     const SceneObject& object,
                                                     const CandidateIndex& index,
                                                     const AttributeClusters& clusters,
                                                     const SamplerSettings& settings);

/// Class names present in `scene` that can replace the subject or object of
/// `triple` without making the caption true per the annotations. Strict
/// requires the substituted triple in the corpus; Relaxed the relevant
/// (subject, predicate) or (predicate, object) pair. Clean mode also drops
/// candidates the bounding boxes confirm.
WeightedCandidates<std::string> candidate_entities(FoilSlot slot, const RelationTriple& triple,
                                                   const SceneGraph& scene,
                                                   const CandidateIndex& index,
                                                   const SamplerSettings& settings);

/// Replacement predicates for `triple`. Strict: (s, p', o) attested. Relaxed:
/// (s, p') and (p', o) each attested.
WeightedCandidates<std::string> candidate_predicates(const RelationTriple& triple,
                                                     const SceneGraph& scene,
                                                     const CandidateIndex& index,
                                                     const SamplerSettings& settings);

/// Counts other than `true_count` observed for `cls` in the corpus, weighted
/// by how many images show that count. Falls back to true_count +/- 1 within
/// [1, max_count] when the histogram offers nothing else.
WeightedCandidates<int> candidate_counts(std::string_view cls, int true_count,
                                         const CandidateIndex& index,
                                         const SamplerSettings& settings);

/// Draws one value with probability weight / sum(weights). Precondition:
/// non-empty; infeasible slots are handled by the caller.
template <class T>
const T& draw(const WeightedCandidates<T>& candidates, Rng& rng) {
  assert(!candidates.empty());
  std::vector<double> weights;
  weights.reserve(candidates.size());
  for (const auto& c : candidates) weights.push_back(c.weight);
  return candidates[weighted_index(rng, weights)].value;
}

template <class T>
bool contains_value(const WeightedCandidates<T>& candidates, const T& value) {
  for (const auto& c : candidates) {
    if (c.value == value) return true;
  }
  return false;
}

}  // namespace foilgen
