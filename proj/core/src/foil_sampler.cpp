#include "foilgen/foil_sampler.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace foilgen {

namespace {

std::string pair_key(std::string_view a, std::string_view b) {
  std::string key;
  key.reserve(a.size() + b.size() + 1);
  key.append(a);
  key.push_back('\x1f');
  key.append(b);
  return key;
}

template <class Map>
std::span<const CandidateIndex::Counted> find_span(const Map& map, const std::string& key) {
  auto it = map.find(key);
  if (it == map.end()) return {};
  return it->second;
}

double weight_for(std::uint64_t count, const SamplerSettings& settings) {
  if (settings.weighting == FoilWeighting::Uniform) return 1.0;
  return static_cast<double>(std::max<std::uint64_t>(count, 1));
}

template <class T>
WeightedCandidates<T> to_candidates(const std::map<T, std::uint64_t>& counts,
                                    const SamplerSettings& settings) {
  WeightedCandidates<T> out;
  out.reserve(counts.size());
  for (const auto& [value, count] : counts) out.push_back({value, weight_for(count, settings)});
  return out;
}

}  // namespace

CandidateIndex::CandidateIndex(const LookupTables& tables) : tables_(&tables) {
  for (const auto& [key, count] : tables.attr_obj) {
    attrs_by_class_[key.second].emplace_back(key.first, count);
  }
  for (const auto& [key, count] : tables.triples) {
    const auto& [s, p, o] = key;
    preds_by_pair_[pair_key(s, o)].emplace_back(p, count);
  }
  for (const auto& [key, count] : tables.subj_pred) {
    preds_by_subject_[key.first].emplace_back(key.second, count);
  }
}

std::span<const CandidateIndex::Counted> CandidateIndex::attributes_of(std::string_view cls) const {
  return find_span(attrs_by_class_, std::string(cls));
}

std::span<const CandidateIndex::Counted> CandidateIndex::predicates_between(
    std::string_view subj, std::string_view obj) const {
  return find_span(preds_by_pair_, pair_key(subj, obj));
}

std::span<const CandidateIndex::Counted> CandidateIndex::predicates_of_subject(
    std::string_view subj) const {
  return find_span(preds_by_subject_, std::string(subj));
}

WeightedCandidates<std::string> candidate_attributes(std::string_view true_attr,
                                                     const SceneObject& object,
                                                     const CandidateIndex& index,
                                                     const AttributeClusters& clusters,
                                                     const SamplerSettings& settings) {
  std::map<std::string, std::uint64_t> admitted;
  for (const auto& [attr, count] : index.attributes_of(object.class_name)) {
    admitted.emplace(attr, count);
  }
  if (settings.regime.plausibility == Plausibility::Relaxed) {
    if (auto cluster = clusters.cluster_of(true_attr)) {
      for (const auto& member : clusters.members(*cluster)) {
        if (admitted.contains(member)) continue;
        admitted.emplace(member, index.tables().attribute_count(member));
      }
    }
  }
  admitted.erase(std::string(true_attr));
  for (const auto& attr : object.attributes) admitted.erase(attr);
  return to_candidates(admitted, settings);
}

WeightedCandidates<std::string> candidate_entities(FoilSlot slot, const RelationTriple& triple,
                                                   const SceneGraph& scene,
                                                   const CandidateIndex& index,
                                                   const SamplerSettings& settings) {
  const SceneObject* subject = scene.find(triple.subject_id);
  const SceneObject* object = scene.find(triple.object_id);
  if (subject == nullptr || object == nullptr) return {};
  if (slot != FoilSlot::Subject && slot != FoilSlot::Object) return {};
  const bool foil_subject = slot == FoilSlot::Subject;
  const LookupTables& tables = index.tables();
  const bool strict = settings.regime.plausibility == Plausibility::Strict;

  std::set<std::string> scene_classes;
  for (const auto& obj : scene.objects()) scene_classes.insert(obj.class_name);

  std::map<std::string, std::uint64_t> admitted;
  for (const auto& cls : scene_classes) {
    if (cls == subject->class_name || cls == object->class_name) continue;

    bool makes_true = false;
    for (const auto& inst : scene.objects()) {
      if (inst.class_name != cls) continue;
      makes_true = foil_subject ? relation_annotated(inst, triple.predicate, *object)
                                : relation_annotated(*subject, triple.predicate, inst);
      if (makes_true) break;
    }
    if (makes_true) continue;

    std::uint64_t count = 0;
    if (strict) {
      count = foil_subject ? tables.triple_count(cls, triple.predicate, object->class_name)
                           : tables.triple_count(subject->class_name, triple.predicate, cls);
    } else {
      count = foil_subject ? tables.subj_pred_count(cls, triple.predicate)
                           : tables.pred_obj_count(triple.predicate, cls);
    }
    if (count >= 1) admitted.emplace(cls, count);
  }

  SlotContext context{slot, triple.subject_id, triple.predicate, triple.object_id};
  return filter_noisy_candidates(scene, context, to_candidates(admitted, settings),
                                 settings.regime.noise, settings.geometry);
}

WeightedCandidates<std::string> candidate_predicates(const RelationTriple& triple,
                                                     const SceneGraph& scene,
                                                     const CandidateIndex& index,
                                                     const SamplerSettings& settings) {
  const SceneObject* subject = scene.find(triple.subject_id);
  const SceneObject* object = scene.find(triple.object_id);
  if (subject == nullptr || object == nullptr) return {};
  const LookupTables& tables = index.tables();

  std::map<std::string, std::uint64_t> admitted;
  if (settings.regime.plausibility == Plausibility::Strict) {
    for (const auto& [pred, count] :
         index.predicates_between(subject->class_name, object->class_name)) {
      admitted.emplace(pred, count);
    }
  } else {
    for (const auto& [pred, subj_count] : index.predicates_of_subject(subject->class_name)) {
      const std::uint64_t obj_count = tables.pred_obj_count(pred, object->class_name);
      if (obj_count >= 1) admitted.emplace(pred, std::min(subj_count, obj_count));
    }
  }
  admitted.erase(triple.predicate);
  for (auto it = admitted.begin(); it != admitted.end();) {
    if (relation_annotated(*subject, it->first, *object)) {
      it = admitted.erase(it);
    } else {
      ++it;
    }
  }

  SlotContext context{FoilSlot::Predicate, triple.subject_id, triple.predicate, triple.object_id};
  return filter_noisy_candidates(scene, context, to_candidates(admitted, settings),
                                 settings.regime.noise, settings.geometry);
}

WeightedCandidates<int> candidate_counts(std::string_view cls, int true_count,
                                         const CandidateIndex& index,
                                         const SamplerSettings& settings) {
  std::map<int, std::uint64_t> admitted;
  const auto& hist = index.tables().class_count_hist;
  if (auto it = hist.find(std::string(cls)); it != hist.end()) {
    for (const auto& [n, images] : it->second) {
      const int c = static_cast<int>(n);
      if (c != true_count && c >= 1 && c <= settings.max_count) admitted.emplace(c, images);
    }
  }
  if (admitted.empty()) {
    for (int c : {true_count - 1, true_count + 1}) {
      if (c >= 1 && c <= settings.max_count) admitted.emplace(c, 1);
    }
    WeightedCandidates<int> fallback;
    for (const auto& [c, w] : admitted) fallback.push_back({c, 1.0});
    return fallback;
  }
  return to_candidates(admitted, settings);
}

}  // namespace foilgen
