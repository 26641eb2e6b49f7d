#include "foilgen/caption_gen.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <optional>
#include <set>
#include <utility>

#include "foilgen/realize.hpp"

namespace foilgen {

void GenerationReport::record_emitted(CaptionType type, std::uint64_t pairs) {
  per_type[index_of(type)].emitted_pairs += pairs;
}

void GenerationReport::record_skip(CaptionType type, std::string_view reason) {
  ++per_type[index_of(type)].skipped[std::string(reason)];
}

std::uint64_t GenerationReport::total_skips() const {
  std::uint64_t n = 0;
  for (const auto& t : per_type) {
    for (const auto& [reason, count] : t.skipped) n += count;
  }
  return n;
}

std::uint64_t GenerationReport::total_pairs() const {
  std::uint64_t n = 0;
  for (const auto& t : per_type) n += t.emitted_pairs;
  return n;
}

void GenerationReport::merge(const GenerationReport& other) {
  images += other.images;
  for (std::size_t i = 0; i < kCaptionTypeCount; ++i) {
    per_type[i].emitted_pairs += other.per_type[i].emitted_pairs;
    for (const auto& [reason, count] : other.per_type[i].skipped) {
      per_type[i].skipped[reason] += count;
    }
  }
}

nlohmann::ordered_json GenerationReport::to_json() const {
  nlohmann::ordered_json j;
  j["images"] = images;
  j["total_pairs"] = total_pairs();
  j["total_skips"] = total_skips();
  nlohmann::ordered_json types = nlohmann::ordered_json::object();
  for (CaptionType type : kAllCaptionTypes) {
    const auto& t = per_type[index_of(type)];
    nlohmann::ordered_json entry;
    entry["emitted_pairs"] = t.emitted_pairs;
    entry["skipped"] = nlohmann::ordered_json::object();
    for (const auto& [reason, count] : t.skipped) entry["skipped"][reason] = count;
    types[std::string(to_string(type))] = std::move(entry);
  }
  j["per_type"] = std::move(types);
  return j;
}

SceneView::SceneView(const SceneGraph& scene, const AmbiguityLexicons& lexicons)
    : scene_(&scene), lexicons_(&lexicons) {
  for (const auto& obj : scene.objects()) ++counts_[obj.class_name];
  for (const auto& [cls, n] : counts_) classes_.push_back(cls);
  for (auto& t : relation_triples(scene)) {
    const SceneObject* s = scene.find(t.subject_id);
    const SceneObject* o = scene.find(t.object_id);
    if (s != nullptr && o != nullptr && relation_ok(s->class_name, o->class_name)) {
      gated_.push_back(std::move(t));
    }
  }
}

std::size_t SceneView::count(std::string_view cls) const {
  auto it = counts_.find(cls);
  return it == counts_.end() ? 0 : it->second;
}

bool SceneView::relation_ok(std::string_view subject_class, std::string_view object_class) const {
  return subject_class != object_class && referable(subject_class) && referable(object_class) &&
         !pair_is_bodyparts(subject_class, object_class, *lexicons_) &&
         !involves_background(subject_class, object_class, *lexicons_);
}

const SceneObject& SceneView::object(std::string_view id) const {
  const SceneObject* obj = scene_->find(id);
  assert(obj != nullptr);
  return *obj;
}

bool SceneView::is_background(std::string_view cls) const {
  return lexicons_->background_classes.contains(cls);
}

namespace {

CaptionPair make_pair(const SceneView& view, CaptionType type, FoilSlot slot,
                      const std::string& key, Bindings positive, std::string foil_value) {
  CaptionPair pair;
  pair.image_id = view.scene().image_id();
  pair.type = type;
  pair.foil_slot = slot;
  pair.foil_key = key;
  pair.original_value = positive.at(key);
  pair.foil_value = std::move(foil_value);
  pair.negative_bindings = positive;
  pair.negative_bindings[key] = pair.foil_value;
  pair.positive_bindings = std::move(positive);
  pair.positive_text = realize(type, pair.positive_bindings);
  pair.negative_text = realize(type, pair.negative_bindings);
  assert(pair.positive_text != pair.negative_text);
  return pair;
}

template <class T>
void shuffle(std::vector<T>& items, Rng& rng) {
  shuffle_in_place(std::span<T>(items), rng);
}

std::string_view slot_key(FoilSlot slot) {
  switch (slot) {
    case FoilSlot::Subject: return "subj";
    case FoilSlot::Object: return "obj";
    case FoilSlot::Predicate: return "pred";
    default: return "";
  }
}

/// Referable, lexically singular, not background: can be named with "a"/"the".
bool singular_entity(const SceneView& view, std::string_view cls) {
  return view.referable(cls) && !is_plural_noun(cls) && !view.is_background(cls);
}

struct AttributeFact {
  const SceneObject* object;
  std::string attr;
};

std::vector<AttributeFact> attribute_facts(const SceneView& view, bool singular_only) {
  std::vector<AttributeFact> facts;
  for (const auto& obj : view.scene().objects()) {
    if (!view.referable(obj.class_name)) continue;
    if (singular_only && !singular_entity(view, obj.class_name)) continue;
    for (const auto& attr : obj.attributes) facts.push_back({&obj, attr});
  }
  return facts;
}

struct RelationFoil {
  FoilSlot slot;
  std::string value;
  SpatialVerdict verdict;
};

/// First slot in `slots` with a non-empty, gate-passing candidate set.
std::optional<RelationFoil> foil_relation(const RelationTriple& t, const SceneView& view,
                                          const GenerationContext& ctx, Rng& rng,
                                          std::span<const FoilSlot> slots) {
  const auto& scene = view.scene();
  const std::string& subj = view.object(t.subject_id).class_name;
  const std::string& obj = view.object(t.object_id).class_name;
  for (FoilSlot slot : slots) {
    WeightedCandidates<std::string> cands;
    if (slot == FoilSlot::Predicate) {
      cands = candidate_predicates(t, scene, ctx.index, ctx.sampler);
    } else {
      cands = candidate_entities(slot, t, scene, ctx.index, ctx.sampler);
      std::erase_if(cands, [&](const Weighted<std::string>& c) {
        return slot == FoilSlot::Subject ? !view.relation_ok(c.value, obj)
                                         : !view.relation_ok(subj, c.value);
      });
    }
    if (cands.empty()) continue;
    std::string value = draw(cands, rng);
    SlotContext sc{slot, t.subject_id, t.predicate, t.object_id};
    SpatialVerdict verdict = substituted_verdict(scene, sc, value, ctx.config.geometry);
    return RelationFoil{slot, std::move(value), verdict};
  }
  return std::nullopt;
}

std::vector<FoilSlot> shuffled_relation_slots(Rng& rng) {
  std::vector<FoilSlot> slots{FoilSlot::Subject, FoilSlot::Object, FoilSlot::Predicate};
  shuffle(slots, rng);
  return slots;
}

Bindings relation_bindings(const SceneView& view, const RelationTriple& t) {
  return {{"subj", view.object(t.subject_id).class_name},
          {"pred", t.predicate},
          {"obj", view.object(t.object_id).class_name}};
}

int cap_of(const GenerationContext& ctx) {
  return std::max(1, ctx.config.max_pairs_per_type_per_image);
}

/// Records a skip when nothing was emitted for `type`.
void finish(CaptionType type, int emitted, bool had_anchor, std::string_view no_anchor_reason,
            GenerationReport& report) {
  report.record_emitted(type, static_cast<std::uint64_t>(emitted));
  if (emitted > 0) return;
  report.record_skip(type, had_anchor ? no_anchor_reason : skip_reason::kNoAnchor);
}

void attribute_type(const SceneView& view, const GenerationContext& ctx, Rng& rng,
                    std::vector<CaptionPair>& out, GenerationReport& report) {
  auto facts = attribute_facts(view, false);
  shuffle(facts, rng);
  int emitted = 0;
  for (const auto& f : facts) {
    if (emitted >= cap_of(ctx)) break;
    auto cands = candidate_attributes(f.attr, *f.object, ctx.index, ctx.clusters, ctx.sampler);
    if (cands.empty()) continue;
    out.push_back(make_pair(view, CaptionType::Attribute, FoilSlot::Attribute, "attr",
                            {{"obj", f.object->class_name}, {"attr", f.attr}},
                            draw(cands, rng)));
    ++emitted;
  }
  finish(CaptionType::Attribute, emitted, !facts.empty(), skip_reason::kNoFoil, report);
}

void attribute_relation_type(const SceneView& view, const GenerationContext& ctx, Rng& rng,
                             std::vector<CaptionPair>& out, GenerationReport& report) {
  std::vector<std::pair<const RelationTriple*, std::string>> anchors;
  for (const auto& t : view.gated_triples()) {
    for (const auto& attr : view.object(t.subject_id).attributes) anchors.emplace_back(&t, attr);
  }
  shuffle(anchors, rng);
  int emitted = 0;
  for (const auto& [t, attr] : anchors) {
    if (emitted >= cap_of(ctx)) break;
    const SceneObject& subj = view.object(t->subject_id);
    auto cands = candidate_attributes(attr, subj, ctx.index, ctx.clusters, ctx.sampler);
    if (cands.empty()) continue;
    Bindings b = relation_bindings(view, *t);
    b["attr"] = attr;
    out.push_back(make_pair(view, CaptionType::AttributeRelation, FoilSlot::Attribute, "attr",
                            std::move(b), draw(cands, rng)));
    ++emitted;
  }
  finish(CaptionType::AttributeRelation, emitted, !anchors.empty(), skip_reason::kNoFoil,
         report);
}

void relation_type(const SceneView& view, const GenerationContext& ctx, Rng& rng,
                   std::vector<CaptionPair>& out, GenerationReport& report) {
  auto anchors = view.gated_triples();
  shuffle(anchors, rng);
  int emitted = 0;
  for (const auto& t : anchors) {
    if (emitted >= cap_of(ctx)) break;
    auto slots = shuffled_relation_slots(rng);
    auto foil = foil_relation(t, view, ctx, rng, slots);
    if (!foil) continue;
    auto pair = make_pair(view, CaptionType::Relation, foil->slot, std::string(slot_key(foil->slot)),
                          relation_bindings(view, t), foil->value);
    pair.spatial_verdict = foil->verdict;
    out.push_back(std::move(pair));
    ++emitted;
  }
  finish(CaptionType::Relation, emitted, !anchors.empty(), skip_reason::kNoFoil, report);
}

void relation_attribute_type(const SceneView& view, const GenerationContext& ctx, Rng& rng,
                             std::vector<CaptionPair>& out, GenerationReport& report) {
  // The attribute sits on the entity that is kept; the other entity is foiled.
  std::vector<const RelationTriple*> anchors;
  for (const auto& t : view.gated_triples()) {
    if (!view.object(t.subject_id).attributes.empty() ||
        !view.object(t.object_id).attributes.empty()) {
      anchors.push_back(&t);
    }
  }
  shuffle(anchors, rng);
  int emitted = 0;
  for (const RelationTriple* t : anchors) {
    if (emitted >= cap_of(ctx)) break;
    const SceneObject& subj = view.object(t->subject_id);
    const SceneObject& obj = view.object(t->object_id);
    std::vector<bool> attribute_on_subject;
    if (!subj.attributes.empty()) attribute_on_subject.push_back(true);
    if (!obj.attributes.empty()) attribute_on_subject.push_back(false);
    if (attribute_on_subject.size() == 2 && coin(rng)) {
      std::swap(attribute_on_subject[0], attribute_on_subject[1]);
    }
    for (bool on_subject : attribute_on_subject) {
      const SceneObject& holder = on_subject ? subj : obj;
      const FoilSlot slot = on_subject ? FoilSlot::Object : FoilSlot::Subject;
      auto foil = foil_relation(*t, view, ctx, rng, std::span<const FoilSlot>(&slot, 1));
      if (!foil) continue;
      Bindings b = relation_bindings(view, *t);
      b[on_subject ? "subj_attr" : "obj_attr"] =
          holder.attributes[uniform_index(rng, holder.attributes.size())];
      auto pair = make_pair(view, CaptionType::RelationAttribute, slot,
                            std::string(slot_key(slot)), std::move(b), foil->value);
      pair.spatial_verdict = foil->verdict;
      out.push_back(std::move(pair));
      ++emitted;
      break;
    }
  }
  finish(CaptionType::RelationAttribute, emitted, !anchors.empty(), skip_reason::kNoFoil,
         report);
}

bool countable(const SceneView& view, std::string_view cls) {
  return !is_plural_noun(cls) && !view.is_background(cls);
}

void object_count_type(const SceneView& view, const GenerationContext& ctx, Rng& rng,
                       std::vector<CaptionPair>& out, GenerationReport& report) {
  const int max_count = ctx.config.max_count;
  std::vector<std::string> anchors;
  for (const auto& cls : view.classes()) {
    const auto n = static_cast<int>(view.count(cls));
    if (n >= 2 && n <= max_count && countable(view, cls)) anchors.push_back(cls);
  }
  shuffle(anchors, rng);
  int emitted = 0;
  for (const auto& cls : anchors) {
    if (emitted >= cap_of(ctx)) break;
    const auto n = static_cast<int>(view.count(cls));
    auto cands = candidate_counts(cls, n, ctx.index, ctx.sampler);
    std::erase_if(cands, [](const Weighted<int>& c) { return c.value < 2; });
    if (cands.empty()) continue;
    const int foil = draw(cands, rng);
    out.push_back(make_pair(view, CaptionType::ObjectCount, FoilSlot::Count, "n",
                            {{"n", std::to_string(n)}, {"obj", cls}}, std::to_string(foil)));
    ++emitted;
  }
  finish(CaptionType::ObjectCount, emitted, !anchors.empty(), skip_reason::kNoFoil, report);
}

void compare_count_type(const SceneView& view, const GenerationContext& ctx, Rng& rng,
                        std::vector<CaptionPair>& out, GenerationReport& report) {
  constexpr CaptionType type = CaptionType::ObjectCompareCount;
  std::vector<std::string> classes;
  for (const auto& cls : view.classes()) {
    if (countable(view, cls)) classes.push_back(cls);
  }
  std::vector<std::pair<std::string, std::string>> equal;    // a < b
  std::vector<std::pair<std::string, std::string>> unequal;  // more, fewer
  for (std::size_t i = 0; i < classes.size(); ++i) {
    for (std::size_t j = i + 1; j < classes.size(); ++j) {
      const auto ni = view.count(classes[i]);
      const auto nj = view.count(classes[j]);
      if (ni == nj) {
        equal.emplace_back(classes[i], classes[j]);
      } else if (ni > nj) {
        unequal.emplace_back(classes[i], classes[j]);
      } else {
        unequal.emplace_back(classes[j], classes[i]);
      }
    }
  }
  shuffle(equal, rng);
  shuffle(unequal, rng);

  // Pairs come in groups of two so that every quantifier is used as often in
  // positives as in negatives within each image.
  const std::string as_many(kQuantAsMany), more(kQuantMore), fewer(kQuantFewer);
  auto emit = [&](const std::string& quant, const std::string& a, const std::string& b,
                  const std::string& foil) {
    out.push_back(make_pair(view, type, FoilSlot::ComparativeQuantifier, "quant",
                            {{"quant", quant}, {"obj1", a}, {"obj2", b}}, foil));
  };
  std::size_t ei = 0, ui = 0;
  int groups = 0;
  while (groups < cap_of(ctx) && ui < unequal.size()) {
    if (ei < equal.size()) {
      const std::string& c = coin(rng) ? more : fewer;
      const auto& [a, b] = equal[ei++];
      const auto& [big, small] = unequal[ui++];
      emit(as_many, a, b, c);
      if (c == more) {
        emit(more, big, small, as_many);
      } else {
        emit(fewer, small, big, as_many);
      }
    } else {
      const auto& first = unequal[ui++];
      const auto& second = ui < unequal.size() ? unequal[ui++] : first;
      emit(more, first.first, first.second, fewer);
      emit(fewer, second.second, second.first, more);
    }
    ++groups;
  }
  report.record_emitted(type, static_cast<std::uint64_t>(2 * groups));
  if (groups > 0) return;
  report.record_skip(type, equal.empty() ? skip_reason::kNoAnchor : skip_reason::kUnbalanceable);
}

/// One "at least one" pair about a true fact plus one "no" pair about a false
/// fact, so polarities balance within each image.
void existence_groups(CaptionType type, const SceneView& view, const GenerationContext& ctx,
                      std::vector<CaptionPair>& out, GenerationReport& report,
                      std::vector<Bindings> true_facts,
                      const std::function<std::optional<std::pair<Bindings, std::optional<SpatialVerdict>>>()>&
                          next_false_fact) {
  const std::string some(kPolaritySome), none(kPolarityNone);
  int groups = 0;
  bool foil_missing = false;
  for (auto& fact : true_facts) {
    if (groups >= cap_of(ctx)) break;
    auto false_fact = next_false_fact();
    if (!false_fact) {
      foil_missing = true;
      break;
    }
    fact["polarity"] = some;
    out.push_back(make_pair(view, type, FoilSlot::ExistencePolarity, "polarity", std::move(fact),
                            none));
    false_fact->first["polarity"] = none;
    auto pair = make_pair(view, type, FoilSlot::ExistencePolarity, "polarity",
                          std::move(false_fact->first), some);
    pair.spatial_verdict = false_fact->second;
    out.push_back(std::move(pair));
    ++groups;
  }
  report.record_emitted(type, static_cast<std::uint64_t>(2 * groups));
  if (groups > 0) return;
  report.record_skip(type, foil_missing ? skip_reason::kNoFoil : skip_reason::kNoAnchor);
}

void verify_attribute_type(const SceneView& view, const GenerationContext& ctx, Rng& rng,
                           std::vector<CaptionPair>& out, GenerationReport& report) {
  auto facts = attribute_facts(view, true);
  shuffle(facts, rng);
  std::vector<Bindings> true_facts;
  for (const auto& f : facts) true_facts.push_back({{"obj", f.object->class_name}, {"attr", f.attr}});

  auto sources = facts;
  shuffle(sources, rng);
  std::size_t cursor = 0;
  auto next_false = [&]() -> std::optional<std::pair<Bindings, std::optional<SpatialVerdict>>> {
    while (cursor < sources.size()) {
      const auto& f = sources[cursor++];
      auto cands = candidate_attributes(f.attr, *f.object, ctx.index, ctx.clusters, ctx.sampler);
      if (cands.empty()) continue;
      return std::make_pair(Bindings{{"obj", f.object->class_name}, {"attr", draw(cands, rng)}},
                            std::nullopt);
    }
    return std::nullopt;
  };
  existence_groups(CaptionType::VerifyObjectAttribute, view, ctx, out, report,
                   std::move(true_facts), next_false);
}

void verify_relation_type(const SceneView& view, const GenerationContext& ctx, Rng& rng,
                          std::vector<CaptionPair>& out, GenerationReport& report) {
  std::vector<RelationTriple> triples;
  for (const auto& t : view.gated_triples()) {
    if (!is_plural_noun(view.object(t.subject_id).class_name)) triples.push_back(t);
  }
  shuffle(triples, rng);
  std::vector<Bindings> true_facts;
  for (const auto& t : triples) true_facts.push_back(relation_bindings(view, t));

  auto sources = triples;
  shuffle(sources, rng);
  std::size_t cursor = 0;
  const FoilSlot slots[] = {FoilSlot::Predicate, FoilSlot::Object};
  auto next_false = [&]() -> std::optional<std::pair<Bindings, std::optional<SpatialVerdict>>> {
    while (cursor < sources.size()) {
      const auto& t = sources[cursor++];
      auto foil = foil_relation(t, view, ctx, rng, slots);
      if (!foil) continue;
      Bindings b = relation_bindings(view, t);
      b[std::string(slot_key(foil->slot))] = foil->value;
      return std::make_pair(std::move(b), std::optional<SpatialVerdict>(foil->verdict));
    }
    return std::nullopt;
  };
  existence_groups(CaptionType::VerifyObjectRelation, view, ctx, out, report,
                   std::move(true_facts), next_false);
}

void and_attribute_type(const SceneView& view, const GenerationContext& ctx, Rng& rng,
                        std::vector<CaptionPair>& out, GenerationReport& report) {
  auto facts = attribute_facts(view, true);
  shuffle(facts, rng);
  int emitted = 0;
  bool had_anchor = false;
  for (std::size_t i = 0; i < facts.size() && emitted < cap_of(ctx); ++i) {
    for (std::size_t j = i + 1; j < facts.size(); ++j) {
      if (facts[j].object->class_name == facts[i].object->class_name) continue;
      had_anchor = true;
      const AttributeFact* conj[2] = {&facts[i], &facts[j]};
      const std::size_t first = coin(rng) ? 1 : 0;
      std::optional<std::pair<std::size_t, std::string>> foil;
      for (std::size_t k : {first, 1 - first}) {
        auto cands = candidate_attributes(conj[k]->attr, *conj[k]->object, ctx.index,
                                          ctx.clusters, ctx.sampler);
        if (cands.empty()) continue;
        foil.emplace(k, draw(cands, rng));
        break;
      }
      if (!foil) continue;
      Bindings b{{"attr1", conj[0]->attr},
                 {"obj1", conj[0]->object->class_name},
                 {"attr2", conj[1]->attr},
                 {"obj2", conj[1]->object->class_name}};
      out.push_back(make_pair(view, CaptionType::AndLogicAttribute, FoilSlot::Attribute,
                              foil->first == 0 ? "attr1" : "attr2", std::move(b), foil->second));
      ++emitted;
      break;
    }
  }
  finish(CaptionType::AndLogicAttribute, emitted, had_anchor, skip_reason::kNoFoil, report);
}

void and_relation_type(const SceneView& view, const GenerationContext& ctx, Rng& rng,
                       std::vector<CaptionPair>& out, GenerationReport& report) {
  std::vector<RelationTriple> triples;
  for (const auto& t : view.gated_triples()) {
    if (singular_entity(view, view.object(t.subject_id).class_name)) triples.push_back(t);
  }
  shuffle(triples, rng);
  int emitted = 0;
  const bool had_anchor = triples.size() >= 2;
  for (std::size_t i = 0; i + 1 < triples.size() && emitted < cap_of(ctx); ++i) {
    const RelationTriple* conj[2] = {&triples[i], &triples[i + 1]};
    const std::size_t first = coin(rng) ? 1 : 0;
    for (std::size_t k : {first, 1 - first}) {
      auto slots = shuffled_relation_slots(rng);
      auto foil = foil_relation(*conj[k], view, ctx, rng, slots);
      if (!foil) continue;
      Bindings b;
      for (std::size_t c = 0; c < 2; ++c) {
        const std::string suffix = c == 0 ? "1" : "2";
        for (auto& [key, value] : relation_bindings(view, *conj[c])) b[key + suffix] = value;
      }
      const std::string key = std::string(slot_key(foil->slot)) + (k == 0 ? "1" : "2");
      auto pair = make_pair(view, CaptionType::AndLogicRelation, foil->slot, key, std::move(b),
                            foil->value);
      pair.spatial_verdict = foil->verdict;
      out.push_back(std::move(pair));
      ++emitted;
      ++i;  // the next anchor pair starts after both conjuncts
      break;
    }
  }
  finish(CaptionType::AndLogicRelation, emitted, had_anchor, skip_reason::kNoFoil, report);
}

void xor_attribute_type(const SceneView& view, const GenerationContext& ctx, Rng& rng,
                        std::vector<CaptionPair>& out, GenerationReport& report) {
  auto facts = attribute_facts(view, true);
  shuffle(facts, rng);
  int emitted = 0;
  bool had_anchor = false;
  for (std::size_t i = 0; i < facts.size() && emitted < cap_of(ctx); ++i) {
    const AttributeFact& truth = facts[i];
    auto foils = candidate_attributes(truth.attr, *truth.object, ctx.index, ctx.clusters,
                                      ctx.sampler);
    for (std::size_t j = 0; j < facts.size(); ++j) {
      const AttributeFact& other = facts[j];
      if (other.object->class_name == truth.object->class_name) continue;
      had_anchor = true;
      if (foils.empty()) break;
      auto false_attrs = candidate_attributes(other.attr, *other.object, ctx.index,
                                              ctx.clusters, ctx.sampler);
      if (false_attrs.empty()) continue;
      const std::string false_attr = draw(false_attrs, rng);
      const bool truth_first = coin(rng);
      Bindings b;
      const std::string tk = truth_first ? "1" : "2";
      const std::string fk = truth_first ? "2" : "1";
      b["attr" + tk] = truth.attr;
      b["obj" + tk] = truth.object->class_name;
      b["attr" + fk] = false_attr;
      b["obj" + fk] = other.object->class_name;
      out.push_back(make_pair(view, CaptionType::XorLogicAttribute, FoilSlot::Attribute,
                              "attr" + tk, std::move(b), draw(foils, rng)));
      ++emitted;
      break;
    }
  }
  finish(CaptionType::XorLogicAttribute, emitted, had_anchor, skip_reason::kNoFoil, report);
}

void xor_relation_type(const SceneView& view, const GenerationContext& ctx, Rng& rng,
                       std::vector<CaptionPair>& out, GenerationReport& report) {
  auto anchors = view.gated_triples();
  shuffle(anchors, rng);
  int emitted = 0;
  for (const auto& t : anchors) {
    if (emitted >= cap_of(ctx)) break;
    const std::string& subj = view.object(t.subject_id).class_name;
    auto cands = candidate_entities(FoilSlot::Object, t, view.scene(), ctx.index, ctx.sampler);
    std::erase_if(cands, [&](const Weighted<std::string>& c) {
      return !view.relation_ok(subj, c.value);
    });
    if (cands.size() < 2) continue;
    const std::string distractor = draw(cands, rng);
    std::erase_if(cands, [&](const Weighted<std::string>& c) { return c.value == distractor; });
    const std::string foil = draw(cands, rng);

    const bool truth_first = coin(rng);
    const std::string tk = truth_first ? "obj1" : "obj2";
    const std::string fk = truth_first ? "obj2" : "obj1";
    Bindings b{{"subj", subj}, {"pred", t.predicate}};
    b[tk] = view.object(t.object_id).class_name;
    b[fk] = distractor;
    SlotContext sc{FoilSlot::Object, t.subject_id, t.predicate, t.object_id};
    auto pair = make_pair(view, CaptionType::XorLogicRelation, FoilSlot::Object, tk, std::move(b),
                          foil);
    pair.spatial_verdict = substituted_verdict(view.scene(), sc, foil, ctx.config.geometry);
    out.push_back(std::move(pair));
    ++emitted;
  }
  finish(CaptionType::XorLogicRelation, emitted, !anchors.empty(), skip_reason::kNoFoil, report);
}

}  // namespace

void instantiate_attribute_family(const SceneView& view, const GenerationContext& context,
                                  Rng& rng, std::vector<CaptionPair>& out,
                                  GenerationReport& report) {
  Rng a(rng()), b(rng());
  attribute_type(view, context, a, out, report);
  attribute_relation_type(view, context, b, out, report);
}

void instantiate_relation_family(const SceneView& view, const GenerationContext& context,
                                 Rng& rng, std::vector<CaptionPair>& out,
                                 GenerationReport& report) {
  Rng a(rng()), b(rng());
  relation_type(view, context, a, out, report);
  relation_attribute_type(view, context, b, out, report);
}

void instantiate_counting_family(const SceneView& view, const GenerationContext& context,
                                 Rng& rng, std::vector<CaptionPair>& out,
                                 GenerationReport& report) {
  Rng a(rng()), b(rng());
  object_count_type(view, context, a, out, report);
  compare_count_type(view, context, b, out, report);
}

void instantiate_existence_family(const SceneView& view, const GenerationContext& context,
                                  Rng& rng, std::vector<CaptionPair>& out,
                                  GenerationReport& report) {
  Rng a(rng()), b(rng());
  verify_attribute_type(view, context, a, out, report);
  verify_relation_type(view, context, b, out, report);
}

void instantiate_reasoning_family(const SceneView& view, const GenerationContext& context,
                                  Rng& rng, std::vector<CaptionPair>& out,
                                  GenerationReport& report) {
  Rng a(rng()), b(rng()), c(rng()), d(rng());
  and_attribute_type(view, context, a, out, report);
  and_relation_type(view, context, b, out, report);
  xor_attribute_type(view, context, c, out, report);
  xor_relation_type(view, context, d, out, report);
}

Rng image_rng(std::uint64_t global_seed, std::string_view image_id) {
  return Rng(derive_seed(global_seed, image_id));
}

ImageGeneration generate_for_image(const SceneGraph& scene, const GenerationContext& context) {
  Rng rng = image_rng(context.config.global_seed, scene.image_id());
  return generate_for_image(scene, context, rng);
}

ImageGeneration generate_for_image(const SceneGraph& scene, const GenerationContext& context,
                                   Rng& rng) {
  ImageGeneration result;
  result.report.images = 1;
  const SceneView view(scene, context.lexicons);
  using Family = void (*)(const SceneView&, const GenerationContext&, Rng&,
                          std::vector<CaptionPair>&, GenerationReport&);
  constexpr Family families[] = {instantiate_attribute_family, instantiate_relation_family,
                                 instantiate_counting_family, instantiate_existence_family,
                                 instantiate_reasoning_family};
  const std::uint64_t base = rng();
  for (std::size_t f = 0; f < std::size(families); ++f) {
    Rng family_rng(derive_seed(base, f));
    families[f](view, context, family_rng, result.pairs, result.report);
  }
  // Families append in type order already except for ties within a family.
  std::stable_sort(result.pairs.begin(), result.pairs.end(),
                   [](const CaptionPair& a, const CaptionPair& b) {
                     return index_of(a.type) < index_of(b.type);
                   });
  for (std::size_t i = 0; i < result.pairs.size(); ++i) result.pairs[i].pair_index = i;
  return result;
}

nlohmann::ordered_json BalanceReport::to_json() const {
  nlohmann::ordered_json j;
  j["balanced"] = balanced;
  j["max_delta"] = max_delta;
  auto dump = [](const std::map<std::string, Tally>& m) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (const auto& [name, t] : m) out[name] = {{"positive", t.positive}, {"negative", t.negative}};
    return out;
  };
  j["quantifiers"] = dump(quantifiers);
  j["polarities"] = dump(polarities);
  return j;
}

BalanceReport verify_balance(std::span<const CaptionPair> pairs) {
  BalanceReport report;
  for (const auto& p : pairs) {
    const char* key = nullptr;
    std::map<std::string, BalanceReport::Tally>* target = nullptr;
    if (p.type == CaptionType::ObjectCompareCount) {
      key = "quant";
      target = &report.quantifiers;
    } else if (p.type == CaptionType::VerifyObjectAttribute ||
               p.type == CaptionType::VerifyObjectRelation) {
      key = "polarity";
      target = &report.polarities;
    } else {
      continue;
    }
    if (auto it = p.positive_bindings.find(key); it != p.positive_bindings.end()) {
      ++(*target)[it->second].positive;
    }
    if (auto it = p.negative_bindings.find(key); it != p.negative_bindings.end()) {
      ++(*target)[it->second].negative;
    }
  }
  for (const auto* m : {&report.quantifiers, &report.polarities}) {
    for (const auto& [name, t] : *m) {
      const std::uint64_t delta =
          t.positive > t.negative ? t.positive - t.negative : t.negative - t.positive;
      report.max_delta = std::max(report.max_delta, delta);
    }
  }
  report.balanced = report.max_delta == 0;
  return report;
}

}  // namespace foilgen
