#include "foilgen/constraints.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

#include "foilgen/error.hpp"
#include "foilgen/text.hpp"

namespace foilgen {

void AmbiguityLexicons::validate() const {
  for (const auto& cls : body_part_classes) {
    if (background_classes.contains(cls)) {
      throw ValidationError("class '" + cls + "' is listed as both body part and background");
    }
  }
}

std::set<std::string, std::less<>> parse_class_list(std::istream& in) {
  std::set<std::string, std::less<>> classes;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string cls = canonical_token(line);
    if (!cls.empty()) classes.insert(std::move(cls));
  }
  return classes;
}

AmbiguityLexicons load_lexicons(const std::filesystem::path& body_parts,
                                const std::filesystem::path& background) {
  auto read = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw Error("cannot open lexicon file " + p.string());
    return parse_class_list(in);
  };
  AmbiguityLexicons lex{read(body_parts), read(background)};
  lex.validate();
  return lex;
}

bool reference_is_ambiguous(const SceneGraph& scene, std::string_view class_name) {
  return instance_count(scene, class_name) > 1;
}

bool pair_is_bodyparts(std::string_view class_a, std::string_view class_b,
                       const AmbiguityLexicons& lex) {
  return lex.body_part_classes.contains(class_a) && lex.body_part_classes.contains(class_b);
}

bool involves_background(std::string_view class_a, std::string_view class_b,
                         const AmbiguityLexicons& lex) {
  return lex.background_classes.contains(class_a) || lex.background_classes.contains(class_b);
}

bool relation_passes_gates(const SceneGraph& scene, std::string_view subject_class,
                           std::string_view object_class, const AmbiguityLexicons& lex) {
  return subject_class != object_class && instance_count(scene, subject_class) == 1 &&
         instance_count(scene, object_class) == 1 &&
         !pair_is_bodyparts(subject_class, object_class, lex) &&
         !involves_background(subject_class, object_class, lex);
}

std::string_view to_string(SpatialVerdict v) {
  switch (v) {
    case SpatialVerdict::Holds: return "holds";
    case SpatialVerdict::Contradicts: return "contradicts";
    case SpatialVerdict::Unknown: return "unknown";
  }
  return "unknown";
}

namespace {

enum class Axis { Horizontal, Vertical };

// Direction predicates: +1 when A precedes B on the axis (left of, above).
struct Directional {
  std::string_view predicate;
  Axis axis;
  int sign;
};

constexpr std::array<Directional, 6> kDirectional{{
    {"to the left of", Axis::Horizontal, +1},
    {"to the right of", Axis::Horizontal, -1},
    {"above", Axis::Vertical, +1},
    {"on top of", Axis::Vertical, +1},
    {"below", Axis::Vertical, -1},
    {"under", Axis::Vertical, -1},
}};

constexpr std::array<std::string_view, 4> kDepth{"in front of", "behind", "in", "inside"};

constexpr std::array<std::pair<std::string_view, std::string_view>, 5> kInverse{{
    {"near", "near"},
    {"to the left of", "to the right of"},
    {"above", "below"},
    {"on top of", "under"},
    {"in front of", "behind"},
}};

double overlap_ratio(int a_lo, int a_len, int b_lo, int b_len) {
  const int overlap = std::max(0, std::min(a_lo + a_len, b_lo + b_len) - std::max(a_lo, b_lo));
  return static_cast<double>(overlap) / static_cast<double>(std::min(a_len, b_len));
}

SpatialVerdict directional_verdict(const BoundingBox& a, const BoundingBox& b, Axis axis,
                                   int sign, const GeometryParams& params) {
  const bool horizontal = axis == Axis::Horizontal;
  const double ratio = horizontal ? overlap_ratio(a.x, a.w, b.x, b.w)
                                  : overlap_ratio(a.y, a.h, b.y, b.h);
  if (ratio >= params.max_overlap_ratio) return SpatialVerdict::Unknown;
  const long ca = horizontal ? a.twice_center_x() : a.twice_center_y();
  const long cb = horizontal ? b.twice_center_x() : b.twice_center_y();
  if (ca == cb) return SpatialVerdict::Unknown;
  const bool a_first = ca < cb;
  return (a_first == (sign > 0)) ? SpatialVerdict::Holds : SpatialVerdict::Contradicts;
}

double box_gap(const BoundingBox& a, const BoundingBox& b) {
  const int dx = std::max(0, std::max(a.x, b.x) - std::min(a.right(), b.right()));
  const int dy = std::max(0, std::max(a.y, b.y) - std::min(a.bottom(), b.bottom()));
  return std::hypot(static_cast<double>(dx), static_cast<double>(dy));
}

}  // namespace

bool is_spatial_predicate(std::string_view predicate) {
  if (predicate == "near") return true;
  for (const auto& d : kDirectional) {
    if (d.predicate == predicate) return true;
  }
  return std::find(kDepth.begin(), kDepth.end(), predicate) != kDepth.end();
}

std::optional<std::string_view> inverse_spatial_predicate(std::string_view predicate) {
  for (const auto& [a, b] : kInverse) {
    if (predicate == a) return b;
    if (predicate == b) return a;
  }
  return std::nullopt;
}

SpatialVerdict spatial_relation_verdict(const BoundingBox& a, const BoundingBox& b,
                                        std::string_view predicate,
                                        const GeometryParams& params, double image_diagonal) {
  for (const auto& d : kDirectional) {
    if (d.predicate == predicate) return directional_verdict(a, b, d.axis, d.sign, params);
  }
  if (predicate == "near") {
    if (image_diagonal <= 0.0) return SpatialVerdict::Unknown;
    return box_gap(a, b) < params.near_gap_fraction * image_diagonal
               ? SpatialVerdict::Holds
               : SpatialVerdict::Contradicts;
  }
  return SpatialVerdict::Unknown;
}

bool relation_annotated(const SceneObject& subject, std::string_view predicate,
                        const SceneObject& object) {
  for (const auto& rel : subject.relations) {
    if (rel.target_id == object.id && rel.predicate == predicate) return true;
  }
  if (auto inverse = inverse_spatial_predicate(predicate)) {
    for (const auto& rel : object.relations) {
      if (rel.target_id == subject.id && rel.predicate == *inverse) return true;
    }
  }
  return false;
}

SpatialVerdict substituted_verdict(const SceneGraph& scene, const SlotContext& context,
                                   std::string_view candidate, const GeometryParams& params) {
  const SceneObject* subject = scene.find(context.subject_id);
  const SceneObject* object = scene.find(context.object_id);
  if (subject == nullptr || object == nullptr) return SpatialVerdict::Unknown;

  auto strongest = [](SpatialVerdict acc, SpatialVerdict v) {
    if (acc == SpatialVerdict::Holds || v == SpatialVerdict::Holds) return SpatialVerdict::Holds;
    if (acc == SpatialVerdict::Contradicts || v == SpatialVerdict::Contradicts) {
      return SpatialVerdict::Contradicts;
    }
    return SpatialVerdict::Unknown;
  };
  const double diagonal = scene.diagonal();

  switch (context.slot) {
    case FoilSlot::Predicate:
      return spatial_relation_verdict(subject->bbox, object->bbox, candidate, params, diagonal);
    case FoilSlot::Subject:
    case FoilSlot::Object: {
      std::optional<SpatialVerdict> verdict;
      for (const auto& inst : scene.objects()) {
        if (inst.class_name != candidate) continue;
        const bool subj = context.slot == FoilSlot::Subject;
        const auto v = spatial_relation_verdict(subj ? inst.bbox : subject->bbox,
                                                subj ? object->bbox : inst.bbox,
                                                context.predicate, params, diagonal);
        verdict = verdict ? strongest(*verdict, v) : v;
      }
      return verdict.value_or(SpatialVerdict::Unknown);
    }
    default:
      return SpatialVerdict::Unknown;
  }
}

}  // namespace foilgen
