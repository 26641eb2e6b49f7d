#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "foilgen/scene_graph.hpp"
#include "foilgen/types.hpp"

namespace foilgen {

/// Class inventories behind the body-part and background ambiguity gates.
/// The two sets are disjoint.
struct AmbiguityLexicons {
  std::set<std::string, std::less<>> body_part_classes;
  std::set<std::string, std::less<>> background_classes;

  /// Throws ValidationError when a class is in both sets.
  void validate() const;
};

/// One canonical class per line; `#` starts a comment.
std::set<std::string, std::less<>> parse_class_list(std::istream& in);
AmbiguityLexicons load_lexicons(const std::filesystem::path& body_parts,
                                const std::filesystem::path& background);

/// True iff the scene holds more than one instance of `class_name`.
bool reference_is_ambiguous(const SceneGraph& scene, std::string_view class_name);
bool pair_is_bodyparts(std::string_view class_a, std::string_view class_b,
                       const AmbiguityLexicons& lex);
bool involves_background(std::string_view class_a, std::string_view class_b,
                         const AmbiguityLexicons& lex);

/// All three gates for a relation between two classes of `scene`: both
/// classes singly instantiated and distinct, not two body parts, no
/// background class.
bool relation_passes_gates(const SceneGraph& scene, std::string_view subject_class,
                           std::string_view object_class, const AmbiguityLexicons& lex);

enum class SpatialVerdict { Holds, Contradicts, Unknown };

std::string_view to_string(SpatialVerdict v);

struct GeometryParams {
  /// Horizontal (vertical) overlap, as a fraction of the narrower (shorter)
  /// box, above which left/right (above/below) become undecidable.
  double max_overlap_ratio = 0.3;
  /// "near" holds when the gap between boxes is below this fraction of the
  /// image diagonal.
  double near_gap_fraction = 0.1;
};

bool is_spatial_predicate(std::string_view predicate);

/// Mirror of a directional spatial predicate ("to the left of" <->
/// "to the right of", "above" <-> "below", ...), if there is one.
std::optional<std::string_view> inverse_spatial_predicate(std::string_view predicate);

/// What the boxes say about "A <predicate> B". Depth relations and
/// unsupported predicates are always Unknown. `image_diagonal` <= 0 makes
/// "near" Unknown.
SpatialVerdict spatial_relation_verdict(const BoundingBox& a, const BoundingBox& b,
                                        std::string_view predicate,
                                        const GeometryParams& params = {},
                                        double image_diagonal = 0.0);

/// True when the scene annotates subject -predicate-> object, directly or
/// through the mirrored spatial predicate.
bool relation_annotated(const SceneObject& subject, std::string_view predicate,
                        const SceneObject& object);

/// The triple being foiled, by object id, plus the slot that changes.
struct SlotContext {
  FoilSlot slot = FoilSlot::Object;
  std::string subject_id;
  std::string predicate;
  std::string object_id;
};

/// Verdict of the triple obtained by substituting `candidate` into the slot.
/// For entity slots the candidate is a class name; every instance is checked
/// and the strongest verdict wins (Holds > Contradicts > Unknown).
SpatialVerdict substituted_verdict(const SceneGraph& scene, const SlotContext& context,
                                   std::string_view candidate, const GeometryParams& params);

/// Clean mode drops every candidate whose substituted triple the boxes say
/// is true. Noisy mode returns the input. Order is preserved. `Candidate`
/// must expose a `value` member holding the class or predicate name.
template <class Candidate>
std::vector<Candidate> filter_noisy_candidates(const SceneGraph& scene,
                                               const SlotContext& context,
                                               std::vector<Candidate> candidates, Noise noise,
                                               const GeometryParams& params) {
  if (noise == Noise::Noisy) return candidates;
  std::vector<Candidate> kept;
  kept.reserve(candidates.size());
  for (auto& c : candidates) {
    if (substituted_verdict(scene, context, c.value, params) != SpatialVerdict::Holds) {
      kept.push_back(std::move(c));
    }
  }
  return kept;
}

}  // namespace foilgen
