#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace foilgen {

/// Which piece of a caption the negative replaces.
enum class FoilSlot {
  Attribute,
  Subject,
  Object,
  Predicate,
  Count,
  ComparativeQuantifier,
  ExistencePolarity,
};

std::string_view to_string(FoilSlot slot);
std::optional<FoilSlot> parse_foil_slot(std::string_view name);

enum class Plausibility { Strict, Relaxed };
enum class Noise { Clean, Noisy };

/// The four dataset variations: {clean, noisy} x {strict, relaxed}.
struct SamplingRegime {
  Plausibility plausibility = Plausibility::Strict;
  Noise noise = Noise::Clean;

  /// "clean-strict", "noisy-relaxed", ...
  std::string name() const;
  static std::optional<SamplingRegime> parse(std::string_view name);

  bool operator==(const SamplingRegime&) const = default;
};

/// Matched draws foils in proportion to corpus co-occurrence counts; Uniform
/// is the ablation that ignores the counts.
enum class FoilWeighting { Matched, Uniform };

std::string_view to_string(FoilWeighting w);
std::optional<FoilWeighting> parse_foil_weighting(std::string_view name);

}  // namespace foilgen
