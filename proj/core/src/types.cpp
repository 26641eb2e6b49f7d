#include "foilgen/types.hpp"

#include <array>
#include <utility>

namespace foilgen {

namespace {
constexpr std::array<std::pair<FoilSlot, std::string_view>, 7> kSlotNames{{
    {FoilSlot::Attribute, "attribute"},
    {FoilSlot::Subject, "subject"},
    {FoilSlot::Object, "object"},
    {FoilSlot::Predicate, "predicate"},
    {FoilSlot::Count, "count"},
    {FoilSlot::ComparativeQuantifier, "comparative_quantifier"},
    {FoilSlot::ExistencePolarity, "existence_polarity"},
}};
}  // namespace

std::string_view to_string(FoilSlot slot) {
  for (const auto& [s, name] : kSlotNames) {
    if (s == slot) return name;
  }
  return "unknown";
}

std::optional<FoilSlot> parse_foil_slot(std::string_view name) {
  for (const auto& [s, n] : kSlotNames) {
    if (n == name) return s;
  }
  return std::nullopt;
}

std::string SamplingRegime::name() const {
  std::string out = noise == Noise::Clean ? "clean" : "noisy";
  out += plausibility == Plausibility::Strict ? "-strict" : "-relaxed";
  return out;
}

std::optional<SamplingRegime> SamplingRegime::parse(std::string_view name) {
  for (auto noise : {Noise::Clean, Noise::Noisy}) {
    for (auto plaus : {Plausibility::Strict, Plausibility::Relaxed}) {
      SamplingRegime r{plaus, noise};
      if (r.name() == name) return r;
    }
  }
  return std::nullopt;
}

std::string_view to_string(FoilWeighting w) {
  return w == FoilWeighting::Matched ? "matched" : "uniform";
}

std::optional<FoilWeighting> parse_foil_weighting(std::string_view name) {
  if (name == "matched") return FoilWeighting::Matched;
  if (name == "uniform") return FoilWeighting::Uniform;
  return std::nullopt;
}

}  // namespace foilgen
