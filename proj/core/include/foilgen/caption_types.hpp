#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "foilgen/constraints.hpp"
#include "foilgen/types.hpp"

namespace foilgen {

enum class CaptionType {
  Attribute,
  AttributeRelation,
  Relation,
  RelationAttribute,
  ObjectCount,
  ObjectCompareCount,
  VerifyObjectAttribute,
  VerifyObjectRelation,
  AndLogicAttribute,
  AndLogicRelation,
  XorLogicAttribute,
  XorLogicRelation,
};

inline constexpr std::size_t kCaptionTypeCount = 12;

inline constexpr std::array<CaptionType, kCaptionTypeCount> kAllCaptionTypes{
    CaptionType::Attribute,           CaptionType::AttributeRelation,
    CaptionType::Relation,            CaptionType::RelationAttribute,
    CaptionType::ObjectCount,         CaptionType::ObjectCompareCount,
    CaptionType::VerifyObjectAttribute, CaptionType::VerifyObjectRelation,
    CaptionType::AndLogicAttribute,   CaptionType::AndLogicRelation,
    CaptionType::XorLogicAttribute,   CaptionType::XorLogicRelation,
};

enum class CaptionCategory { Attribute, Relation, Counting, Existence, Reasoning };

/// Dataset names: "attribute", "object_compare_count", "AND_logic_relation", ...
std::string_view to_string(CaptionType type);
std::optional<CaptionType> parse_caption_type(std::string_view name);
CaptionCategory category_of(CaptionType type);
std::string_view to_string(CaptionCategory category);
constexpr std::size_t index_of(CaptionType type) { return static_cast<std::size_t>(type); }

/// Template slot -> value. The slot names per type are listed next to each
/// template in realize.cpp.
using Bindings = std::map<std::string, std::string>;

/// Keys whose values differ between the two maps (including keys present in
/// only one of them).
std::size_t binding_difference(const Bindings& a, const Bindings& b);

inline constexpr std::string_view kPolarityNone = "no";
inline constexpr std::string_view kPolaritySome = "at least one";
inline constexpr std::string_view kQuantMore = "more";
inline constexpr std::string_view kQuantFewer = "fewer";
inline constexpr std::string_view kQuantAsMany = "as many";

/// A positive caption and its minimally different negative.
struct CaptionPair {
  std::string image_id;
  CaptionType type = CaptionType::Attribute;
  std::size_t pair_index = 0;
  std::string positive_text;
  std::string negative_text;
  FoilSlot foil_slot = FoilSlot::Attribute;
  /// Binding key that was replaced, e.g. "attr1".
  std::string foil_key;
  std::string original_value;
  std::string foil_value;
  /// Box verdict of the negative's relation, for relational foils.
  std::optional<SpatialVerdict> spatial_verdict;
  Bindings positive_bindings;
  Bindings negative_bindings;
};

}  // namespace foilgen
