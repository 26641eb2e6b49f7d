#include "foilgen/caption_types.hpp"

#include <utility>

namespace foilgen {

namespace {
constexpr std::array<std::string_view, kCaptionTypeCount> kTypeNames{
    "attribute",
    "attribute_relation",
    "relation",
    "relation_attribute",
    "object_count",
    "object_compare_count",
    "verify_object_attribute",
    "verify_object_relation",
    "AND_logic_attribute",
    "AND_logic_relation",
    "XOR_logic_attribute",
    "XOR_logic_relation",
};
}  // namespace

std::string_view to_string(CaptionType type) { return kTypeNames[index_of(type)]; }

std::optional<CaptionType> parse_caption_type(std::string_view name) {
  for (std::size_t i = 0; i < kTypeNames.size(); ++i) {
    if (kTypeNames[i] == name) return kAllCaptionTypes[i];
  }
  return std::nullopt;
}

CaptionCategory category_of(CaptionType type) {
  switch (type) {
    case CaptionType::Attribute:
    case CaptionType::AttributeRelation:
      return CaptionCategory::Attribute;
    case CaptionType::Relation:
    case CaptionType::RelationAttribute:
      return CaptionCategory::Relation;
    case CaptionType::ObjectCount:
    case CaptionType::ObjectCompareCount:
      return CaptionCategory::Counting;
    case CaptionType::VerifyObjectAttribute:
    case CaptionType::VerifyObjectRelation:
      return CaptionCategory::Existence;
    default:
      return CaptionCategory::Reasoning;
  }
}

std::string_view to_string(CaptionCategory category) {
  switch (category) {
    case CaptionCategory::Attribute: return "attribute";
    case CaptionCategory::Relation: return "relation";
    case CaptionCategory::Counting: return "counting";
    case CaptionCategory::Existence: return "existence";
    case CaptionCategory::Reasoning: return "reasoning";
  }
  return "unknown";
}

std::size_t binding_difference(const Bindings& a, const Bindings& b) {
  std::size_t diff = 0;
  for (const auto& [key, value] : a) {
    auto it = b.find(key);
    if (it == b.end() || it->second != value) ++diff;
  }
  for (const auto& [key, value] : b) {
    if (!a.contains(key)) ++diff;
  }
  return diff;
}

}  // namespace foilgen
