#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "foilgen/caption_types.hpp"
#include "foilgen/constraints.hpp"
#include "foilgen/corpus_stats.hpp"
#include "foilgen/foil_sampler.hpp"
#include "foilgen/generation_config.hpp"
#include "foilgen/rng.hpp"
#include "foilgen/scene_graph.hpp"

namespace foilgen {

/// Read-only inputs shared by every image of a run.
struct GenerationContext {
  const CandidateIndex& index;
  const AttributeClusters& clusters;
  const AmbiguityLexicons& lexicons;
  const GenerationConfig& config;
  SamplerSettings sampler;

  GenerationContext(const CandidateIndex& index, const AttributeClusters& clusters,
                    const AmbiguityLexicons& lexicons, const GenerationConfig& config)
      : index(index), clusters(clusters), lexicons(lexicons), config(config),
        sampler(config.sampler_settings()) {}
};

namespace skip_reason {
inline constexpr std::string_view kNoAnchor = "no_anchor";
inline constexpr std::string_view kNoFoil = "no_foil";
inline constexpr std::string_view kUnbalanceable = "unbalanceable";
}  // namespace skip_reason

struct TypeReport {
  std::uint64_t emitted_pairs = 0;
  std::map<std::string, std::uint64_t> skipped;
};

struct GenerationReport {
  std::uint64_t images = 0;
  std::array<TypeReport, kCaptionTypeCount> per_type;

  void record_emitted(CaptionType type, std::uint64_t pairs);
  void record_skip(CaptionType type, std::string_view reason);
  std::uint64_t total_skips() const;
  std::uint64_t total_pairs() const;
  void merge(const GenerationReport& other);
  nlohmann::ordered_json to_json() const;
};

/// Per-image lookups used by every caption family.
class SceneView {
 public:
  SceneView(const SceneGraph& scene, const AmbiguityLexicons& lexicons);

  const SceneGraph& scene() const { return *scene_; }
  std::size_t count(std::string_view cls) const;
  /// Exactly one instance, so a definite reference is unambiguous.
  bool referable(std::string_view cls) const { return count(cls) == 1; }
  bool relation_ok(std::string_view subject_class, std::string_view object_class) const;
  /// Relation triples whose two ends pass every ambiguity gate.
  const std::vector<RelationTriple>& gated_triples() const { return gated_; }
  /// Distinct class names, sorted.
  const std::vector<std::string>& classes() const { return classes_; }
  const SceneObject& object(std::string_view id) const;
  bool is_background(std::string_view cls) const;

 private:
  const SceneGraph* scene_;
  const AmbiguityLexicons* lexicons_;
  std::map<std::string, std::size_t, std::less<>> counts_;
  std::vector<std::string> classes_;
  std::vector<RelationTriple> gated_;
};

struct ImageGeneration {
  std::vector<CaptionPair> pairs;
  GenerationReport report;
};

/// All caption pairs for one image: feasibility check, positive, then
/// negative, for each of the 12 types in order. The rng is derived from
/// (global seed, image id), so the result depends only on the scene and the
/// context.
ImageGeneration generate_for_image(const SceneGraph& scene, const GenerationContext& context);
ImageGeneration generate_for_image(const SceneGraph& scene, const GenerationContext& context,
                                   Rng& rng);

Rng image_rng(std::uint64_t global_seed, std::string_view image_id);

// Families. Each appends to `out` and records emissions and skips.
void instantiate_attribute_family(const SceneView& view, const GenerationContext& context,
                                  Rng& rng, std::vector<CaptionPair>& out,
                                  GenerationReport& report);
void instantiate_relation_family(const SceneView& view, const GenerationContext& context,
                                 Rng& rng, std::vector<CaptionPair>& out,
                                 GenerationReport& report);
void instantiate_counting_family(const SceneView& view, const GenerationContext& context,
                                 Rng& rng, std::vector<CaptionPair>& out,
                                 GenerationReport& report);
void instantiate_existence_family(const SceneView& view, const GenerationContext& context,
                                  Rng& rng, std::vector<CaptionPair>& out,
                                  GenerationReport& report);
void instantiate_reasoning_family(const SceneView& view, const GenerationContext& context,
                                  Rng& rng, std::vector<CaptionPair>& out,
                                  GenerationReport& report);

/// Positive vs negative usage of each comparative quantifier and existence
/// polarity.
struct BalanceReport {
  struct Tally {
    std::uint64_t positive = 0;
    std::uint64_t negative = 0;
  };
  std::map<std::string, Tally> quantifiers;
  std::map<std::string, Tally> polarities;
  /// Largest |positive - negative| over all entries.
  std::uint64_t max_delta = 0;
  bool balanced = true;

  nlohmann::ordered_json to_json() const;
};

BalanceReport verify_balance(std::span<const CaptionPair> pairs);

}  // namespace foilgen
