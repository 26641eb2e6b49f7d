#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "foilgen/constraints.hpp"
#include "foilgen/foil_sampler.hpp"
#include "foilgen/types.hpp"

namespace foilgen {

enum class BalancePolicy { Alternating };

struct GenerationConfig {
  SamplingRegime regime;
  std::uint64_t global_seed = 0;
  /// For the balanced types (compare count, existence) this caps balanced
  /// groups rather than single pairs.
  int max_pairs_per_type_per_image = 1;
  int max_count = 10;
  GeometryParams geometry;
  BalancePolicy balance_policy = BalancePolicy::Alternating;
  FoilWeighting foil_weighting = FoilWeighting::Matched;

  /// Throws ConfigError.
  void validate() const;
  SamplerSettings sampler_settings() const;
};

/// Everything a `generate` run reads from its config file.
struct ConfigFile {
  GenerationConfig generation;
  std::optional<std::filesystem::path> attribute_clusters;
  std::optional<std::filesystem::path> body_parts;
  std::optional<std::filesystem::path> background_classes;
  /// split name -> file with one image id per line
  std::map<std::string, std::filesystem::path> split_manifests;
};

inline constexpr int kConfigSchemaVersion = 1;

/// Relative paths are resolved against `base_dir`. Throws ConfigError.
ConfigFile parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ConfigFile load_config(const std::filesystem::path& path);
nlohmann::ordered_json config_to_json(const GenerationConfig& config);

/// Directory holding the bundled clusters and lexicons. FOILGEN_ASSET_DIR in
/// the environment wins; otherwise the source tree, then the install prefix.
std::filesystem::path default_asset_dir();

}  // namespace foilgen
