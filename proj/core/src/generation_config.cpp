#include "foilgen/generation_config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include "foilgen/error.hpp"

namespace foilgen {

namespace fs = std::filesystem;

void GenerationConfig::validate() const {
  if (max_pairs_per_type_per_image < 1) {
    throw ConfigError("max_pairs_per_type_per_image must be >= 1");
  }
  if (max_count < 2) throw ConfigError("max_count must be >= 2");
  if (!(geometry.max_overlap_ratio >= 0.0 && geometry.max_overlap_ratio <= 1.0)) {
    throw ConfigError("geometry.max_overlap_ratio must be in [0, 1]");
  }
  if (!(geometry.near_gap_fraction > 0.0 && geometry.near_gap_fraction <= 1.0)) {
    throw ConfigError("geometry.near_gap_fraction must be in (0, 1]");
  }
}

SamplerSettings GenerationConfig::sampler_settings() const {
  SamplerSettings s;
  s.regime = regime;
  s.weighting = foil_weighting;
  s.geometry = geometry;
  s.max_count = max_count;
  return s;
}

namespace {

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known,
                    const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T get_as(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "'");
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  if (path.is_relative() && !base.empty()) return base / path;
  return path;
}

}  // namespace

ConfigFile parse_config(const nlohmann::json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"schema_version", "regime", "seed", "max_pairs_per_type_per_image", "max_count",
                  "geometry", "balance_policy", "foil_weighting", "assets", "splits"},
                 "config");
  if (j.contains("schema_version") && get_as<int>(j, "schema_version") != kConfigSchemaVersion) {
    throw ConfigError("unsupported config schema_version");
  }

  ConfigFile file;
  GenerationConfig& c = file.generation;
  if (j.contains("regime")) {
    auto name = get_as<std::string>(j, "regime");
    auto regime = SamplingRegime::parse(name);
    if (!regime) throw ConfigError("unknown regime '" + name + "'");
    c.regime = *regime;
  }
  if (j.contains("seed")) {
    const auto& s = j.at("seed");
    if (s.is_number_unsigned()) {
      c.global_seed = s.get<std::uint64_t>();
    } else if (s.is_number_integer() && s.get<std::int64_t>() >= 0) {
      c.global_seed = static_cast<std::uint64_t>(s.get<std::int64_t>());
    } else {
      throw ConfigError("seed must be a non-negative integer");
    }
  }
  if (j.contains("max_pairs_per_type_per_image")) {
    c.max_pairs_per_type_per_image = get_as<int>(j, "max_pairs_per_type_per_image");
  }
  if (j.contains("max_count")) c.max_count = get_as<int>(j, "max_count");
  if (j.contains("geometry")) {
    const auto& g = j.at("geometry");
    if (!g.is_object()) throw ConfigError("geometry must be an object");
    reject_unknown(g, {"max_overlap_ratio", "near_gap_fraction"}, "geometry");
    if (g.contains("max_overlap_ratio")) {
      c.geometry.max_overlap_ratio = get_as<double>(g, "max_overlap_ratio");
    }
    if (g.contains("near_gap_fraction")) {
      c.geometry.near_gap_fraction = get_as<double>(g, "near_gap_fraction");
    }
  }
  if (j.contains("balance_policy") && get_as<std::string>(j, "balance_policy") != "alternating") {
    throw ConfigError("balance_policy must be 'alternating'");
  }
  if (j.contains("foil_weighting")) {
    auto name = get_as<std::string>(j, "foil_weighting");
    auto w = parse_foil_weighting(name);
    if (!w) throw ConfigError("unknown foil_weighting '" + name + "'");
    c.foil_weighting = *w;
  }
  if (j.contains("assets")) {
    const auto& a = j.at("assets");
    if (!a.is_object()) throw ConfigError("assets must be an object");
    reject_unknown(a, {"attribute_clusters", "body_parts", "background_classes"}, "assets");
    if (a.contains("attribute_clusters")) {
      file.attribute_clusters = resolve(base_dir, get_as<std::string>(a, "attribute_clusters"));
    }
    if (a.contains("body_parts")) {
      file.body_parts = resolve(base_dir, get_as<std::string>(a, "body_parts"));
    }
    if (a.contains("background_classes")) {
      file.background_classes = resolve(base_dir, get_as<std::string>(a, "background_classes"));
    }
  }
  if (j.contains("splits")) {
    const auto& s = j.at("splits");
    if (!s.is_object()) throw ConfigError("splits must be an object");
    for (const auto& [name, value] : s.items()) {
      if (!value.is_string()) throw ConfigError("split '" + name + "' must be a path");
      file.split_manifests[name] = resolve(base_dir, value.get<std::string>());
    }
  }
  c.validate();
  return file;
}

ConfigFile load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j, path.parent_path());
}

nlohmann::ordered_json config_to_json(const GenerationConfig& c) {
  nlohmann::ordered_json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["regime"] = c.regime.name();
  j["seed"] = c.global_seed;
  j["max_pairs_per_type_per_image"] = c.max_pairs_per_type_per_image;
  j["max_count"] = c.max_count;
  j["geometry"] = {{"max_overlap_ratio", c.geometry.max_overlap_ratio},
                   {"near_gap_fraction", c.geometry.near_gap_fraction}};
  j["balance_policy"] = "alternating";
  j["foil_weighting"] = std::string(to_string(c.foil_weighting));
  return j;
}

fs::path default_asset_dir() {
  if (const char* env = std::getenv("FOILGEN_ASSET_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  const fs::path build_dir = FOILGEN_BUILD_ASSET_DIR;
  std::error_code ec;
  if (fs::exists(build_dir / "attribute_clusters.txt", ec)) return build_dir;
  return FOILGEN_INSTALL_ASSET_DIR;
}

}  // namespace foilgen
