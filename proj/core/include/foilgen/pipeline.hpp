#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "foilgen/caption_gen.hpp"
#include "foilgen/dataset.hpp"
#include "foilgen/scene_graph.hpp"

namespace foilgen {

/// Image id -> split name, from manifest files of one id per line.
class SplitAssignment {
 public:
  /// Without manifests every image goes to `default_split`.
  explicit SplitAssignment(std::string default_split = "all") : default_(std::move(default_split)) {}

  /// Throws ConfigError when an image id is listed in two splits.
  static SplitAssignment from_manifests(const std::map<std::string, std::filesystem::path>& files);
  void assign(const std::string& image_id, const std::string& split);

  bool uses_manifests() const { return !by_image_.empty(); }
  /// nullopt when manifests are in use and the image is in none of them.
  std::optional<std::string> split_of(const std::string& image_id) const;

 private:
  std::string default_;
  std::map<std::string, std::string, std::less<>> by_image_;
};

struct PipelineOptions {
  unsigned workers = 1;
  /// Images handed to the worker pool at a time.
  std::size_t batch_size = 512;
};

struct PipelineResult {
  GenerationReport generation;
  ParseReport parse;
  StatsReport stats;
  BalanceReport balance;
  /// Images left out because no split manifest lists them.
  std::uint64_t unassigned_images = 0;
  /// Scene objects whose class never occurs in the lookup tables.
  std::uint64_t unknown_class_objects = 0;

  nlohmann::ordered_json to_json() const;
};

/// Streams scenes from `scenes`, generates caption pairs on `options.workers`
/// threads and writes records to `out` in scene-file order. Output bytes do
/// not depend on the worker count.
PipelineResult run_generation(std::istream& scenes, const GenerationContext& context,
                              const SplitAssignment& splits, std::ostream& out,
                              const PipelineOptions& options = {});

}  // namespace foilgen
