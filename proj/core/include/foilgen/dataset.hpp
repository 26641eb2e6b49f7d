#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "foilgen/caption_types.hpp"
#include "foilgen/constraints.hpp"
#include "foilgen/types.hpp"

namespace foilgen {

inline constexpr int kDatasetSchemaVersion = 1;

/// One caption of a pair, as written to the JSON-lines dataset.
struct DatasetRecord {
  std::string image_id;
  CaptionType caption_type = CaptionType::Attribute;
  std::size_t pair_index = 0;
  /// 1 positive, 0 negative.
  int label = 1;
  std::string text;
  FoilSlot foil_slot = FoilSlot::Attribute;
  std::string foil_key;
  std::string original_value;
  std::string foil_value;
  std::string regime;
  std::string split;
  std::string generator_version;
  std::uint64_t seed = 0;
  std::optional<SpatialVerdict> spatial_verdict;
  Bindings bindings;
  std::optional<std::string> notes;

  bool operator==(const DatasetRecord&) const = default;
};

/// Per-run fields copied into every record.
struct RecordStamp {
  std::string regime;
  std::string split;
  std::string generator_version;
  std::uint64_t seed = 0;
};

/// Positive record first, then the negative.
std::array<DatasetRecord, 2> records_for_pair(const CaptionPair& pair, const RecordStamp& stamp);

nlohmann::ordered_json record_to_json(const DatasetRecord& record);
/// Throws FormatError on a missing or mistyped field.
DatasetRecord record_from_json(const nlohmann::json& j);
/// One line of compact JSON, no trailing newline.
std::string serialize_record(const DatasetRecord& record);
DatasetRecord parse_record(std::string_view line);

using RecordVisitor = std::function<void(DatasetRecord&&)>;

/// Calls `visit` for every well-formed line; returns the number of malformed
/// non-empty lines, which are skipped.
std::size_t for_each_record(std::istream& in, const RecordVisitor& visit);
/// Throws Error when the file cannot be opened.
std::vector<DatasetRecord> load_dataset(const std::filesystem::path& path,
                                        std::size_t* malformed_lines = nullptr);

struct StatsReport {
  std::uint64_t total_captions = 0;
  std::uint64_t total_pairs = 0;
  std::uint64_t positives = 0;
  std::uint64_t negatives = 0;
  std::uint64_t images = 0;
  std::uint64_t total_tokens = 0;
  std::uint64_t malformed_lines = 0;
  std::map<std::string, std::uint64_t> per_split;
  std::map<std::string, std::uint64_t> per_type;
  std::map<std::string, std::uint64_t> per_regime;

  double average_caption_length() const;
  double average_captions_per_image() const;
  nlohmann::ordered_json to_json() const;
  /// Per-type distribution as an aligned plain-text table.
  std::string to_table() const;
};

class StatsAccumulator {
 public:
  void add(const DatasetRecord& record);
  void add_malformed(std::uint64_t n = 1) { report_.malformed_lines += n; }
  StatsReport finish() const;

 private:
  StatsReport report_;
  std::set<std::string> images_;
};

StatsReport compute_stats(std::istream& in);

}  // namespace foilgen
