#include "foilgen/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "foilgen/error.hpp"
#include "foilgen/text.hpp"

namespace foilgen {

namespace {

constexpr std::string_view kXorNote = "exclusive-or: exactly one disjunct of the positive holds";

bool is_xor(CaptionType type) {
  return type == CaptionType::XorLogicAttribute || type == CaptionType::XorLogicRelation;
}

std::optional<SpatialVerdict> parse_verdict(std::string_view s) {
  for (auto v : {SpatialVerdict::Holds, SpatialVerdict::Contradicts, SpatialVerdict::Unknown}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

template <class T>
T field(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string("record is missing '") + key + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw FormatError(std::string("record field '") + key + "' has the wrong type");
  }
}

}  // namespace

std::array<DatasetRecord, 2> records_for_pair(const CaptionPair& pair, const RecordStamp& stamp) {
  std::array<DatasetRecord, 2> out;
  for (int i = 0; i < 2; ++i) {
    DatasetRecord& r = out[i];
    const bool positive = i == 0;
    r.image_id = pair.image_id;
    r.caption_type = pair.type;
    r.pair_index = pair.pair_index;
    r.label = positive ? 1 : 0;
    r.text = positive ? pair.positive_text : pair.negative_text;
    r.foil_slot = pair.foil_slot;
    r.foil_key = pair.foil_key;
    r.original_value = pair.original_value;
    r.foil_value = pair.foil_value;
    r.regime = stamp.regime;
    r.split = stamp.split;
    r.generator_version = stamp.generator_version;
    r.seed = stamp.seed;
    r.spatial_verdict = pair.spatial_verdict;
    r.bindings = positive ? pair.positive_bindings : pair.negative_bindings;
    if (is_xor(pair.type)) r.notes = std::string(kXorNote);
  }
  return out;
}

nlohmann::ordered_json record_to_json(const DatasetRecord& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = kDatasetSchemaVersion;
  j["image_id"] = r.image_id;
  j["caption_type"] = std::string(to_string(r.caption_type));
  j["pair_index"] = r.pair_index;
  j["label"] = r.label;
  j["text"] = r.text;
  j["foil_slot"] = std::string(to_string(r.foil_slot));
  j["foil_key"] = r.foil_key;
  j["original_value"] = r.original_value;
  j["foil_value"] = r.foil_value;
  j["regime"] = r.regime;
  j["split"] = r.split;
  j["generator_version"] = r.generator_version;
  j["seed"] = r.seed;
  j["spatial_verdict"] =
      r.spatial_verdict ? nlohmann::ordered_json(std::string(to_string(*r.spatial_verdict)))
                        : nlohmann::ordered_json(nullptr);
  nlohmann::ordered_json b = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.bindings) b[k] = v;
  j["bindings"] = std::move(b);
  if (r.notes) j["notes"] = *r.notes;
  return j;
}

DatasetRecord record_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("record is not a JSON object");
  if (field<int>(j, "schema_version") != kDatasetSchemaVersion) {
    throw FormatError("unsupported record schema_version");
  }
  DatasetRecord r;
  r.image_id = field<std::string>(j, "image_id");
  const auto type_name = field<std::string>(j, "caption_type");
  auto type = parse_caption_type(type_name);
  if (!type) throw FormatError("unknown caption_type '" + type_name + "'");
  r.caption_type = *type;
  r.pair_index = field<std::size_t>(j, "pair_index");
  r.label = field<int>(j, "label");
  if (r.label != 0 && r.label != 1) throw FormatError("label must be 0 or 1");
  r.text = field<std::string>(j, "text");
  const auto slot_name = field<std::string>(j, "foil_slot");
  auto slot = parse_foil_slot(slot_name);
  if (!slot) throw FormatError("unknown foil_slot '" + slot_name + "'");
  r.foil_slot = *slot;
  r.foil_key = field<std::string>(j, "foil_key");
  r.original_value = field<std::string>(j, "original_value");
  r.foil_value = field<std::string>(j, "foil_value");
  r.regime = field<std::string>(j, "regime");
  r.split = field<std::string>(j, "split");
  r.generator_version = field<std::string>(j, "generator_version");
  r.seed = field<std::uint64_t>(j, "seed");
  if (auto it = j.find("spatial_verdict"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw FormatError("spatial_verdict must be a string or null");
    r.spatial_verdict = parse_verdict(it->get<std::string>());
    if (!r.spatial_verdict) throw FormatError("unknown spatial_verdict");
  }
  r.bindings = field<Bindings>(j, "bindings");
  if (auto it = j.find("notes"); it != j.end()) {
    if (!it->is_string()) throw FormatError("notes must be a string");
    r.notes = it->get<std::string>();
  }
  return r;
}

std::string serialize_record(const DatasetRecord& record) { return record_to_json(record).dump(); }

DatasetRecord parse_record(std::string_view line) {
  nlohmann::json j = nlohmann::json::parse(line.begin(), line.end(), nullptr, false);
  if (j.is_discarded()) throw FormatError("record line is not valid JSON");
  return record_from_json(j);
}

std::size_t for_each_record(std::istream& in, const RecordVisitor& visit) {
  std::size_t malformed = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    DatasetRecord record;
    try {
      record = parse_record(line);
    } catch (const FormatError&) {
      ++malformed;
      continue;
    }
    visit(std::move(record));
  }
  return malformed;
}

std::vector<DatasetRecord> load_dataset(const std::filesystem::path& path,
                                        std::size_t* malformed_lines) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset " + path.string());
  std::vector<DatasetRecord> records;
  const std::size_t bad =
      for_each_record(in, [&](DatasetRecord&& r) { records.push_back(std::move(r)); });
  if (malformed_lines != nullptr) *malformed_lines = bad;
  return records;
}

double StatsReport::average_caption_length() const {
  return total_captions == 0 ? 0.0
                             : static_cast<double>(total_tokens) /
                                   static_cast<double>(total_captions);
}

double StatsReport::average_captions_per_image() const {
  return images == 0 ? 0.0 : static_cast<double>(total_captions) / static_cast<double>(images);
}

nlohmann::ordered_json StatsReport::to_json() const {
  nlohmann::ordered_json j;
  j["total_captions"] = total_captions;
  j["total_pairs"] = total_pairs;
  j["positives"] = positives;
  j["negatives"] = negatives;
  j["images"] = images;
  j["average_caption_length"] = average_caption_length();
  j["average_captions_per_image"] = average_captions_per_image();
  j["malformed_lines"] = malformed_lines;
  auto dump = [](const std::map<std::string, std::uint64_t>& m) {
    nlohmann::ordered_json o = nlohmann::ordered_json::object();
    for (const auto& [k, v] : m) o[k] = v;
    return o;
  };
  nlohmann::ordered_json types = nlohmann::ordered_json::object();
  for (CaptionType t : kAllCaptionTypes) {
    const std::string name(to_string(t));
    auto it = per_type.find(name);
    types[name] = it == per_type.end() ? 0 : it->second;
  }
  j["per_type"] = std::move(types);
  j["per_split"] = dump(per_split);
  j["per_regime"] = dump(per_regime);
  return j;
}

std::string StatsReport::to_table() const {
  std::ostringstream out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-24s %12s %8s\n", "caption type", "captions", "share");
  out << buf;
  for (CaptionType t : kAllCaptionTypes) {
    const std::string name(to_string(t));
    auto it = per_type.find(name);
    const std::uint64_t n = it == per_type.end() ? 0 : it->second;
    const double share =
        total_captions == 0 ? 0.0 : 100.0 * static_cast<double>(n) / static_cast<double>(total_captions);
    std::snprintf(buf, sizeof buf, "%-24s %12llu %7.2f%%\n", name.c_str(),
                  static_cast<unsigned long long>(n), share);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "%-24s %12llu\n", "total",
                static_cast<unsigned long long>(total_captions));
  out << buf;
  std::snprintf(buf, sizeof buf, "images %llu, captions/image %.2f, tokens/caption %.2f\n",
                static_cast<unsigned long long>(images), average_captions_per_image(),
                average_caption_length());
  out << buf;
  return out.str();
}

void StatsAccumulator::add(const DatasetRecord& r) {
  ++report_.total_captions;
  if (r.label == 1) {
    ++report_.positives;
    ++report_.total_pairs;
  } else {
    ++report_.negatives;
  }
  report_.total_tokens += count_tokens(r.text);
  ++report_.per_split[r.split];
  ++report_.per_type[std::string(to_string(r.caption_type))];
  ++report_.per_regime[r.regime];
  images_.insert(r.image_id);
}

StatsReport StatsAccumulator::finish() const {
  StatsReport out = report_;
  out.images = images_.size();
  return out;
}

StatsReport compute_stats(std::istream& in) {
  StatsAccumulator acc;
  acc.add_malformed(for_each_record(in, [&](DatasetRecord&& r) { acc.add(r); }));
  return acc.finish();
}

}  // namespace foilgen
