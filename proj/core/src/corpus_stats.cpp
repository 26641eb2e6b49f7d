#include "foilgen/corpus_stats.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <fstream>
#include <sstream>
#include <thread>

#include "foilgen/error.hpp"
#include "foilgen/text.hpp"

namespace foilgen {

namespace {

template <class Map, class Key>
std::uint64_t lookup(const Map& map, const Key& key) {
  auto it = map.find(key);
  return it == map.end() ? 0 : it->second;
}

template <class Map>
void add_counts(Map& into, const Map& from) {
  for (const auto& [key, count] : from) into[key] += count;
}

}  // namespace

std::uint64_t LookupTables::attr_obj_count(std::string_view attr, std::string_view cls) const {
  return lookup(attr_obj, PairKey{attr, cls});
}
std::uint64_t LookupTables::subj_pred_count(std::string_view subj, std::string_view pred) const {
  return lookup(subj_pred, PairKey{subj, pred});
}
std::uint64_t LookupTables::pred_obj_count(std::string_view pred, std::string_view obj) const {
  return lookup(pred_obj, PairKey{pred, obj});
}
std::uint64_t LookupTables::triple_count(std::string_view subj, std::string_view pred,
                                         std::string_view obj) const {
  return lookup(triples, TripleKey{subj, pred, obj});
}
std::uint64_t LookupTables::attribute_count(std::string_view attr) const {
  return lookup(attribute_freq, std::string(attr));
}
std::uint64_t LookupTables::relation_count(std::string_view pred) const {
  return lookup(relation_freq, std::string(pred));
}
std::uint64_t LookupTables::total_relations() const {
  std::uint64_t total = 0;
  for (const auto& [pred, count] : relation_freq) total += count;
  return total;
}

void LookupTables::merge(const LookupTables& other) {
  add_counts(attr_obj, other.attr_obj);
  add_counts(subj_pred, other.subj_pred);
  add_counts(pred_obj, other.pred_obj);
  add_counts(triples, other.triples);
  for (const auto& [cls, hist] : other.class_count_hist) add_counts(class_count_hist[cls], hist);
  add_counts(relation_freq, other.relation_freq);
  add_counts(attribute_freq, other.attribute_freq);
  scene_count += other.scene_count;
}

void LookupTables::add_scene(const SceneGraph& scene) {
  ++scene_count;
  std::map<std::string, std::uint32_t> per_class;
  for (const auto& obj : scene.objects()) {
    ++per_class[obj.class_name];
    for (const auto& attr : obj.attributes) {
      ++attr_obj[{attr, obj.class_name}];
      ++attribute_freq[attr];
    }
    for (const auto& rel : obj.relations) {
      const SceneObject* target = scene.find(rel.target_id);
      if (target == nullptr) continue;
      ++subj_pred[{obj.class_name, rel.predicate}];
      ++pred_obj[{rel.predicate, target->class_name}];
      ++triples[{obj.class_name, rel.predicate, target->class_name}];
      ++relation_freq[rel.predicate];
    }
  }
  for (const auto& [cls, n] : per_class) ++class_count_hist[cls][n];
}

LookupTables build_tables(std::span<const SceneGraph> scenes, std::size_t workers) {
  if (scenes.empty()) throw CorpusError("no corpus");
  workers = std::clamp<std::size_t>(workers, 1, scenes.size());
  std::vector<LookupTables> partial(workers);
  const std::size_t chunk = (scenes.size() + workers - 1) / workers;
  auto run = [&](std::size_t w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(scenes.size(), begin + chunk);
    for (std::size_t i = begin; i < end; ++i) partial[w].add_scene(scenes[i]);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
  }
  LookupTables merged;
  for (const auto& p : partial) merged.merge(p);
  return merged;
}

LookupTables build_tables(const SceneGraphMap& scenes, std::size_t workers) {
  std::vector<SceneGraph> flat;
  flat.reserve(scenes.size());
  for (const auto& [id, scene] : scenes) flat.push_back(scene);
  return build_tables(std::span<const SceneGraph>(flat), workers);
}

// ---------------------------------------------------------------------------
// Binary container. All integers little-endian.
//
//   magic "FGTABLES" | u32 version | u32 section count
//   section*: u32 tag | u64 payload bytes | payload
// ---------------------------------------------------------------------------

namespace {

constexpr std::array<char, 8> kMagic{'F', 'G', 'T', 'A', 'B', 'L', 'E', 'S'};

enum SectionTag : std::uint32_t {
  kAttrObj = 1,
  kSubjPred = 2,
  kPredObj = 3,
  kTriples = 4,
  kClassCountHist = 5,
  kRelationFreq = 6,
  kAttributeFreq = 7,
  kMeta = 8,
};
constexpr std::uint32_t kSectionCount = 8;

class ByteWriter {
 public:
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes_.append(s);
  }
  const std::string& bytes() const { return bytes_; }

 private:
  void put(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  std::string bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  std::string str() {
    std::uint32_t n = u32();
    need(n);
    std::string s(data_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  std::string_view take(std::uint64_t n) {
    need(n);
    auto v = data_.substr(pos_, n);
    pos_ += n;
    return v;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::uint64_t n) const {
    if (n > data_.size() - pos_) throw FormatError("table file is truncated");
  }
  std::uint64_t get(int n) {
    need(static_cast<std::uint64_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    }
    pos_ += n;
    return v;
  }
  std::string_view data_;
  std::size_t pos_ = 0;
};

std::string encode_pairs(const PairCounts& m) {
  ByteWriter w;
  w.u64(m.size());
  for (const auto& [k, c] : m) {
    w.str(k.first);
    w.str(k.second);
    w.u64(c);
  }
  return w.bytes();
}

std::string encode_triples(const TripleCounts& m) {
  ByteWriter w;
  w.u64(m.size());
  for (const auto& [k, c] : m) {
    w.str(std::get<0>(k));
    w.str(std::get<1>(k));
    w.str(std::get<2>(k));
    w.u64(c);
  }
  return w.bytes();
}

std::string encode_tokens(const TokenCounts& m) {
  ByteWriter w;
  w.u64(m.size());
  for (const auto& [k, c] : m) {
    w.str(k);
    w.u64(c);
  }
  return w.bytes();
}

std::string encode_hist(const CountHistogram& m) {
  ByteWriter w;
  w.u64(m.size());
  for (const auto& [cls, hist] : m) {
    w.str(cls);
    w.u64(hist.size());
    for (const auto& [n, images] : hist) {
      w.u32(n);
      w.u64(images);
    }
  }
  return w.bytes();
}

void check_count(std::uint64_t c) {
  if (c == 0) throw FormatError("table file contains a zero count");
}

PairCounts decode_pairs(ByteReader r) {
  PairCounts m;
  for (std::uint64_t n = r.u64(); n > 0; --n) {
    auto a = r.str();
    auto b = r.str();
    auto c = r.u64();
    check_count(c);
    m.emplace(PairKey{std::move(a), std::move(b)}, c);
  }
  if (!r.done()) throw FormatError("trailing bytes in table section");
  return m;
}

TripleCounts decode_triples(ByteReader r) {
  TripleCounts m;
  for (std::uint64_t n = r.u64(); n > 0; --n) {
    auto a = r.str();
    auto b = r.str();
    auto c = r.str();
    auto count = r.u64();
    check_count(count);
    m.emplace(TripleKey{std::move(a), std::move(b), std::move(c)}, count);
  }
  if (!r.done()) throw FormatError("trailing bytes in table section");
  return m;
}

TokenCounts decode_tokens(ByteReader r) {
  TokenCounts m;
  for (std::uint64_t n = r.u64(); n > 0; --n) {
    auto k = r.str();
    auto c = r.u64();
    check_count(c);
    m.emplace(std::move(k), c);
  }
  if (!r.done()) throw FormatError("trailing bytes in table section");
  return m;
}

CountHistogram decode_hist(ByteReader r) {
  CountHistogram m;
  for (std::uint64_t n = r.u64(); n > 0; --n) {
    auto& hist = m[r.str()];
    for (std::uint64_t b = r.u64(); b > 0; --b) {
      auto count = r.u32();
      auto images = r.u64();
      check_count(images);
      hist.emplace(count, images);
    }
  }
  if (!r.done()) throw FormatError("trailing bytes in table section");
  return m;
}

}  // namespace

void write_tables(const LookupTables& tables, std::ostream& out) {
  ByteWriter header;
  header.u32(kTableFormatVersion);
  header.u32(kSectionCount);
  out.write(kMagic.data(), kMagic.size());
  out.write(header.bytes().data(), static_cast<std::streamsize>(header.bytes().size()));

  ByteWriter meta;
  meta.u64(tables.scene_count);

  const std::array<std::pair<std::uint32_t, std::string>, kSectionCount> sections{{
      {kAttrObj, encode_pairs(tables.attr_obj)},
      {kSubjPred, encode_pairs(tables.subj_pred)},
      {kPredObj, encode_pairs(tables.pred_obj)},
      {kTriples, encode_triples(tables.triples)},
      {kClassCountHist, encode_hist(tables.class_count_hist)},
      {kRelationFreq, encode_tokens(tables.relation_freq)},
      {kAttributeFreq, encode_tokens(tables.attribute_freq)},
      {kMeta, meta.bytes()},
  }};
  for (const auto& [tag, payload] : sections) {
    ByteWriter prefix;
    prefix.u32(tag);
    prefix.u64(payload.size());
    out.write(prefix.bytes().data(), static_cast<std::streamsize>(prefix.bytes().size()));
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  }
  if (!out) throw Error("failed to write table container");
}

LookupTables read_tables(std::istream& in) {
  std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (data.size() < kMagic.size() || !std::equal(kMagic.begin(), kMagic.end(), data.begin())) {
    throw VersionError("not a foilgen table file (bad magic header); rebuild with build-tables");
  }
  ByteReader r(std::string_view(data).substr(kMagic.size()));
  const std::uint32_t version = r.u32();
  if (version != kTableFormatVersion) {
    throw VersionError("unsupported table format version " + std::to_string(version) +
                       " (this build reads version " + std::to_string(kTableFormatVersion) + ")");
  }
  const std::uint32_t count = r.u32();
  LookupTables t;
  std::uint32_t seen = 0;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t tag = r.u32();
    ByteReader section(r.take(r.u64()));
    switch (tag) {
      case kAttrObj: t.attr_obj = decode_pairs(section); break;
      case kSubjPred: t.subj_pred = decode_pairs(section); break;
      case kPredObj: t.pred_obj = decode_pairs(section); break;
      case kTriples: t.triples = decode_triples(section); break;
      case kClassCountHist: t.class_count_hist = decode_hist(section); break;
      case kRelationFreq: t.relation_freq = decode_tokens(section); break;
      case kAttributeFreq: t.attribute_freq = decode_tokens(section); break;
      case kMeta: t.scene_count = section.u64(); break;
      default: continue;  // unknown sections are skipped
    }
    seen |= 1u << tag;
  }
  constexpr std::uint32_t kRequired = 0b1'1111'1110;
  if ((seen & kRequired) != kRequired) throw FormatError("table file is missing sections");
  if (!r.done()) throw FormatError("trailing bytes after last table section");
  return t;
}

void save_tables(const LookupTables& tables, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_tables(tables, out);
}

LookupTables load_tables(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open table file " + path.string());
  return read_tables(in);
}

nlohmann::ordered_json tables_summary(const LookupTables& t) {
  nlohmann::ordered_json j;
  j["scenes"] = t.scene_count;
  j["classes"] = t.class_count_hist.size();
  j["attributes"] = t.attribute_freq.size();
  j["predicates"] = t.relation_freq.size();
  j["attr_obj_pairs"] = t.attr_obj.size();
  j["subj_pred_pairs"] = t.subj_pred.size();
  j["pred_obj_pairs"] = t.pred_obj.size();
  j["triples"] = t.triples.size();
  j["relation_instances"] = t.total_relations();
  return j;
}

// ---------------------------------------------------------------------------

void AttributeClusters::add_cluster(const std::string& name,
                                    const std::vector<std::string>& members) {
  auto& list = members_[name];
  for (const auto& m : members) {
    auto it = cluster_of_.find(m);
    if (it != cluster_of_.end()) {
      if (it->second == name) continue;
      throw ValidationError("attribute '" + m + "' is listed in clusters '" + it->second +
                            "' and '" + name + "'");
    }
    cluster_of_.emplace(m, name);
    list.push_back(m);
  }
}

std::optional<std::string> AttributeClusters::cluster_of(std::string_view attribute) const {
  auto it = cluster_of_.find(attribute);
  if (it == cluster_of_.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::string>& AttributeClusters::members(std::string_view cluster) const {
  static const std::vector<std::string> kEmpty;
  auto it = members_.find(std::string(cluster));
  return it == members_.end() ? kEmpty : it->second;
}

AttributeClusters parse_attribute_clusters(std::istream& in) {
  AttributeClusters clusters;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (canonical_token(line).empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw ValidationError("attribute cluster line " + std::to_string(line_no) +
                            ": expected 'name: attr, attr, ...'");
    }
    std::string name = canonical_token(line.substr(0, colon));
    if (name.empty()) {
      throw ValidationError("attribute cluster line " + std::to_string(line_no) +
                            ": empty cluster name");
    }
    std::vector<std::string> members;
    std::stringstream rest(line.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      std::string attr = canonical_token(item);
      if (!attr.empty()) members.push_back(std::move(attr));
    }
    clusters.add_cluster(name, members);
  }
  return clusters;
}

AttributeClusters load_attribute_clusters(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open attribute cluster file " + path.string());
  return parse_attribute_clusters(in);
}

}  // namespace foilgen
