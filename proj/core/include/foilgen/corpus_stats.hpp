#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "foilgen/scene_graph.hpp"

namespace foilgen {

using PairKey = std::pair<std::string, std::string>;
using TripleKey = std::tuple<std::string, std::string, std::string>;
using PairCounts = std::map<PairKey, std::uint64_t>;
using TripleCounts = std::map<TripleKey, std::uint64_t>;
using TokenCounts = std::map<std::string, std::uint64_t>;
/// class -> (instances in one image -> number of images)
using CountHistogram = std::map<std::string, std::map<std::uint32_t, std::uint64_t>>;

/// Corpus-wide co-occurrence counts. Ordered maps keep serialization and
/// iteration deterministic. Absent keys mean a count of zero; stored counts
/// are always >= 1.
struct LookupTables {
  PairCounts attr_obj;      // (attribute, class)
  PairCounts subj_pred;     // (subject class, predicate)
  PairCounts pred_obj;      // (predicate, object class)
  TripleCounts triples;     // (subject class, predicate, object class)
  CountHistogram class_count_hist;
  TokenCounts relation_freq;
  TokenCounts attribute_freq;
  std::uint64_t scene_count = 0;

  std::uint64_t attr_obj_count(std::string_view attr, std::string_view cls) const;
  std::uint64_t subj_pred_count(std::string_view subj, std::string_view pred) const;
  std::uint64_t pred_obj_count(std::string_view pred, std::string_view obj) const;
  std::uint64_t triple_count(std::string_view subj, std::string_view pred, std::string_view obj) const;
  std::uint64_t attribute_count(std::string_view attr) const;
  std::uint64_t relation_count(std::string_view pred) const;
  std::uint64_t total_relations() const;

  /// Adds every count of `other` into this table. Associative and commutative.
  void merge(const LookupTables& other);
  /// Accumulates one scene.
  void add_scene(const SceneGraph& scene);

  bool operator==(const LookupTables&) const = default;
};

/// Exact occurrence counts over `scenes`, computed on `workers` threads.
/// The result does not depend on the worker count or scene order.
/// Throws CorpusError("no corpus") for an empty input.
LookupTables build_tables(std::span<const SceneGraph> scenes, std::size_t workers = 1);
LookupTables build_tables(const SceneGraphMap& scenes, std::size_t workers = 1);

inline constexpr std::uint32_t kTableFormatVersion = 1;

void write_tables(const LookupTables& tables, std::ostream& out);
LookupTables read_tables(std::istream& in);
void save_tables(const LookupTables& tables, const std::filesystem::path& path);
LookupTables load_tables(const std::filesystem::path& path);

nlohmann::ordered_json tables_summary(const LookupTables& tables);

/// Hand-curated groups of interchangeable attributes (colors, materials, ...).
class AttributeClusters {
 public:
  AttributeClusters() = default;

  /// Adds a cluster; throws ValidationError if any member already belongs
  /// to another cluster.
  void add_cluster(const std::string& name, const std::vector<std::string>& members);

  std::optional<std::string> cluster_of(std::string_view attribute) const;
  const std::vector<std::string>& members(std::string_view cluster) const;
  const std::map<std::string, std::vector<std::string>>& clusters() const { return members_; }
  std::size_t size() const { return members_.size(); }

 private:
  std::map<std::string, std::string, std::less<>> cluster_of_;
  std::map<std::string, std::vector<std::string>> members_;
};

/// Parses the text format: `name: attr, attr, ...` per line, `#` comments.
AttributeClusters parse_attribute_clusters(std::istream& in);
AttributeClusters load_attribute_clusters(const std::filesystem::path& path);

}  // namespace foilgen
