#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "foilgen/corpus_stats.hpp"
#include "foilgen/error.hpp"
#include "synthetic.hpp"

namespace foilgen {
namespace {

SceneGraph cat_on_table(const std::string& id) {
  SceneGraph g(id, 100, 100);
  g.add_object({"c", "cat", {"gray"}, {0, 0, 10, 10}, {{"on", "t"}}});
  g.add_object({"t", "table", {}, {0, 20, 50, 10}, {}});
  return g;
}

TEST(BuildTables, SingleOccurrence) {
  SceneGraphMap scenes;
  SceneGraph g("k", 100, 100);
  g.add_object({"b", "bowl", {"white"}, {0, 0, 5, 5}, {}});
  scenes.emplace("k", g);
  const auto t = build_tables(scenes);
  EXPECT_EQ(t.attr_obj_count("white", "bowl"), 1u);
  EXPECT_EQ(t.attr_obj_count("teal", "bowl"), 0u);
  EXPECT_EQ(t.scene_count, 1u);
  EXPECT_EQ(t.class_count_hist.at("bowl").at(1), 1u);
}

TEST(BuildTables, TriplesAcrossScenes) {
  SceneGraphMap scenes{{"a", cat_on_table("a")}, {"b", cat_on_table("b")}};
  const auto t = build_tables(scenes);
  EXPECT_EQ(t.triple_count("cat", "on", "table"), 2u);
  EXPECT_EQ(t.subj_pred_count("cat", "on"), 2u);
  EXPECT_EQ(t.pred_obj_count("on", "table"), 2u);
  EXPECT_EQ(t.relation_count("on"), 2u);
}

TEST(BuildTables, EmptyCorpusIsError) {
  EXPECT_THROW(build_tables(SceneGraphMap{}), CorpusError);
}

TEST(BuildTables, MatchesSingleThreadedRecount) {
  const auto scenes = testing::synthetic_corpus({.scenes = 10, .seed = 4});
  const auto t = build_tables(scenes, 3);
  std::map<std::string, std::uint64_t> preds;
  std::map<TripleKey, std::uint64_t> triples;
  std::map<PairKey, std::uint64_t> attrs;
  std::uint64_t total = 0;
  for (const auto& [id, s] : scenes) {
    for (const auto& o : s.objects()) {
      for (const auto& a : o.attributes) ++attrs[{a, o.class_name}];
    }
    for (const auto& tr : relation_triples(s)) {
      ++preds[tr.predicate];
      ++triples[{s.find(tr.subject_id)->class_name, tr.predicate, s.find(tr.object_id)->class_name}];
      ++total;
    }
  }
  EXPECT_EQ(t.total_relations(), total);
  EXPECT_EQ(t.relation_freq, preds);
  EXPECT_EQ(t.triples, triples);
  EXPECT_EQ(t.attr_obj, attrs);
}

TEST(BuildTables, IndependentOfWorkersAndOrder) {
  const auto scenes = testing::synthetic_corpus({.scenes = 40, .seed = 5});
  std::vector<SceneGraph> list;
  for (const auto& [id, s] : scenes) list.push_back(s);
  const auto one = build_tables(list, 1);
  std::reverse(list.begin(), list.end());
  EXPECT_EQ(build_tables(list, 4), one);
  EXPECT_EQ(build_tables(list, 16), one);
}

TEST(BuildTables, MergeIsAssociativeAndCommutative) {
  const auto scenes = testing::synthetic_corpus({.scenes = 30, .seed = 6});
  std::vector<SceneGraph> list;
  for (const auto& [id, s] : scenes) list.push_back(s);
  const std::span<const SceneGraph> all(list);
  const auto a = build_tables(all.subspan(0, 10));
  const auto b = build_tables(all.subspan(10, 10));
  const auto c = build_tables(all.subspan(20));
  LookupTables left = a;
  left.merge(b);
  left.merge(c);
  LookupTables right = c;
  LookupTables bc = b;
  bc.merge(a);
  right.merge(bc);
  EXPECT_EQ(left, right);
  EXPECT_EQ(left, build_tables(all));
}

TEST(TableFile, RoundTripIsByteIdentical) {
  const auto t = build_tables(testing::synthetic_corpus({.scenes = 25, .seed = 8}));
  std::ostringstream first;
  write_tables(t, first);
  std::istringstream in(first.str());
  const auto loaded = read_tables(in);
  EXPECT_EQ(loaded, t);
  std::ostringstream second;
  write_tables(loaded, second);
  EXPECT_EQ(first.str(), second.str());
}

TEST(TableFile, SaveLoadThroughDisk) {
  const auto t = build_tables(testing::synthetic_corpus({.scenes = 5, .seed = 2}));
  const auto path = std::filesystem::temp_directory_path() / "foilgen_tables_test.bin";
  save_tables(t, path);
  EXPECT_EQ(load_tables(path), t);
  std::filesystem::remove(path);
}

TEST(TableFile, WrongMagicIsVersionError) {
  std::istringstream in("NOTTABLESxxxxxxxxxxxxxxxx");
  EXPECT_THROW(read_tables(in), VersionError);
}

TEST(TableFile, WrongVersionIsVersionError) {
  const auto t = build_tables(SceneGraphMap{{"a", cat_on_table("a")}});
  std::ostringstream out;
  write_tables(t, out);
  std::string bytes = out.str();
  bytes[8] = 2;
  std::istringstream in(bytes);
  EXPECT_THROW(read_tables(in), VersionError);
}

TEST(TableFile, TruncationIsFormatError) {
  const auto t = build_tables(SceneGraphMap{{"a", cat_on_table("a")}});
  std::ostringstream out;
  write_tables(t, out);
  const std::string bytes = out.str();
  for (std::size_t cut : {12ul, 20ul, bytes.size() - 1}) {
    std::istringstream in(bytes.substr(0, cut));
    EXPECT_THROW(read_tables(in), FormatError) << "cut at " << cut;
  }
}

TEST(AttributeClusters, ParseAndLookup) {
  std::istringstream in("# colors\ncolor: white, teal, brown, gray, black\nmaterial: wooden, metal\n");
  const auto c = parse_attribute_clusters(in);
  EXPECT_EQ(c.size(), 2u);
  EXPECT_EQ(c.cluster_of("teal"), c.cluster_of("white"));
  EXPECT_EQ(c.cluster_of("teal"), std::optional<std::string>("color"));
  EXPECT_EQ(c.cluster_of("metal"), std::optional<std::string>("material"));
  EXPECT_FALSE(c.cluster_of("fluffy").has_value());
  EXPECT_EQ(c.members("material"), (std::vector<std::string>{"wooden", "metal"}));
}

TEST(AttributeClusters, AttributeInTwoClustersRejected) {
  std::istringstream in("color: white, teal\nshade: white, dark\n");
  EXPECT_THROW(parse_attribute_clusters(in), ValidationError);
}

}  // namespace
}  // namespace foilgen
