#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "foilgen/dataset.hpp"
#include "foilgen/error.hpp"
#include "foilgen/generation_config.hpp"
#include "foilgen/pipeline.hpp"
#include "harness.hpp"
#include "synthetic.hpp"

namespace foilgen {
namespace {

namespace fs = std::filesystem;

DatasetRecord sample_record() {
  DatasetRecord r;
  r.image_id = "img1";
  r.caption_type = CaptionType::XorLogicRelation;
  r.pair_index = 4;
  r.label = 0;
  r.text = "The cat is on either the table or the chair.";
  r.foil_slot = FoilSlot::Object;
  r.foil_key = "obj1";
  r.original_value = "table";
  r.foil_value = "sofa";
  r.regime = "clean-strict";
  r.split = "val";
  r.generator_version = "0.1.0";
  r.seed = 42;
  r.spatial_verdict = SpatialVerdict::Unknown;
  r.bindings = {{"subj", "cat"}, {"pred", "on"}, {"obj1", "sofa"}, {"obj2", "chair"}};
  r.notes = "note";
  return r;
}

TEST(DatasetRecord, RoundTrip) {
  const auto r = sample_record();
  const auto line = serialize_record(r);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  EXPECT_EQ(parse_record(line), r);
  auto plain = r;
  plain.spatial_verdict.reset();
  plain.notes.reset();
  EXPECT_EQ(parse_record(serialize_record(plain)), plain);
}

TEST(DatasetRecord, MissingOrMistypedFieldIsFormatError) {
  auto j = nlohmann::json::parse(serialize_record(sample_record()));
  auto missing = j;
  missing.erase("text");
  EXPECT_THROW(record_from_json(missing), FormatError);
  auto mistyped = j;
  mistyped["label"] = "one";
  EXPECT_THROW(record_from_json(mistyped), FormatError);
  auto bad_type = j;
  bad_type["caption_type"] = "haiku";
  EXPECT_THROW(record_from_json(bad_type), FormatError);
  EXPECT_THROW(parse_record("{not json"), FormatError);
}

TEST(DatasetRecord, PairGivesPositiveThenNegative) {
  CaptionPair p;
  p.image_id = "k";
  p.type = CaptionType::Attribute;
  p.positive_text = "The bowl is white.";
  p.negative_text = "The bowl is teal.";
  p.foil_key = "attr";
  p.original_value = "white";
  p.foil_value = "teal";
  p.positive_bindings = {{"obj", "bowl"}, {"attr", "white"}};
  p.negative_bindings = {{"obj", "bowl"}, {"attr", "teal"}};
  const auto recs = records_for_pair(p, {"clean-strict", "train", "0.1.0", 9});
  EXPECT_EQ(recs[0].label, 1);
  EXPECT_EQ(recs[0].text, "The bowl is white.");
  EXPECT_EQ(recs[1].label, 0);
  EXPECT_EQ(recs[1].bindings.at("attr"), "teal");
  EXPECT_EQ(recs[1].split, "train");
  EXPECT_EQ(recs[1].seed, 9u);
}

TEST(Stats, TotalsFromStream) {
  std::ostringstream data;
  auto r = sample_record();
  for (int i = 0; i < 3; ++i) {
    r.label = 1;
    r.image_id = "img" + std::to_string(i % 2);
    data << serialize_record(r) << '\n';
    r.label = 0;
    data << serialize_record(r) << '\n';
  }
  data << "garbage line\n\n";
  std::istringstream in(data.str());
  const auto s = compute_stats(in);
  EXPECT_EQ(s.total_captions, 6u);
  EXPECT_EQ(s.total_pairs, 3u);
  EXPECT_EQ(s.positives, 3u);
  EXPECT_EQ(s.negatives, 3u);
  EXPECT_EQ(s.images, 2u);
  EXPECT_EQ(s.malformed_lines, 1u);
  EXPECT_EQ(s.per_type.at("XOR_logic_relation"), 6u);
  EXPECT_EQ(s.per_split.at("val"), 6u);
  EXPECT_DOUBLE_EQ(s.average_caption_length(), 10.0);
  EXPECT_DOUBLE_EQ(s.average_captions_per_image(), 3.0);
  EXPECT_NE(s.to_table().find("XOR_logic_relation"), std::string::npos);
}

TEST(Config, ParsesAndResolvesPaths) {
  const auto j = nlohmann::json::parse(R"({
    "schema_version": 1, "regime": "noisy-relaxed", "seed": 17,
    "max_pairs_per_type_per_image": 3, "max_count": 8,
    "geometry": {"max_overlap_ratio": 0.25, "near_gap_fraction": 0.05},
    "balance_policy": "alternating", "foil_weighting": "uniform",
    "assets": {"attribute_clusters": "a.txt"},
    "splits": {"train": "/abs/train.txt", "val": "val.txt"}})");
  const auto c = parse_config(j, "/base");
  EXPECT_EQ(c.generation.regime.name(), "noisy-relaxed");
  EXPECT_EQ(c.generation.global_seed, 17u);
  EXPECT_EQ(c.generation.max_pairs_per_type_per_image, 3);
  EXPECT_EQ(c.generation.max_count, 8);
  EXPECT_DOUBLE_EQ(c.generation.geometry.max_overlap_ratio, 0.25);
  EXPECT_EQ(c.generation.foil_weighting, FoilWeighting::Uniform);
  EXPECT_EQ(c.attribute_clusters, fs::path("/base/a.txt"));
  EXPECT_EQ(c.split_manifests.at("train"), fs::path("/abs/train.txt"));
  EXPECT_EQ(c.split_manifests.at("val"), fs::path("/base/val.txt"));
  const auto back = parse_config(config_to_json(c.generation));
  EXPECT_EQ(back.generation.regime, c.generation.regime);
  EXPECT_EQ(back.generation.global_seed, 17u);
}

TEST(Config, RejectsInvalid) {
  for (const char* text : {R"({"regime": "dirty-strict"})", R"({"schema_version": 2})",
                           R"({"max_count": 1})", R"({"max_pairs_per_type_per_image": 0})",
                           R"({"geometry": {"max_overlap_ratio": 1.5}})", R"({"colour": "red"})",
                           R"({"seed": -1})", R"({"balance_policy": "random"})", R"([1])"}) {
    EXPECT_THROW(parse_config(nlohmann::json::parse(text)), ConfigError) << text;
  }
  EXPECT_NO_THROW(parse_config(nlohmann::json::object()));
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Splits, ManifestsAndConflicts) {
  const auto dir = fs::temp_directory_path() / "foilgen_split_test";
  fs::create_directories(dir);
  std::ofstream(dir / "train.txt") << "# train ids\na\nb\n";
  std::ofstream(dir / "val.txt") << "c\n";
  std::ofstream(dir / "dup.txt") << "a\n";
  const auto s = SplitAssignment::from_manifests({{"train", dir / "train.txt"}, {"val", dir / "val.txt"}});
  EXPECT_EQ(s.split_of("a"), std::optional<std::string>("train"));
  EXPECT_EQ(s.split_of("c"), std::optional<std::string>("val"));
  EXPECT_FALSE(s.split_of("z").has_value());
  EXPECT_THROW(SplitAssignment::from_manifests({{"train", dir / "train.txt"}, {"dup", dir / "dup.txt"}}),
               ConfigError);
  EXPECT_EQ(SplitAssignment().split_of("anything"), std::optional<std::string>("all"));
  fs::remove_all(dir);
}

struct PipelineFixture : ::testing::Test {
  SceneGraphMap scenes = testing::synthetic_corpus({.scenes = 50, .seed = 12});
  LookupTables tables = build_tables(scenes);
  CandidateIndex index{tables};
  GenerationConfig config = testing::config_for("clean-strict", 4);
  GenerationContext ctx{index, testing::default_assets().clusters, testing::default_assets().lexicons,
                        config};
  std::string scene_text = [this] {
    std::ostringstream out;
    write_scene_graphs(scenes, out);
    return out.str();
  }();

  std::pair<std::string, PipelineResult> run(unsigned workers, std::size_t batch,
                                            const SplitAssignment& splits = SplitAssignment()) {
    std::istringstream in(scene_text);
    std::ostringstream out;
    auto result = run_generation(in, ctx, splits, out, {workers, batch});
    return {out.str(), result};
  }
};

TEST_F(PipelineFixture, WorkerCountDoesNotChangeOutput) {
  const auto [one, r1] = run(1, 512);
  ASSERT_FALSE(one.empty());
  for (auto [workers, batch] : {std::pair{2u, 7ul}, {5u, 3ul}, {8u, 512ul}}) {
    const auto [many, r] = run(workers, batch);
    EXPECT_EQ(many, one) << workers << " workers, batch " << batch;
    EXPECT_EQ(r.stats.total_captions, r1.stats.total_captions);
  }
  EXPECT_EQ(r1.generation.images, scenes.size());
  EXPECT_TRUE(r1.balance.balanced);
}

TEST_F(PipelineFixture, OutputMatchesDirectGeneration) {
  const auto [text, result] = run(3, 16);
  const auto direct = testing::generate_all(scenes, tables, config);
  EXPECT_EQ(result.stats.total_pairs, direct.pairs.size());
  std::istringstream in(text);
  std::size_t lines = 0;
  EXPECT_EQ(for_each_record(in, [&](DatasetRecord&& r) {
              ++lines;
              EXPECT_EQ(r.regime, "clean-strict");
              EXPECT_EQ(r.split, "all");
            }),
            0u);
  EXPECT_EQ(lines, 2 * direct.pairs.size());
}

TEST_F(PipelineFixture, UnassignedImagesSkipped) {
  SplitAssignment splits;
  splits.assign(scenes.begin()->first, "train");
  const auto [text, result] = run(2, 8, splits);
  EXPECT_EQ(result.unassigned_images, scenes.size() - 1);
  EXPECT_EQ(result.generation.images, 1u);
  std::istringstream in(text);
  for_each_record(in, [&](DatasetRecord&& r) {
    EXPECT_EQ(r.image_id, scenes.begin()->first);
    EXPECT_EQ(r.split, "train");
  });
}

TEST_F(PipelineFixture, EmptySceneFile) {
  scene_text = "{}";
  const auto [text, result] = run(4, 8);
  EXPECT_TRUE(text.empty());
  EXPECT_EQ(result.generation.images, 0u);
  EXPECT_EQ(result.to_json()["generation"]["images"], 0);
}

}  // namespace
}  // namespace foilgen
