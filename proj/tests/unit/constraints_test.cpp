#include <gtest/gtest.h>

#include <sstream>

#include "foilgen/constraints.hpp"
#include "foilgen/error.hpp"
#include "foilgen/rng.hpp"
#include "harness.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

namespace foilgen {
namespace {

struct Named {
  std::string value;
};

const AmbiguityLexicons& lex() { return testing::default_assets().lexicons; }

TEST(Ambiguity, ReferenceIsAmbiguous) {
  SceneGraph g("g", 10, 10);
  g.add_object({"s1", "sheep", {}, {}, {}});
  g.add_object({"s2", "sheep", {}, {}, {}});
  g.add_object({"c", "cat", {}, {}, {}});
  EXPECT_TRUE(reference_is_ambiguous(g, "sheep"));
  EXPECT_FALSE(reference_is_ambiguous(g, "cat"));
  EXPECT_FALSE(reference_is_ambiguous(g, "unicorn"));
}

TEST(Ambiguity, BundledLexicons) {
  EXPECT_TRUE(pair_is_bodyparts("ear", "nose", lex()));
  EXPECT_TRUE(pair_is_bodyparts("leg", "paw", lex()));
  EXPECT_FALSE(pair_is_bodyparts("ear", "table", lex()));
  EXPECT_TRUE(involves_background("grass", "ball", lex()));
  EXPECT_TRUE(involves_background("sky", "kite", lex()));
  EXPECT_FALSE(involves_background("cup", "ball", lex()));
}

TEST(Ambiguity, OverlappingLexiconsRejected) {
  AmbiguityLexicons bad{{"ear", "grass"}, {"grass"}};
  EXPECT_THROW(bad.validate(), ValidationError);
  EXPECT_NO_THROW(lex().validate());
}

TEST(Ambiguity, ClassListComments) {
  std::istringstream in("# parts\nEar\n  nose  # face\n\n");
  EXPECT_EQ(parse_class_list(in), (std::set<std::string, std::less<>>{"ear", "nose"}));
}

TEST(Ambiguity, RelationGates) {
  const auto k = testing::kitchen_scene();
  EXPECT_TRUE(relation_passes_gates(k, "bowl", "cat", lex()));
  EXPECT_FALSE(relation_passes_gates(k, "jar", "door", lex()));
  EXPECT_FALSE(relation_passes_gates(k, "cat", "cat", lex()));
  SceneGraph face("f", 10, 10);
  face.add_object({"e", "ear", {}, {}, {}});
  face.add_object({"n", "nose", {}, {}, {}});
  face.add_object({"g", "grass", {}, {}, {}});
  face.add_object({"b", "ball", {}, {}, {}});
  EXPECT_FALSE(relation_passes_gates(face, "ear", "nose", lex()));
  EXPECT_FALSE(relation_passes_gates(face, "grass", "ball", lex()));
  EXPECT_TRUE(relation_passes_gates(face, "ear", "ball", lex()));
}

TEST(Geometry, DisjointHorizontalBoxes) {
  const BoundingBox a{0, 0, 10, 10};
  const BoundingBox b{100, 0, 10, 10};
  EXPECT_EQ(spatial_relation_verdict(a, b, "to the left of"), SpatialVerdict::Holds);
  EXPECT_EQ(spatial_relation_verdict(a, b, "to the right of"), SpatialVerdict::Contradicts);
  EXPECT_EQ(spatial_relation_verdict(a, b, "in front of"), SpatialVerdict::Unknown);
  EXPECT_EQ(spatial_relation_verdict(a, b, "holding"), SpatialVerdict::Unknown);
}

TEST(Geometry, HeavyOverlapIsUnknown) {
  const BoundingBox a{0, 0, 100, 10};
  const BoundingBox b{20, 30, 100, 10};
  EXPECT_EQ(spatial_relation_verdict(a, b, "to the left of"), SpatialVerdict::Unknown);
  EXPECT_EQ(spatial_relation_verdict(a, b, "above"), SpatialVerdict::Holds);
  EXPECT_EQ(spatial_relation_verdict(a, b, "under"), SpatialVerdict::Contradicts);
}

TEST(Geometry, NearUsesDiagonal) {
  const BoundingBox a{0, 0, 10, 10};
  const BoundingBox b{15, 0, 10, 10};
  const BoundingBox far{500, 0, 10, 10};
  EXPECT_EQ(spatial_relation_verdict(a, b, "near", {}, 1000.0), SpatialVerdict::Holds);
  EXPECT_EQ(spatial_relation_verdict(a, far, "near", {}, 1000.0), SpatialVerdict::Contradicts);
  EXPECT_EQ(spatial_relation_verdict(a, b, "near", {}, 0.0), SpatialVerdict::Unknown);
}

TEST(Geometry, AgreesWithOracleAndIsAntisymmetric) {
  Rng rng(17);
  const char* preds[] = {"to the left of", "to the right of", "above", "below",
                         "on top of",      "under",           "near",  "behind"};
  auto box = [&] {
    return BoundingBox{static_cast<int>(uniform_index(rng, 600)),
                       static_cast<int>(uniform_index(rng, 400)),
                       1 + static_cast<int>(uniform_index(rng, 200)),
                       1 + static_cast<int>(uniform_index(rng, 200))};
  };
  for (int i = 0; i < 5000; ++i) {
    const auto a = box();
    const auto b = box();
    for (const char* p : preds) {
      const auto v = spatial_relation_verdict(a, b, p, {}, 1000.0);
      ASSERT_TRUE(testing::same_verdict(testing::oracle_spatial_verdict(a, b, p, 0.3, 0.1, 1000.0), v))
          << p;
      if (auto inv = inverse_spatial_predicate(p); inv && *inv != p) {
        ASSERT_EQ(v, spatial_relation_verdict(b, a, *inv, {}, 1000.0)) << p;
      }
    }
  }
}

TEST(Geometry, AnnotatedThroughMirror) {
  const auto k = testing::kitchen_scene();
  const auto& cat = *k.find("cat");
  const auto& bowl = *k.find("bowl");
  EXPECT_TRUE(relation_annotated(bowl, "to the left of", cat));
  EXPECT_TRUE(relation_annotated(cat, "to the right of", bowl));
  EXPECT_FALSE(relation_annotated(cat, "to the left of", bowl));
  EXPECT_TRUE(relation_annotated(cat, "on", *k.find("table")));
  EXPECT_FALSE(relation_annotated(*k.find("table"), "under", cat));
}

TEST(NoisyFilter, CleanDropsConfirmedCandidates) {
  SceneGraph g("g", 1000, 1000);
  g.add_object({"cat", "cat", {}, {400, 0, 50, 50}, {{"to the left of", "bowl"}}});
  g.add_object({"bowl", "bowl", {}, {600, 0, 50, 50}, {}});
  g.add_object({"door", "door", {}, {800, 0, 50, 50}, {}});
  g.add_object({"rug", "rug", {}, {100, 0, 50, 50}, {}});
  const SlotContext ctx{FoilSlot::Object, "cat", "to the left of", "bowl"};
  const std::vector<Named> candidates{{"door"}, {"rug"}};
  EXPECT_EQ(substituted_verdict(g, ctx, "door", {}), SpatialVerdict::Holds);
  EXPECT_EQ(substituted_verdict(g, ctx, "rug", {}), SpatialVerdict::Contradicts);
  const auto clean = filter_noisy_candidates(g, ctx, candidates, Noise::Clean, {});
  ASSERT_EQ(clean.size(), 1u);
  EXPECT_EQ(clean[0].value, "rug");
  const auto noisy = filter_noisy_candidates(g, ctx, candidates, Noise::Noisy, {});
  EXPECT_EQ(noisy.size(), 2u);
}

TEST(NoisyFilter, DoorRightOfCatKeptWhenFoilingLeftOf) {
  SceneGraph g("g", 1000, 1000);
  g.add_object({"cat", "cat", {}, {400, 0, 50, 50}, {{"to the left of", "bowl"}}});
  g.add_object({"bowl", "bowl", {}, {600, 0, 50, 50}, {}});
  g.add_object({"door", "door", {}, {100, 0, 50, 50}, {}});
  const SlotContext ctx{FoilSlot::Object, "cat", "to the left of", "bowl"};
  const auto kept = filter_noisy_candidates(g, ctx, std::vector<Named>{{"door"}}, Noise::Clean, {});
  EXPECT_EQ(kept.size(), 1u);
}

TEST(NoisyFilter, PredicateSlot) {
  const auto k = testing::kitchen_scene();
  const SlotContext ctx{FoilSlot::Predicate, "bowl", "to the left of", "cat"};
  EXPECT_EQ(substituted_verdict(k, ctx, "to the right of", {}), SpatialVerdict::Contradicts);
  EXPECT_EQ(substituted_verdict(k, ctx, "on", {}), SpatialVerdict::Unknown);
}

}  // namespace
}  // namespace foilgen
