#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "foilgen/scene_graph.hpp"

namespace foilgen::testing {

struct SyntheticOptions {
  std::size_t scenes = 60;
  std::uint64_t seed = 1;
  int width = 640;
  int height = 480;
  /// Probability that an ordered object pair gets a relation.
  double relation_rate = 0.2;
  /// Zipf exponents for class, attribute-within-class and predicate ranks.
  double class_zipf = 1.1;
  double attribute_zipf = 1.5;
  double predicate_zipf = 1.3;
};

/// Random GQA-like corpus with skewed class, attribute and predicate
/// frequencies and a class-specific attribute pool. Spatial relations are
/// only annotated where the boxes agree with them. Image ids are
/// "syn<seed>_<index>".
SceneGraphMap synthetic_corpus(const SyntheticOptions& options);

/// The small kitchen scene used in examples: a white bowl left of a gray
/// cat on a wooden table, a white door, two jars and three apples.
SceneGraph kitchen_scene();

}  // namespace foilgen::testing
