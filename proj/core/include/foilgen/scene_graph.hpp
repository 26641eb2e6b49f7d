#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace foilgen {

/// Axis-aligned box in image pixels, origin at the top-left corner.
struct BoundingBox {
  int x = 0;
  int y = 0;
  int w = 1;
  int h = 1;

  int right() const { return x + w; }
  int bottom() const { return y + h; }
  /// Twice the center coordinate, so comparisons stay in integers.
  long twice_center_x() const { return 2L * x + w; }
  long twice_center_y() const { return 2L * y + h; }

  bool operator==(const BoundingBox&) const = default;
};

struct Relation {
  std::string predicate;
  std::string target_id;

  bool operator==(const Relation&) const = default;
};

struct SceneObject {
  std::string id;
  std::string class_name;
  std::vector<std::string> attributes;
  BoundingBox bbox;
  std::vector<Relation> relations;

  bool has_attribute(std::string_view attr) const;
  bool operator==(const SceneObject&) const = default;
};

struct RelationTriple {
  std::string subject_id;
  std::string predicate;
  std::string object_id;

  bool operator==(const RelationTriple&) const = default;
};

/// One image's annotations. Objects keep file order; `find` is O(1).
class SceneGraph {
 public:
  SceneGraph() = default;
  SceneGraph(std::string image_id, int width, int height);

  const std::string& image_id() const { return image_id_; }
  int width() const { return width_; }
  int height() const { return height_; }
  double diagonal() const;

  const std::vector<SceneObject>& objects() const { return objects_; }
  const SceneObject* find(std::string_view id) const;

  /// Appends an object; returns false if the id is already present.
  bool add_object(SceneObject object);

  bool operator==(const SceneGraph& other) const;

 private:
  std::string image_id_;
  int width_ = 0;
  int height_ = 0;
  std::vector<SceneObject> objects_;
  std::unordered_map<std::string, std::size_t> index_;
};

using SceneGraphMap = std::map<std::string, SceneGraph>;

/// Object ids whose class equals `class_name`, in insertion order.
std::vector<std::string> instances_of(const SceneGraph& scene, std::string_view class_name);

std::size_t instance_count(const SceneGraph& scene, std::string_view class_name);

/// One triple per surviving (object, relation) entry, in object then relation order.
std::vector<RelationTriple> relation_triples(const SceneGraph& scene);

struct ParseReport {
  std::size_t images = 0;
  std::size_t objects = 0;
  std::size_t relations = 0;
  std::size_t skipped_images = 0;
  std::size_t skipped_objects = 0;
  std::size_t dropped_relations = 0;
  std::size_t duplicate_attributes = 0;
  std::size_t clamped_boxes = 0;
  std::size_t degenerate_boxes = 0;
  std::size_t duplicate_images = 0;
  std::size_t warning_count = 0;
  /// First `kMaxWarningMessages` messages; `warning_count` holds the total.
  std::vector<std::string> warnings;

  static constexpr std::size_t kMaxWarningMessages = 200;

  void warn(std::string message);
  void merge(const ParseReport& other);
  nlohmann::ordered_json to_json() const;
};

using SceneVisitor = std::function<void(SceneGraph&&)>;

/// Streams a GQA scene-graph document, handing each image to `visit` as soon as
/// it is complete. The document itself is never held in memory as a whole.
/// Throws ParseError for a malformed document.
void for_each_scene_graph(std::istream& in, const SceneVisitor& visit, ParseReport& report);

SceneGraphMap parse_scene_graphs(std::istream& in, ParseReport& report);
SceneGraphMap parse_scene_graphs(std::string_view text, ParseReport& report);

/// Writes scenes back in the GQA layout. Parsing the result yields equal scenes.
void write_scene_graphs(const SceneGraphMap& scenes, std::ostream& out);
nlohmann::ordered_json scene_graph_to_json(const SceneGraph& scene);

}  // namespace foilgen
