#include "foilgen/scene_graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "foilgen/error.hpp"
#include "foilgen/text.hpp"

namespace foilgen {

using json = nlohmann::ordered_json;

bool SceneObject::has_attribute(std::string_view attr) const {
  return std::find(attributes.begin(), attributes.end(), attr) != attributes.end();
}

SceneGraph::SceneGraph(std::string image_id, int width, int height)
    : image_id_(std::move(image_id)), width_(width), height_(height) {}

double SceneGraph::diagonal() const {
  return std::hypot(static_cast<double>(width_), static_cast<double>(height_));
}

const SceneObject* SceneGraph::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &objects_[it->second];
}

bool SceneGraph::add_object(SceneObject object) {
  auto [it, inserted] = index_.emplace(object.id, objects_.size());
  if (!inserted) return false;
  objects_.push_back(std::move(object));
  return true;
}

bool SceneGraph::operator==(const SceneGraph& other) const {
  return image_id_ == other.image_id_ && width_ == other.width_ &&
         height_ == other.height_ && objects_ == other.objects_;
}

std::vector<std::string> instances_of(const SceneGraph& scene, std::string_view class_name) {
  std::vector<std::string> ids;
  for (const auto& obj : scene.objects()) {
    if (obj.class_name == class_name) ids.push_back(obj.id);
  }
  return ids;
}

std::size_t instance_count(const SceneGraph& scene, std::string_view class_name) {
  return static_cast<std::size_t>(
      std::count_if(scene.objects().begin(), scene.objects().end(),
                    [&](const SceneObject& o) { return o.class_name == class_name; }));
}

std::vector<RelationTriple> relation_triples(const SceneGraph& scene) {
  std::vector<RelationTriple> triples;
  for (const auto& obj : scene.objects()) {
    for (const auto& rel : obj.relations) {
      triples.push_back({obj.id, rel.predicate, rel.target_id});
    }
  }
  return triples;
}

void ParseReport::warn(std::string message) {
  ++warning_count;
  if (warnings.size() < kMaxWarningMessages) warnings.push_back(std::move(message));
}

void ParseReport::merge(const ParseReport& other) {
  images += other.images;
  objects += other.objects;
  relations += other.relations;
  skipped_images += other.skipped_images;
  skipped_objects += other.skipped_objects;
  dropped_relations += other.dropped_relations;
  duplicate_attributes += other.duplicate_attributes;
  clamped_boxes += other.clamped_boxes;
  degenerate_boxes += other.degenerate_boxes;
  duplicate_images += other.duplicate_images;
  warning_count += other.warning_count;
  for (const auto& w : other.warnings) {
    if (warnings.size() >= kMaxWarningMessages) break;
    warnings.push_back(w);
  }
}

json ParseReport::to_json() const {
  json j;
  j["images"] = images;
  j["objects"] = objects;
  j["relations"] = relations;
  j["skipped_images"] = skipped_images;
  j["skipped_objects"] = skipped_objects;
  j["dropped_relations"] = dropped_relations;
  j["duplicate_attributes"] = duplicate_attributes;
  j["clamped_boxes"] = clamped_boxes;
  j["degenerate_boxes"] = degenerate_boxes;
  j["duplicate_images"] = duplicate_images;
  j["box_policy"] = "clamp-to-image";
  j["warning_count"] = warning_count;
  j["warnings"] = warnings;
  return j;
}

namespace {

std::optional<int> read_int(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) return std::nullopt;
  if (it->is_number_float()) return static_cast<int>(std::lround(it->get<double>()));
  return static_cast<int>(it->get<long long>());
}

// Clamps into [0,width]x[0,height] and enforces a one-pixel minimum extent.
BoundingBox clamp_box(int x, int y, int w, int h, int width, int height,
                      bool& clamped, bool& degenerate) {
  BoundingBox b{x, y, w, h};
  auto clamp_axis = [&](int& pos, int& extent, int limit) {
    int lo = std::clamp(pos, 0, std::max(0, limit - 1));
    int hi = std::clamp(pos + extent, 0, limit);
    if (lo != pos || hi != pos + extent) clamped = true;
    if (hi - lo < 1) {
      degenerate = true;
      hi = lo + 1;
    }
    pos = lo;
    extent = hi - lo;
  };
  clamp_axis(b.x, b.w, width);
  clamp_axis(b.y, b.h, height);
  return b;
}

std::optional<SceneObject> convert_object(const std::string& image_id, const std::string& id,
                                          const json& raw, int width, int height,
                                          ParseReport& report) {
  if (!raw.is_object()) return std::nullopt;
  auto name = raw.find("name");
  if (name == raw.end() || !name->is_string()) return std::nullopt;
  auto x = read_int(raw, "x");
  auto y = read_int(raw, "y");
  auto w = read_int(raw, "w");
  auto h = read_int(raw, "h");
  if (!x || !y || !w || !h) return std::nullopt;

  SceneObject obj;
  obj.id = id;
  obj.class_name = canonical_token(name->get<std::string>());
  if (obj.class_name.empty()) return std::nullopt;

  bool clamped = false;
  bool degenerate = false;
  obj.bbox = clamp_box(*x, *y, *w, *h, width, height, clamped, degenerate);
  if (clamped) ++report.clamped_boxes;
  if (degenerate) {
    ++report.degenerate_boxes;
    report.warn("image " + image_id + ": object " + id + " has a zero-area box");
  }

  if (auto attrs = raw.find("attributes"); attrs != raw.end()) {
    if (!attrs->is_array()) return std::nullopt;
    for (const auto& a : *attrs) {
      if (!a.is_string()) return std::nullopt;
      std::string attr = canonical_token(a.get<std::string>());
      if (attr.empty()) continue;
      if (obj.has_attribute(attr)) {
        ++report.duplicate_attributes;
        continue;
      }
      obj.attributes.push_back(std::move(attr));
    }
  }

  if (auto rels = raw.find("relations"); rels != raw.end()) {
    if (!rels->is_array()) return std::nullopt;
    for (const auto& r : *rels) {
      auto rn = r.is_object() ? r.find("name") : r.end();
      auto ro = r.is_object() ? r.find("object") : r.end();
      if (!r.is_object() || rn == r.end() || ro == r.end() || !rn->is_string() ||
          !ro->is_string()) {
        return std::nullopt;
      }
      obj.relations.push_back({canonical_token(rn->get<std::string>()), ro->get<std::string>()});
    }
  }
  return obj;
}

std::optional<SceneGraph> convert_image(const std::string& image_id, const json& raw,
                                        ParseReport& report) {
  if (!raw.is_object()) {
    report.warn("image " + image_id + ": record is not an object; skipped");
    return std::nullopt;
  }
  auto width = read_int(raw, "width");
  auto height = read_int(raw, "height");
  if (!width || !height || *width <= 0 || *height <= 0) {
    report.warn("image " + image_id + ": missing or invalid width/height; skipped");
    return std::nullopt;
  }
  SceneGraph scene(image_id, *width, *height);
  auto objects = raw.find("objects");
  if (objects != raw.end() && !objects->is_object()) {
    report.warn("image " + image_id + ": 'objects' is not a map; skipped");
    return std::nullopt;
  }
  if (objects != raw.end()) {
    for (const auto& [id, obj_raw] : objects->items()) {
      auto obj = convert_object(image_id, id, obj_raw, *width, *height, report);
      if (!obj) {
        ++report.skipped_objects;
        report.warn("image " + image_id + ": malformed object record " + id + "; skipped");
        continue;
      }
      scene.add_object(std::move(*obj));
    }
  }

  // Relations are resolved only after all objects are known.
  SceneGraph resolved(image_id, *width, *height);
  for (auto obj : scene.objects()) {
    std::vector<Relation> kept;
    for (auto& rel : obj.relations) {
      if (scene.find(rel.target_id) == nullptr) {
        ++report.dropped_relations;
        report.warn("image " + image_id + ": object " + obj.id + " relation '" + rel.predicate +
                    "' targets unknown id " + rel.target_id + "; dropped");
        continue;
      }
      kept.push_back(std::move(rel));
    }
    report.relations += kept.size();
    obj.relations = std::move(kept);
    resolved.add_object(std::move(obj));
  }
  report.objects += resolved.objects().size();
  return resolved;
}

}  // namespace

void for_each_scene_graph(std::istream& in, const SceneVisitor& visit, ParseReport& report) {
  std::string current_key;
  bool top_level_checked = false;
  auto callback = [&](int depth, json::parse_event_t event, json& parsed) -> bool {
    if (depth == 0 && !top_level_checked) {
      top_level_checked = true;
      if (event != json::parse_event_t::object_start) {
        throw ParseError("scene-graph document must be a map of image id to graph", 0);
      }
      return true;
    }
    if (depth != 1) return true;
    if (event == json::parse_event_t::key) {
      current_key = parsed.get<std::string>();
      return true;
    }
    if (event == json::parse_event_t::object_end || event == json::parse_event_t::array_end ||
        event == json::parse_event_t::value) {
      if (auto scene = convert_image(current_key, parsed, report)) {
        ++report.images;
        visit(std::move(*scene));
      } else {
        ++report.skipped_images;
      }
      return false;
    }
    return true;
  };
  try {
    json discarded = json::parse(in, callback);
    (void)discarded;
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed scene-graph document: ") + e.what(), e.byte);
  }
  if (!top_level_checked) throw ParseError("empty scene-graph document", 0);
}

SceneGraphMap parse_scene_graphs(std::istream& in, ParseReport& report) {
  SceneGraphMap scenes;
  for_each_scene_graph(
      in,
      [&](SceneGraph&& scene) {
        std::string id = scene.image_id();
        auto [it, inserted] = scenes.try_emplace(id, std::move(scene));
        if (!inserted) {
          ++report.duplicate_images;
          report.warn("duplicate image id " + id + "; keeping the first occurrence");
        }
      },
      report);
  return scenes;
}

SceneGraphMap parse_scene_graphs(std::string_view text, ParseReport& report) {
  std::istringstream in{std::string(text)};
  return parse_scene_graphs(in, report);
}

json scene_graph_to_json(const SceneGraph& scene) {
  json j;
  j["width"] = scene.width();
  j["height"] = scene.height();
  json objects = json::object();
  for (const auto& obj : scene.objects()) {
    json o;
    o["name"] = obj.class_name;
    o["x"] = obj.bbox.x;
    o["y"] = obj.bbox.y;
    o["w"] = obj.bbox.w;
    o["h"] = obj.bbox.h;
    o["attributes"] = obj.attributes;
    json rels = json::array();
    for (const auto& r : obj.relations) rels.push_back({{"name", r.predicate}, {"object", r.target_id}});
    o["relations"] = std::move(rels);
    objects[obj.id] = std::move(o);
  }
  j["objects"] = std::move(objects);
  return j;
}

void write_scene_graphs(const SceneGraphMap& scenes, std::ostream& out) {
  out << '{';
  bool first = true;
  for (const auto& [id, scene] : scenes) {
    if (!first) out << ",\n";
    first = false;
    out << json(id).dump() << ':' << scene_graph_to_json(scene).dump();
  }
  out << "}\n";
}

}  // namespace foilgen
