#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string_view>

#include "foilgen/rng.hpp"
#include "oracles.hpp"

namespace foilgen::testing {

namespace {

// Ordered by frequency rank.
const std::vector<std::string> kClasses{
    "table",    "chair",   "cat",      "dog",      "bowl",    "cup",      "plate",   "bottle",
    "lamp",     "door",    "window",   "car",      "tree",    "book",     "vase",    "clock",
    "bench",    "bag",     "box",      "sign",     "pole",    "shirt",    "man",     "woman",
    "horse",    "bird",    "laptop",   "phone",    "pillow",  "bed",      "sofa",    "shelf",
    "jar",      "apple",   "banana",   "truck",    "bicycle", "umbrella", "kite",    "boat",
    "fence",    "plant",   "flower",   "sheep",    "bus",     "sky",      "wall",    "ground",
    "grass",    "ear",     "nose",     "hand",     "eye",     "jeans",    "hat",     "jacket",
    "helmet",   "train",   "building", "cabinet",  "counter", "sink",     "mirror",  "towel",
    "curtain",  "rug",     "basket",   "bucket",   "candle",  "glass",    "fork",    "knife",
    "spoon",    "pizza",   "sandwich", "cake",     "donut",   "carrot",   "broccoli", "elephant",
    "giraffe",  "zebra",   "cow",      "bear",     "skateboard", "surfboard", "racket", "ball",
    "frisbee",  "motorcycle", "airplane", "tower", "bridge",  "statue",   "flag",    "keyboard",
    "mouse",    "monitor", "remote",   "television", "toilet", "tile",    "napkin",  "tray"};

const std::vector<std::string> kAttributes{
    "white",   "black",   "blue",    "green",   "red",     "brown",   "yellow",  "gray",
    "orange",  "pink",    "purple",  "silver",  "tan",     "teal",    "wooden",  "metal",
    "plastic", "glass",   "brick",   "stone",   "leather", "paper",   "large",   "small",
    "tall",    "short",   "long",    "open",    "closed",  "empty",   "full",    "wet",
    "dry",     "clean",   "dirty",   "parked",  "standing", "sitting", "striped", "round",
    "old",     "young",   "new",     "shiny",   "beige",   "gold",    "dark",    "light",
    "bright",  "thick",   "thin",    "wide",    "narrow",  "tiny",    "huge",    "curved",
    "square",  "fluffy",  "furry",   "cloudy",  "clear",   "smooth",  "rough",   "spotted",
    "plaid",   "folded",  "broken",  "lit",     "ceramic", "cotton",  "denim",   "concrete",
    "maroon",  "khaki",   "navy",    "cream colored", "dark brown", "light brown", "dark blue",
    "light blue", "black and white", "steel", "granite", "marble", "rubber", "straw", "wicker",
    "cardboard", "porcelain", "cloth", "wire", "little", "big", "giant", "short sleeved",
    "long sleeved", "sliced", "cut", "cooked", "raw", "ripe", "unripe", "walking", "running",
    "lying", "hanging", "flying", "checkered", "patterned", "blurry", "rectangular", "triangular",
    "straight", "circular", "oval", "adult", "baby", "bare", "leafy", "grassy", "sandy", "snowy",
    "rocky", "calm", "modern", "antique", "decorative", "electric", "framed", "painted", "printed"};

// Global predicate ranking, most frequent first.
const std::vector<std::string> kPredicates{
    "to the left of", "to the right of", "on",     "wearing",  "near",       "next to",
    "holding",        "behind",          "in front of", "above", "below",    "sitting on",
    "under",          "on top of",       "hanging on",  "in",    "carrying", "covering"};

std::vector<double> zipf_weights(std::size_t n, double s) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 / std::pow(double(i + 1), s);
  return w;
}

/// Fixed per-class permutation prefix of the attribute list.
std::vector<std::string> attribute_pool(const std::string& cls, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "pool:" + cls));
  std::vector<std::string> all = kAttributes;
  shuffle_in_place(std::span<std::string>(all), rng);
  const std::size_t size = 15 + uniform_index(rng, 45);
  all.resize(size);
  return all;
}

/// Predicate indices a subject class may use; every class keeps the two
/// most frequent ones.
std::vector<std::size_t> predicate_pool(const std::string& cls, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "preds:" + cls));
  std::vector<std::size_t> pool{0, 1};
  for (std::size_t p = 2; p < kPredicates.size(); ++p) {
    if (uniform_unit(rng) < 0.6) pool.push_back(p);
  }
  return pool;
}

BoundingBox random_box(Rng& rng, int width, int height) {
  BoundingBox b;
  b.w = 20 + static_cast<int>(uniform_index(rng, static_cast<std::size_t>(width / 3)));
  b.h = 20 + static_cast<int>(uniform_index(rng, static_cast<std::size_t>(height / 3)));
  b.x = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(width - b.w)));
  b.y = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(height - b.h)));
  return b;
}

}  // namespace

SceneGraphMap synthetic_corpus(const SyntheticOptions& options) {
  SceneGraphMap out;
  const auto class_w = zipf_weights(kClasses.size(), options.class_zipf);
  const double diag = std::hypot(double(options.width), double(options.height));
  const std::vector<double> instance_w{0.62, 0.22, 0.1, 0.06};

  for (std::size_t i = 0; i < options.scenes; ++i) {
    const std::string id = "syn" + std::to_string(options.seed) + "_" + std::to_string(i);
    Rng rng(derive_seed(options.seed, id));
    SceneGraph scene(id, options.width, options.height);

    const std::size_t n_classes = 5 + uniform_index(rng, 10);
    std::set<std::size_t> chosen;
    while (chosen.size() < n_classes) chosen.insert(weighted_index(rng, class_w));

    int next_id = 0;
    for (std::size_t c : chosen) {
      const std::string& cls = kClasses[c];
      const auto pool = attribute_pool(cls, options.seed);
      const auto pool_w = zipf_weights(pool.size(), options.attribute_zipf);
      const std::size_t instances = 1 + weighted_index(rng, instance_w);
      for (std::size_t k = 0; k < instances; ++k) {
        SceneObject obj;
        obj.id = id + "_o" + std::to_string(next_id++);
        obj.class_name = cls;
        obj.bbox = random_box(rng, options.width, options.height);
        const std::size_t n_attr = weighted_index(rng, std::vector<double>{0.25, 0.5, 0.25});
        for (std::size_t a = 0; a < n_attr; ++a) {
          const std::string& attr = pool[weighted_index(rng, pool_w)];
          if (!obj.has_attribute(attr)) obj.attributes.push_back(attr);
        }
        scene.add_object(std::move(obj));
      }
    }

    // Relations are attached after all boxes exist. A predicate the boxes
    // contradict is redrawn a few times, then the pair is left unrelated.
    std::vector<SceneObject> objects = scene.objects();
    const auto pred_w = zipf_weights(kPredicates.size(), options.predicate_zipf);
    for (auto& s : objects) {
      const auto pool = predicate_pool(s.class_name, options.seed);
      std::vector<double> w;
      for (std::size_t p : pool) w.push_back(pred_w[p]);
      for (const auto& o : objects) {
        if (s.id == o.id || uniform_unit(rng) >= options.relation_rate) continue;
        for (int attempt = 0; attempt < 4; ++attempt) {
          const std::string& p = kPredicates[pool[weighted_index(rng, w)]];
          if (oracle_spatial_verdict(s.bbox, o.bbox, p, 0.3, 0.1, diag) !=
              OracleVerdict::Contradicts) {
            s.relations.push_back({p, o.id});
            break;
          }
        }
      }
    }
    SceneGraph rebuilt(id, options.width, options.height);
    for (auto& obj : objects) rebuilt.add_object(std::move(obj));
    out.emplace(id, std::move(rebuilt));
  }
  return out;
}

SceneGraph kitchen_scene() {
  SceneGraph scene("kitchen", 800, 600);
  auto add = [&](std::string id, std::string cls, std::vector<std::string> attrs,
                 BoundingBox box, std::vector<Relation> rels) {
    SceneObject o;
    o.id = std::move(id);
    o.class_name = std::move(cls);
    o.attributes = std::move(attrs);
    o.bbox = box;
    o.relations = std::move(rels);
    scene.add_object(std::move(o));
  };
  add("bowl", "bowl", {"white"}, {100, 300, 80, 50}, {{"to the left of", "cat"}, {"on", "table"}});
  add("cat", "cat", {"gray"}, {400, 250, 120, 110}, {{"on", "table"}, {"to the right of", "bowl"}});
  add("table", "table", {"wooden"}, {50, 340, 700, 200}, {});
  add("door", "door", {"white"}, {620, 20, 150, 320}, {});
  add("jar1", "jar", {}, {250, 290, 40, 60}, {{"to the left of", "door"}});
  add("jar2", "jar", {}, {300, 290, 40, 60}, {});
  add("apple1", "apple", {"red"}, {200, 320, 30, 30}, {});
  add("apple2", "apple", {"red"}, {235, 320, 30, 30}, {});
  add("apple3", "apple", {"green"}, {270, 320, 30, 30}, {});
  return scene;
}

}  // namespace foilgen::testing
