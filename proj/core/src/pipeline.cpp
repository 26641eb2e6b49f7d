#include "foilgen/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_set>

#include "foilgen/error.hpp"
#include "foilgen/version.hpp"

namespace foilgen {

SplitAssignment SplitAssignment::from_manifests(
    const std::map<std::string, std::filesystem::path>& files) {
  SplitAssignment s;
  for (const auto& [split, path] : files) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open split manifest " + path.string());
    std::string line;
    while (std::getline(in, line)) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      const auto last = line.find_last_not_of(" \t\r");
      s.assign(line.substr(first, last - first + 1), split);
    }
  }
  return s;
}

void SplitAssignment::assign(const std::string& image_id, const std::string& split) {
  auto [it, inserted] = by_image_.emplace(image_id, split);
  if (!inserted && it->second != split) {
    throw ConfigError("image " + image_id + " is listed in splits " + it->second + " and " + split);
  }
}

std::optional<std::string> SplitAssignment::split_of(const std::string& image_id) const {
  if (by_image_.empty()) return default_;
  auto it = by_image_.find(image_id);
  if (it == by_image_.end()) return std::nullopt;
  return it->second;
}

nlohmann::ordered_json PipelineResult::to_json() const {
  nlohmann::ordered_json j;
  j["generation"] = generation.to_json();
  j["parse"] = parse.to_json();
  j["balance"] = balance.to_json();
  j["unassigned_images"] = unassigned_images;
  j["unknown_class_objects"] = unknown_class_objects;
  return j;
}

namespace {

struct BalanceAccumulator {
  std::map<std::string, BalanceReport::Tally> quantifiers;
  std::map<std::string, BalanceReport::Tally> polarities;

  void add(const std::vector<CaptionPair>& pairs) {
    BalanceReport r = verify_balance(pairs);
    for (const auto& [k, t] : r.quantifiers) {
      quantifiers[k].positive += t.positive;
      quantifiers[k].negative += t.negative;
    }
    for (const auto& [k, t] : r.polarities) {
      polarities[k].positive += t.positive;
      polarities[k].negative += t.negative;
    }
  }

  BalanceReport finish() const {
    BalanceReport r;
    r.quantifiers = quantifiers;
    r.polarities = polarities;
    for (const auto* m : {&quantifiers, &polarities}) {
      for (const auto& [k, t] : *m) {
        r.max_delta = std::max(r.max_delta, t.positive > t.negative ? t.positive - t.negative
                                                                    : t.negative - t.positive);
      }
    }
    r.balanced = r.max_delta == 0;
    return r;
  }
};

class BatchRunner {
 public:
  BatchRunner(const GenerationContext& context, const SplitAssignment& splits, std::ostream& out,
              const PipelineOptions& options, PipelineResult& result)
      : context_(context), splits_(splits), out_(out), options_(options), result_(result) {
    const auto& hist = context.index.tables().class_count_hist;
    for (const auto& [cls, counts] : hist) known_classes_.insert(cls);
    stamp_.regime = context.config.regime.name();
    stamp_.generator_version = std::string(library_version());
    stamp_.seed = context.config.global_seed;
  }

  void add(SceneGraph&& scene) {
    auto split = splits_.split_of(scene.image_id());
    if (!split) {
      ++result_.unassigned_images;
      return;
    }
    batch_.push_back(std::move(scene));
    batch_splits_.push_back(std::move(*split));
    if (batch_.size() >= std::max<std::size_t>(options_.batch_size, 1)) flush();
  }

  void flush() {
    if (batch_.empty()) return;
    std::vector<ImageGeneration> results(batch_.size());
    const unsigned workers =
        std::max(1u, std::min<unsigned>(options_.workers, static_cast<unsigned>(batch_.size())));
    if (workers == 1) {
      for (std::size_t i = 0; i < batch_.size(); ++i) {
        results[i] = generate_for_image(batch_[i], context_);
      }
    } else {
      std::atomic<std::size_t> next{0};
      std::exception_ptr failure;
      std::mutex failure_mutex;
      auto work = [&] {
        try {
          for (std::size_t i = next++; i < batch_.size(); i = next++) {
            results[i] = generate_for_image(batch_[i], context_);
          }
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      };
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
      pool.clear();
      if (failure) std::rethrow_exception(failure);
    }

    for (std::size_t i = 0; i < batch_.size(); ++i) {
      for (const auto& obj : batch_[i].objects()) {
        if (!known_classes_.contains(obj.class_name)) ++result_.unknown_class_objects;
      }
      result_.generation.merge(results[i].report);
      balance_.add(results[i].pairs);
      stamp_.split = batch_splits_[i];
      for (const auto& pair : results[i].pairs) {
        for (const auto& record : records_for_pair(pair, stamp_)) {
          out_ << serialize_record(record) << '\n';
          stats_.add(record);
        }
      }
    }
    if (!out_) throw Error("failed writing dataset output");
    batch_.clear();
    batch_splits_.clear();
  }

  void finish() {
    flush();
    result_.stats = stats_.finish();
    result_.balance = balance_.finish();
  }

 private:
  const GenerationContext& context_;
  const SplitAssignment& splits_;
  std::ostream& out_;
  const PipelineOptions& options_;
  PipelineResult& result_;
  RecordStamp stamp_;
  std::unordered_set<std::string> known_classes_;
  std::vector<SceneGraph> batch_;
  std::vector<std::string> batch_splits_;
  StatsAccumulator stats_;
  BalanceAccumulator balance_;
};

}  // namespace

PipelineResult run_generation(std::istream& scenes, const GenerationContext& context,
                              const SplitAssignment& splits, std::ostream& out,
                              const PipelineOptions& options) {
  PipelineResult result;
  BatchRunner runner(context, splits, out, options, result);
  std::set<std::string> seen;
  for_each_scene_graph(
      scenes,
      [&](SceneGraph&& scene) {
        if (!seen.insert(scene.image_id()).second) {
          ++result.parse.duplicate_images;
          result.parse.warn("duplicate image id " + scene.image_id() + " ignored");
          return;
        }
        runner.add(std::move(scene));
      },
      result.parse);
  runner.finish();
  return result;
}

}  // namespace foilgen
