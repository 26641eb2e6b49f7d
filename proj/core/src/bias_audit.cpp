#include "foilgen/bias_audit.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

#include "foilgen/error.hpp"
#include "foilgen/rng.hpp"
#include "foilgen/text.hpp"

namespace foilgen {

namespace {

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// log(1 + exp(z)) without overflow.
double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

}  // namespace

std::vector<std::string> BowFeaturizer::tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  for (std::string_view raw : split_whitespace(text)) {
    std::size_t b = 0, e = raw.size();
    while (b < e && !is_word_char(raw[b])) ++b;
    while (e > b && !is_word_char(raw[e - 1])) --e;
    if (b == e) continue;
    std::string t(raw.substr(b, e - b));
    for (char& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    tokens.push_back(std::move(t));
  }
  return tokens;
}

std::vector<std::string> BowFeaturizer::features_of(std::string_view text) {
  auto tokens = tokenize(text);
  std::vector<std::string> features = tokens;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    features.push_back(tokens[i] + " " + tokens[i + 1]);
  }
  return features;
}

void BowFeaturizer::fit(std::string_view text) {
  for (auto& f : features_of(text)) {
    if (index_.contains(f)) continue;
    index_.emplace(f, static_cast<std::uint32_t>(names_.size()));
    names_.push_back(std::move(f));
  }
}

std::vector<std::uint32_t> BowFeaturizer::transform(std::string_view text) const {
  std::vector<std::uint32_t> out;
  for (const auto& f : features_of(text)) {
    if (auto it = index_.find(f); it != index_.end()) out.push_back(it->second);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double ProbeModel::logit(const Example& x) const {
  double z = bias;
  for (auto f : x.features) z += weights[f];
  return z;
}

double ProbeModel::probability(const Example& x) const { return sigmoid(logit(x)); }

double probe_loss(const ProbeModel& model, std::span<const Example> examples) {
  if (examples.empty()) return 0.0;
  double total = 0.0;
  for (const auto& x : examples) {
    const double z = model.logit(x);
    total += softplus(z) - (x.label == 1 ? z : 0.0);
  }
  return total / static_cast<double>(examples.size());
}

ProbeGradient probe_gradient(const ProbeModel& model, std::span<const Example> examples) {
  ProbeGradient g;
  g.weights.assign(model.weights.size(), 0.0);
  if (examples.empty()) return g;
  const double scale = 1.0 / static_cast<double>(examples.size());
  for (const auto& x : examples) {
    const double r = (model.probability(x) - x.label) * scale;
    for (auto f : x.features) g.weights[f] += r;
    g.bias += r;
  }
  return g;
}

ProbeModel train_probe(std::span<const Example> examples, std::size_t num_features,
                       const ProbeHyperparams& params) {
  bool has_pos = false, has_neg = false;
  for (const auto& x : examples) {
    (x.label == 1 ? has_pos : has_neg) = true;
    for (auto f : x.features) {
      if (f >= num_features) throw ValidationError("feature index out of range");
    }
  }
  if (!has_pos || !has_neg) throw ValidationError("probe training needs both labels");
  if (params.epochs < 1 || params.batch_size < 1 || !(params.learning_rate > 0.0)) {
    throw ValidationError("probe hyperparameters must be positive");
  }

  ProbeModel model;
  model.weights.assign(num_features, 0.0);
  model.epochs = params.epochs;
  model.learning_rate = params.learning_rate;

  Rng rng(derive_seed(params.seed, "probe"));
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> grad(num_features, 0.0);
  std::vector<std::uint32_t> touched;

  for (int epoch = 1; epoch <= params.epochs; ++epoch) {
    const double lr = params.learning_rate / std::sqrt(static_cast<double>(epoch));
    shuffle_in_place(std::span<std::size_t>(order), rng);
    for (std::size_t start = 0; start < order.size(); start += params.batch_size) {
      const std::size_t end = std::min(order.size(), start + params.batch_size);
      const double scale = 1.0 / static_cast<double>(end - start);
      double grad_bias = 0.0;
      for (std::size_t k = start; k < end; ++k) {
        const Example& x = examples[order[k]];
        const double r = (model.probability(x) - x.label) * scale;
        for (auto f : x.features) {
          if (grad[f] == 0.0) touched.push_back(f);
          grad[f] += r;
        }
        grad_bias += r;
      }
      for (auto f : touched) {
        model.weights[f] -= lr * grad[f];
        grad[f] = 0.0;
      }
      touched.clear();
      model.bias -= lr * grad_bias;
    }
    model.loss_history.push_back(probe_loss(model, examples));
  }
  model.final_loss = model.loss_history.back();
  return model;
}

ProbeEvaluation evaluate_probe(const ProbeModel& model, std::span<const Example> examples) {
  ProbeEvaluation e;
  for (const auto& x : examples) {
    const bool ok = model.predict(x) == x.label;
    ++e.overall.n;
    e.overall.correct += ok;
    auto& t = e.per_type[x.type];
    ++t.n;
    t.correct += ok;
  }
  return e;
}

Histogram relation_distribution(std::span<const DatasetRecord> records, int label) {
  Histogram h;
  double total = 0.0;
  for (const auto& r : records) {
    if (r.label != label) continue;
    for (const char* key : {"pred", "pred1", "pred2"}) {
      if (auto it = r.bindings.find(key); it != r.bindings.end()) {
        h[it->second] += 1.0;
        total += 1.0;
      }
    }
  }
  for (auto& [k, v] : h) v /= total;
  return h;
}

double js_divergence(const Histogram& p, const Histogram& q) {
  if (p.empty() && q.empty()) return 0.0;
  if (p.empty() || q.empty()) return std::log(2.0);
  auto mass = [](const Histogram& h) {
    double s = 0.0;
    for (const auto& [k, v] : h) s += v;
    return s;
  };
  const double sp = mass(p), sq = mass(q);
  std::set<std::string> keys;
  for (const auto& [k, v] : p) keys.insert(k);
  for (const auto& [k, v] : q) keys.insert(k);
  double js = 0.0;
  for (const auto& k : keys) {
    auto ip = p.find(k);
    auto iq = q.find(k);
    const double a = ip == p.end() ? 0.0 : ip->second / sp;
    const double b = iq == q.end() ? 0.0 : iq->second / sq;
    const double m = 0.5 * (a + b);
    if (a > 0) js += 0.5 * a * std::log(a / m);
    if (b > 0) js += 0.5 * b * std::log(b / m);
  }
  return std::clamp(js, 0.0, std::log(2.0));
}

nlohmann::ordered_json BiasReport::to_json() const {
  nlohmann::ordered_json j;
  j["probe"] = "bag-of-ngrams logistic regression (text-only proxy)";
  j["regime"] = regime;
  j["train_images"] = train_images;
  j["heldout_images"] = heldout_images;
  j["train_captions"] = train_captions;
  j["heldout_captions"] = heldout_captions;
  j["vocabulary_size"] = vocabulary_size;
  j["train_accuracy"] = train_accuracy;
  j["probe_accuracy"] = probe_accuracy;
  nlohmann::ordered_json types = nlohmann::ordered_json::object();
  for (const auto& [type, acc] : per_type) {
    types[std::string(to_string(type))] = {{"captions", acc.n}, {"accuracy", acc.value()}};
  }
  j["per_type_accuracy"] = std::move(types);
  j["relation_js_divergence"] = relation_js_divergence;
  auto hist = [](const Histogram& h) {
    nlohmann::ordered_json o = nlohmann::ordered_json::object();
    for (const auto& [k, v] : h) o[k] = v;
    return o;
  };
  j["positive_relations"] = hist(positive_relations);
  j["negative_relations"] = hist(negative_relations);
  nlohmann::ordered_json top = nlohmann::ordered_json::array();
  for (const auto& [name, w] : top_features) top.push_back({{"feature", name}, {"weight", w}});
  j["top_features"] = std::move(top);
  j["hyperparameters"] = {{"learning_rate", probe.learning_rate},
                          {"epochs", probe.epochs},
                          {"batch_size", probe.batch_size},
                          {"seed", probe.seed}};
  j["final_loss"] = final_loss;
  return j;
}

BiasReport run_audit(std::span<const DatasetRecord> records, const AuditOptions& options) {
  if (records.empty()) throw ValidationError("audit needs a non-empty dataset");
  std::set<int> labels;
  std::set<std::string> image_set;
  std::set<std::string> regimes;
  for (const auto& r : records) {
    labels.insert(r.label);
    image_set.insert(r.image_id);
    regimes.insert(r.regime);
  }
  if (labels.size() < 2) throw ValidationError("audit needs both positive and negative captions");
  if (image_set.size() < 2) throw ValidationError("audit needs captions from at least two images");

  std::vector<std::string> images(image_set.begin(), image_set.end());
  Rng rng(derive_seed(options.split_seed, "audit-split"));
  shuffle_in_place(std::span<std::string>(images), rng);
  auto n_train = static_cast<std::size_t>(
      std::llround(options.train_fraction * static_cast<double>(images.size())));
  n_train = std::clamp<std::size_t>(n_train, 1, images.size() - 1);
  const std::set<std::string> train_images(images.begin(), images.begin() + n_train);

  BowFeaturizer featurizer;
  for (const auto& r : records) {
    if (train_images.contains(r.image_id)) featurizer.fit(r.text);
  }
  std::vector<Example> train, heldout;
  for (const auto& r : records) {
    Example x{featurizer.transform(r.text), r.label, r.caption_type};
    (train_images.contains(r.image_id) ? train : heldout).push_back(std::move(x));
  }

  BiasReport report;
  for (const auto& r : regimes) {
    if (!report.regime.empty()) report.regime += ",";
    report.regime += r;
  }
  report.train_images = n_train;
  report.heldout_images = images.size() - n_train;
  report.train_captions = train.size();
  report.heldout_captions = heldout.size();
  report.vocabulary_size = featurizer.size();
  report.probe = options.probe;

  // A training split with one label can happen on tiny inputs; the probe then
  // has nothing to learn and is scored as a constant predictor.
  ProbeModel model;
  bool train_pos = false, train_neg = false;
  for (const auto& x : train) (x.label == 1 ? train_pos : train_neg) = true;
  if (train_pos && train_neg) {
    model = train_probe(train, featurizer.size(), options.probe);
  } else {
    model.weights.assign(featurizer.size(), 0.0);
    model.bias = train_pos ? 1.0 : -1.0;
  }
  report.final_loss = model.final_loss;
  report.train_accuracy = evaluate_probe(model, train).overall.value();
  const auto eval = evaluate_probe(model, heldout);
  report.probe_accuracy = eval.overall.value();
  report.per_type = eval.per_type;

  report.positive_relations = relation_distribution(records, 1);
  report.negative_relations = relation_distribution(records, 0);
  report.relation_js_divergence =
      js_divergence(report.positive_relations, report.negative_relations);

  std::vector<std::uint32_t> idx(featurizer.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
    const double wa = std::abs(model.weights[a]), wb = std::abs(model.weights[b]);
    if (wa != wb) return wa > wb;
    return featurizer.feature_name(a) < featurizer.feature_name(b);
  });
  for (std::size_t i = 0; i < std::min(options.top_k, idx.size()); ++i) {
    report.top_features.emplace_back(featurizer.feature_name(idx[i]), model.weights[idx[i]]);
  }
  return report;
}

std::string format_bias_table(const std::vector<std::pair<std::string, BiasReport>>& columns) {
  std::ostringstream out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-24s", "caption type");
  out << buf;
  for (const auto& [name, r] : columns) {
    std::snprintf(buf, sizeof buf, " %14s", name.c_str());
    out << buf;
  }
  out << '\n';
  for (CaptionType t : kAllCaptionTypes) {
    std::snprintf(buf, sizeof buf, "%-24s", std::string(to_string(t)).c_str());
    out << buf;
    for (const auto& [name, r] : columns) {
      auto it = r.per_type.find(t);
      if (it == r.per_type.end() || it->second.n == 0) {
        std::snprintf(buf, sizeof buf, " %14s", "-");
      } else {
        std::snprintf(buf, sizeof buf, " %14.1f", 100.0 * it->second.value());
      }
      out << buf;
    }
    out << '\n';
  }
  std::snprintf(buf, sizeof buf, "%-24s", "all");
  out << buf;
  for (const auto& [name, r] : columns) {
    std::snprintf(buf, sizeof buf, " %14.1f", 100.0 * r.probe_accuracy);
    out << buf;
  }
  out << '\n';
  return out.str();
}

}  // namespace foilgen
