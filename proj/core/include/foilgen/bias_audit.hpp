#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "foilgen/caption_types.hpp"
#include "foilgen/dataset.hpp"

namespace foilgen {

/// Binary bag of unigrams and adjacent-token bigrams.
class BowFeaturizer {
 public:
  /// Lowercased tokens with surrounding punctuation removed.
  static std::vector<std::string> tokenize(std::string_view text);
  /// Unigrams, then bigrams joined by a space, in text order (may repeat).
  static std::vector<std::string> features_of(std::string_view text);

  /// Adds every feature of `text` to the vocabulary. Indices are assigned in
  /// first-seen order.
  void fit(std::string_view text);
  /// Sorted, duplicate-free indices of the known features of `text`.
  std::vector<std::uint32_t> transform(std::string_view text) const;

  std::size_t size() const { return names_.size(); }
  const std::string& feature_name(std::uint32_t index) const { return names_[index]; }

 private:
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::string> names_;
};

struct Example {
  std::vector<std::uint32_t> features;
  int label = 0;
  CaptionType type = CaptionType::Attribute;
};

struct ProbeHyperparams {
  double learning_rate = 0.1;
  int epochs = 30;
  std::size_t batch_size = 256;
  std::uint64_t seed = 0;
};

struct ProbeModel {
  std::vector<double> weights;
  double bias = 0.0;
  int epochs = 0;
  double learning_rate = 0.0;
  double final_loss = 0.0;
  /// Mean training loss after each epoch.
  std::vector<double> loss_history;

  double logit(const Example& x) const;
  double probability(const Example& x) const;
  int predict(const Example& x) const { return logit(x) >= 0.0 ? 1 : 0; }
};

/// Mean binary cross-entropy.
double probe_loss(const ProbeModel& model, std::span<const Example> examples);

struct ProbeGradient {
  std::vector<double> weights;
  double bias = 0.0;
};

/// Gradient of probe_loss with respect to weights and bias.
ProbeGradient probe_gradient(const ProbeModel& model, std::span<const Example> examples);

/// Mini-batch SGD with learning_rate / sqrt(epoch). Sequential and fully
/// determined by `params.seed`. Throws ValidationError unless both labels occur.
ProbeModel train_probe(std::span<const Example> examples, std::size_t num_features,
                       const ProbeHyperparams& params = {});

struct Accuracy {
  std::uint64_t n = 0;
  std::uint64_t correct = 0;
  double value() const { return n == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(n); }
};

struct ProbeEvaluation {
  Accuracy overall;
  std::map<CaptionType, Accuracy> per_type;
};

ProbeEvaluation evaluate_probe(const ProbeModel& model, std::span<const Example> examples);

/// Normalized predicate frequencies of records with `label`, read from the
/// "pred", "pred1" and "pred2" bindings.
using Histogram = std::map<std::string, double>;
Histogram relation_distribution(std::span<const DatasetRecord> records, int label);

/// Jensen-Shannon divergence in nats. Two empty histograms give 0; one empty
/// histogram gives ln 2.
double js_divergence(const Histogram& p, const Histogram& q);

struct AuditOptions {
  ProbeHyperparams probe;
  double train_fraction = 0.8;
  std::uint64_t split_seed = 0;
  std::size_t top_k = 20;
};

struct BiasReport {
  std::string regime;
  std::uint64_t train_images = 0;
  std::uint64_t heldout_images = 0;
  std::uint64_t train_captions = 0;
  std::uint64_t heldout_captions = 0;
  std::uint64_t vocabulary_size = 0;
  double train_accuracy = 0.0;
  double probe_accuracy = 0.0;
  std::map<CaptionType, Accuracy> per_type;
  Histogram positive_relations;
  Histogram negative_relations;
  double relation_js_divergence = 0.0;
  /// Largest |weight| first; positive weights point to the positive label.
  std::vector<std::pair<std::string, double>> top_features;
  ProbeHyperparams probe;
  double final_loss = 0.0;

  nlohmann::ordered_json to_json() const;
};

/// Splits by image id, fits the featurizer and probe on the training images
/// and scores the held-out ones. Throws ValidationError for empty input, a
/// single label, or fewer than two images.
BiasReport run_audit(std::span<const DatasetRecord> records, const AuditOptions& options = {});

/// Held-out accuracy (%) per caption type, one column per report.
std::string format_bias_table(const std::vector<std::pair<std::string, BiasReport>>& columns);

}  // namespace foilgen
