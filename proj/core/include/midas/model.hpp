#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "midas/clip.hpp"
#include "midas/dataset.hpp"
#include "midas/labels.hpp"
#include "midas/rng.hpp"

namespace midas {

// ---------------------------------------------------------------------------
// Featurization
// ---------------------------------------------------------------------------

struct FeatureSize {
  std::uint32_t height = 8;
  std::uint32_t width = 8;

  friend bool operator==(const FeatureSize&, const FeatureSize&) = default;
};

using FeatureVector = std::vector<double>;

/// Temporal mean, then exact area-weighted downsampling to height x width,
/// flattened channel-last. Linear in the clip, so mixing clips and then
/// featurizing equals featurizing and then mixing.
FeatureVector featurize(const Clip& clip, FeatureSize target);

std::size_t feature_dim(const ClipShape& shape, FeatureSize target);

// ---------------------------------------------------------------------------
// Classifier
// ---------------------------------------------------------------------------

enum class Activation { kTanh, kSigmoid };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view text);

/// y = W x + b with W stored row-major (outputs x inputs).
struct DenseLayer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  DenseLayer() = default;
  DenseLayer(std::size_t in, std::size_t out)
      : inputs(in), outputs(out), weights(in * out, 0.0), bias(out, 0.0) {}

  double& w(std::size_t o, std::size_t i) { return weights[o * inputs + i]; }
  double w(std::size_t o, std::size_t i) const { return weights[o * inputs + i]; }

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

/// Perceptron D -> hidden... -> C with a softmax output. Zero hidden layers
/// gives multinomial logistic regression.
class Classifier {
 public:
  Classifier() = default;
  Classifier(std::size_t input_dim, std::vector<std::size_t> hidden, std::size_t class_count,
             Activation activation = Activation::kTanh);

  /// Glorot-uniform weights, zero biases.
  static Classifier initialized(std::size_t input_dim, std::vector<std::size_t> hidden,
                                std::size_t class_count, Activation activation, Rng& rng);

  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t class_count() const noexcept { return class_count_; }
  Activation activation() const noexcept { return activation_; }
  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
  std::vector<DenseLayer>& layers() noexcept { return layers_; }

  std::vector<double> logits(std::span<const double> feature) const;

  std::size_t parameter_count() const;
  std::vector<double> flatten() const;
  void assign(std::span<const double> params);
  /// Rounds every parameter to the nearest float32 so a checkpoint
  /// round trip reproduces the model exactly.
  void round_to_float();

  friend bool operator==(const Classifier&, const Classifier&) = default;

 private:
  std::size_t input_dim_ = 0;
  std::size_t class_count_ = 0;
  Activation activation_ = Activation::kTanh;
  std::vector<DenseLayer> layers_;
};

SoftLabel forward(const Classifier& model, std::span<const double> feature);
ClassId predict(const Classifier& model, std::span<const double> feature);

inline constexpr double kProbabilityFloor = 1e-12;

/// -sum_c target[c] * ln(max(pred[c], 1e-12)).
double soft_cross_entropy(const SoftLabel& pred, const SoftLabel& target);
double entropy(const SoftLabel& q);

struct LabeledFeature {
  FeatureVector feature;
  SoftLabel target;
};

struct Gradient {
  std::vector<DenseLayer> layers;  // same shapes as the classifier
  double loss = 0.0;               // mean soft cross-entropy of the batch
  std::vector<double> sample_losses;

  std::vector<double> flatten() const;
};

/// Exact gradient of the mean soft cross-entropy over the batch.
Gradient gradient(const Classifier& model, std::span<const LabeledFeature> batch);

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

enum class TrainMode { kHard, kSoft, kMidas, kMidasHard };

std::string_view to_string(TrainMode m);
TrainMode parse_train_mode(std::string_view text);

struct TrainConfig {
  std::size_t epochs = 100;
  std::size_t batch_size = 64;
  double learning_rate = 0.05;
  double momentum = 0.9;
  double weight_decay = 0.0;
  double alpha = 0.8;
  TrainMode mode = TrainMode::kMidas;
  bool normalize = true;
  std::uint64_t seed = 0;
  std::vector<std::size_t> hidden = {64, 64};
  Activation activation = Activation::kTanh;
  FeatureSize feature_size;
  // Train on features standardized with train-split statistics; the
  // transform is folded into the first layer of the returned model.
  bool standardize = true;
};

nlohmann::ordered_json to_json(const TrainConfig& config);
/// FNV-1a over the canonical JSON form of the config, as 16 hex digits.
std::string config_hash(const TrainConfig& config);

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_uar = 0.0;
  double val_war = 0.0;
};

struct TrainResult {
  Classifier model;
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
};

/// SGD on the train split; after each epoch the validation UAR is measured
/// and the parameters of the best epoch (earliest on ties) are returned,
/// rounded to float32. The returned model always takes raw features.
TrainResult train(const LabeledDataset& train_set, const LabeledDataset& validation,
                  const TrainConfig& config);

nlohmann::ordered_json history_to_json(const TrainResult& result);

// ---------------------------------------------------------------------------
// Checkpoints: one line of JSON header, then the parameters as
// little-endian float32 in layer order (weights row-major, then bias).
// ---------------------------------------------------------------------------

struct Checkpoint {
  Classifier model;
  FeatureSize feature_size;
  std::uint32_t channels = 0;
  std::vector<std::string> class_names;
  std::string config_hash;
};

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace midas
