#include "midas/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <optional>
#include <random>

#include "midas/error.hpp"
#include "midas/hash.hpp"
#include "midas/metrics.hpp"
#include "midas/mixer.hpp"

namespace midas {

namespace {

// weights[o][i] = fraction of output cell o covered by source cell i.
std::vector<double> area_weights(std::size_t src, std::size_t dst) {
  std::vector<double> w(dst * src, 0.0);
  const double scale = static_cast<double>(src) / static_cast<double>(dst);
  for (std::size_t o = 0; o < dst; ++o) {
    const double lo = o * scale;
    const double hi = (o + 1) * scale;
    for (auto i = static_cast<std::size_t>(std::floor(lo)); i < src && i < hi; ++i) {
      const double overlap = std::min<double>(hi, i + 1.0) - std::max<double>(lo, i);
      if (overlap > 0.0) w[o * src + i] = overlap / scale;
    }
  }
  return w;
}

double activate(Activation a, double z) {
  return a == Activation::kTanh ? std::tanh(z) : 1.0 / (1.0 + std::exp(-z));
}

// Derivative expressed through the activation output.
double activate_grad(Activation a, double y) {
  return a == Activation::kTanh ? 1.0 - y * y : y * (1.0 - y);
}

void softmax_inplace(std::vector<double>& v) {
  const double top = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double& x : v) {
    x = std::exp(x - top);
    sum += x;
  }
  for (double& x : v) x /= sum;
}

double cross_entropy_raw(std::span<const double> pred, std::span<const double> target) {
  double loss = 0.0;
  for (std::size_t c = 0; c < pred.size(); ++c) {
    if (target[c] != 0.0) loss -= target[c] * std::log(std::max(pred[c], kProbabilityFloor));
  }
  return loss;
}

void check_feature(const Classifier& model, std::span<const double> feature) {
  if (feature.size() != model.input_dim()) {
    throw Error(ErrorKind::kShapeMismatch, "feature length " + std::to_string(feature.size()) +
                                               " does not match classifier input " +
                                               std::to_string(model.input_dim()));
  }
}

// Forward pass keeping every layer's output; the last entry holds softmax
// probabilities.
std::vector<std::vector<double>> forward_trace(const Classifier& model,
                                               std::span<const double> feature) {
  const auto& layers = model.layers();
  std::vector<std::vector<double>> acts;
  acts.reserve(layers.size() + 1);
  acts.emplace_back(feature.begin(), feature.end());
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& layer = layers[l];
    const auto& in = acts.back();
    std::vector<double> out(layer.outputs);
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      const double* row = layer.weights.data() + o * layer.inputs;
      double z = layer.bias[o];
      for (std::size_t i = 0; i < layer.inputs; ++i) z += row[i] * in[i];
      out[o] = z;
    }
    if (l + 1 < layers.size()) {
      for (double& z : out) z = activate(model.activation(), z);
    } else {
      softmax_inplace(out);
    }
    acts.push_back(std::move(out));
  }
  return acts;
}

std::vector<DenseLayer> zero_like(const Classifier& model) {
  std::vector<DenseLayer> g;
  for (const auto& layer : model.layers()) g.emplace_back(layer.inputs, layer.outputs);
  return g;
}

// Adds scale * d(loss)/d(params) for one sample into grads; returns the loss.
double backprop_sample(const Classifier& model, const LabeledFeature& sample, double scale,
                       std::vector<DenseLayer>& grads) {
  check_feature(model, sample.feature);
  if (sample.target.size() != model.class_count()) {
    throw Error(ErrorKind::kShapeMismatch, "target length does not match class count");
  }
  const auto acts = forward_trace(model, sample.feature);
  const auto& probs = acts.back();
  const auto target = sample.target.probs();
  const double loss = cross_entropy_raw(probs, target);

  const double target_mass = std::accumulate(target.begin(), target.end(), 0.0);
  std::vector<double> delta(probs.size());
  for (std::size_t c = 0; c < probs.size(); ++c) delta[c] = scale * (probs[c] * target_mass - target[c]);

  const auto& layers = model.layers();
  for (std::size_t l = layers.size(); l-- > 0;) {
    const auto& layer = layers[l];
    auto& g = grads[l];
    const auto& in = acts[l];
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      double* grow = g.weights.data() + o * layer.inputs;
      for (std::size_t i = 0; i < layer.inputs; ++i) grow[i] += delta[o] * in[i];
      g.bias[o] += delta[o];
    }
    if (l == 0) break;
    std::vector<double> prev(layer.inputs, 0.0);
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      const double* row = layer.weights.data() + o * layer.inputs;
      for (std::size_t i = 0; i < layer.inputs; ++i) prev[i] += row[i] * delta[o];
    }
    for (std::size_t i = 0; i < prev.size(); ++i) prev[i] *= activate_grad(model.activation(), in[i]);
    delta = std::move(prev);
  }
  return loss;
}

std::vector<FeatureVector> featurize_all(const LabeledDataset& ds, FeatureSize size) {
  std::vector<FeatureVector> out;
  out.reserve(ds.size());
  for (const auto& e : ds.entries()) out.push_back(featurize(*e.clip, size));
  return out;
}

struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;  // 1 / sd, or 1 for constant features

  static Standardizer fit(const std::vector<FeatureVector>& xs) {
    const std::size_t d = xs.front().size();
    Standardizer z{std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
    for (const auto& x : xs) {
      for (std::size_t k = 0; k < d; ++k) z.mean[k] += x[k];
    }
    for (double& m : z.mean) m /= static_cast<double>(xs.size());
    std::vector<double> var(d, 0.0);
    for (const auto& x : xs) {
      for (std::size_t k = 0; k < d; ++k) var[k] += (x[k] - z.mean[k]) * (x[k] - z.mean[k]);
    }
    for (std::size_t k = 0; k < d; ++k) {
      const double sd = std::sqrt(var[k] / static_cast<double>(xs.size()));
      if (sd > 1e-12) z.scale[k] = 1.0 / sd;
    }
    return z;
  }

  void apply(std::vector<FeatureVector>& xs) const {
    for (auto& x : xs) {
      for (std::size_t k = 0; k < x.size(); ++k) x[k] = (x[k] - mean[k]) * scale[k];
    }
  }

  // Rewrites the first layer so the model accepts raw features:
  // W (s * (x - m)) + b = (W diag(s)) x + (b - W diag(s) m).
  void fold_into(Classifier& model) const {
    DenseLayer& first = model.layers().front();
    for (std::size_t o = 0; o < first.outputs; ++o) {
      double shift = 0.0;
      for (std::size_t i = 0; i < first.inputs; ++i) {
        first.w(o, i) *= scale[i];
        shift += first.w(o, i) * mean[i];
      }
      first.bias[o] -= shift;
    }
  }
};

}  // namespace

// ---------------------------------------------------------------------------

std::size_t feature_dim(const ClipShape& shape, FeatureSize target) {
  return static_cast<std::size_t>(target.height) * target.width * shape.channels;
}

FeatureVector featurize(const Clip& clip, FeatureSize target) {
  const ClipShape& s = clip.shape();
  if (target.height == 0 || target.width == 0) {
    throw Error(ErrorKind::kInvalidInput, "feature size must be positive");
  }
  if (target.height > s.height || target.width > s.width) {
    throw Error(ErrorKind::kInvalidInput, "feature size exceeds clip size " + to_string(s));
  }
  const std::size_t plane = s.frame_size();
  std::vector<double> mean(plane, 0.0);
  for (std::size_t t = 0; t < s.frames; ++t) {
    const auto f = clip.frame(t);
    for (std::size_t k = 0; k < plane; ++k) mean[k] += f[k];
  }
  for (double& v : mean) v /= s.frames;

  const auto wy = area_weights(s.height, target.height);
  const auto wx = area_weights(s.width, target.width);
  const std::size_t ch = s.channels;

  // Rows first: (target.height x W x Ch), then columns.
  std::vector<double> rows(target.height * s.width * ch, 0.0);
  for (std::size_t oy = 0; oy < target.height; ++oy) {
    for (std::size_t y = 0; y < s.height; ++y) {
      const double w = wy[oy * s.height + y];
      if (w == 0.0) continue;
      for (std::size_t k = 0; k < s.width * ch; ++k) rows[oy * s.width * ch + k] += w * mean[y * s.width * ch + k];
    }
  }
  FeatureVector out(feature_dim(s, target), 0.0);
  for (std::size_t oy = 0; oy < target.height; ++oy) {
    for (std::size_t ox = 0; ox < target.width; ++ox) {
      for (std::size_t x = 0; x < s.width; ++x) {
        const double w = wx[ox * s.width + x];
        if (w == 0.0) continue;
        for (std::size_t c = 0; c < ch; ++c) {
          out[(oy * target.width + ox) * ch + c] += w * rows[(oy * s.width + x) * ch + c];
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Activation a) { return a == Activation::kTanh ? "tanh" : "sigmoid"; }

Activation parse_activation(std::string_view text) {
  if (text == "tanh") return Activation::kTanh;
  if (text == "sigmoid") return Activation::kSigmoid;
  throw Error(ErrorKind::kInvalidInput, "unknown activation '" + std::string(text) + "'");
}

Classifier::Classifier(std::size_t input_dim, std::vector<std::size_t> hidden,
                       std::size_t class_count, Activation activation)
    : input_dim_(input_dim), class_count_(class_count), activation_(activation) {
  if (input_dim == 0 || class_count == 0) {
    throw Error(ErrorKind::kInvalidInput, "classifier dimensions must be positive");
  }
  std::size_t in = input_dim;
  for (std::size_t h : hidden) {
    if (h == 0) throw Error(ErrorKind::kInvalidInput, "hidden layer width must be positive");
    layers_.emplace_back(in, h);
    in = h;
  }
  layers_.emplace_back(in, class_count);
}

Classifier Classifier::initialized(std::size_t input_dim, std::vector<std::size_t> hidden,
                                   std::size_t class_count, Activation activation, Rng& rng) {
  Classifier m(input_dim, std::move(hidden), class_count, activation);
  for (auto& layer : m.layers_) {
    const double a = std::sqrt(6.0 / static_cast<double>(layer.inputs + layer.outputs));
    std::uniform_real_distribution<double> dist(-a, a);
    for (double& w : layer.weights) w = dist(rng);
  }
  return m;
}

std::vector<double> Classifier::logits(std::span<const double> feature) const {
  check_feature(*this, feature);
  std::vector<double> h(feature.begin(), feature.end());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& layer = layers_[l];
    std::vector<double> out(layer.outputs);
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      double z = layer.bias[o];
      for (std::size_t i = 0; i < layer.inputs; ++i) z += layer.w(o, i) * h[i];
      out[o] = l + 1 < layers_.size() ? activate(activation_, z) : z;
    }
    h = std::move(out);
  }
  return h;
}

std::size_t Classifier::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.weights.size() + l.bias.size();
  return n;
}

std::vector<double> Classifier::flatten() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for (const auto& l : layers_) {
    out.insert(out.end(), l.weights.begin(), l.weights.end());
    out.insert(out.end(), l.bias.begin(), l.bias.end());
  }
  return out;
}

void Classifier::assign(std::span<const double> params) {
  if (params.size() != parameter_count()) {
    throw Error(ErrorKind::kShapeMismatch, "parameter count mismatch");
  }
  std::size_t k = 0;
  for (auto& l : layers_) {
    for (double& w : l.weights) w = params[k++];
    for (double& b : l.bias) b = params[k++];
  }
}

void Classifier::round_to_float() {
  for (auto& l : layers_) {
    for (double& w : l.weights) w = static_cast<float>(w);
    for (double& b : l.bias) b = static_cast<float>(b);
  }
}

SoftLabel forward(const Classifier& model, std::span<const double> feature) {
  return renormalize_softmax(model.logits(feature));
}

ClassId predict(const Classifier& model, std::span<const double> feature) {
  const auto z = model.logits(feature);
  return ClassId{static_cast<std::size_t>(std::max_element(z.begin(), z.end()) - z.begin())};
}

double soft_cross_entropy(const SoftLabel& pred, const SoftLabel& target) {
  if (pred.size() != target.size()) {
    throw Error(ErrorKind::kShapeMismatch, "prediction and target differ in class count");
  }
  return cross_entropy_raw(pred.probs(), target.probs());
}

double entropy(const SoftLabel& q) {
  double h = 0.0;
  for (double p : q.probs()) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

std::vector<double> Gradient::flatten() const {
  std::vector<double> out;
  for (const auto& l : layers) {
    out.insert(out.end(), l.weights.begin(), l.weights.end());
    out.insert(out.end(), l.bias.begin(), l.bias.end());
  }
  return out;
}

Gradient gradient(const Classifier& model, std::span<const LabeledFeature> batch) {
  if (batch.empty()) throw Error(ErrorKind::kInvalidInput, "gradient of an empty batch");
  Gradient g;
  g.layers = zero_like(model);
  g.sample_losses.reserve(batch.size());
  const double scale = 1.0 / static_cast<double>(batch.size());
  double sum = 0.0;
  for (const auto& sample : batch) {
    const double l = backprop_sample(model, sample, scale, g.layers);
    g.sample_losses.push_back(l);
    sum += l;
  }
  g.loss = sum * scale;
  return g;
}

// ---------------------------------------------------------------------------

std::string_view to_string(TrainMode m) {
  switch (m) {
    case TrainMode::kHard: return "hard";
    case TrainMode::kSoft: return "soft";
    case TrainMode::kMidas: return "midas";
    case TrainMode::kMidasHard: return "midas-hard";
  }
  return "unknown";
}

TrainMode parse_train_mode(std::string_view text) {
  if (text == "hard") return TrainMode::kHard;
  if (text == "soft") return TrainMode::kSoft;
  if (text == "midas") return TrainMode::kMidas;
  if (text == "midas-hard" || text == "midas_hard") return TrainMode::kMidasHard;
  throw Error(ErrorKind::kInvalidInput, "unknown label mode '" + std::string(text) + "'");
}

nlohmann::ordered_json to_json(const TrainConfig& c) {
  nlohmann::ordered_json j;
  j["epochs"] = c.epochs;
  j["batch_size"] = c.batch_size;
  j["learning_rate"] = c.learning_rate;
  j["momentum"] = c.momentum;
  j["weight_decay"] = c.weight_decay;
  j["alpha"] = c.alpha;
  j["labels"] = to_string(c.mode);
  j["normalize"] = c.normalize;
  j["seed"] = c.seed;
  j["hidden"] = c.hidden;
  j["activation"] = to_string(c.activation);
  j["feature_size"] = {c.feature_size.height, c.feature_size.width};
  j["standardize"] = c.standardize;
  return j;
}

std::string config_hash(const TrainConfig& config) {
  return hex16(fnv1a64(to_json(config).dump()));
}

TrainResult train(const LabeledDataset& train_set, const LabeledDataset& validation,
                  const TrainConfig& config) {
  if (train_set.empty()) throw Error(ErrorKind::kEmptyDataset, "training set is empty");
  if (validation.empty()) throw Error(ErrorKind::kEmptyDataset, "validation set is empty");
  if (config.epochs == 0 || config.batch_size == 0) {
    throw Error(ErrorKind::kInvalidInput, "epochs and batch size must be positive");
  }
  if (!(config.learning_rate >= 0.0) || !std::isfinite(config.learning_rate)) {
    throw Error(ErrorKind::kInvalidInput, "learning rate must be a finite nonnegative number");
  }
  const bool mixing = config.mode == TrainMode::kMidas || config.mode == TrainMode::kMidasHard;
  if (mixing && train_set.size() < 2) {
    throw Error(ErrorKind::kInvalidInput, "mixing modes need at least two training clips");
  }
  if (train_set.class_count() != validation.class_count() ||
      train_set.clip_shape() != validation.clip_shape()) {
    throw Error(ErrorKind::kDimensionMismatch, "train and validation sets are incompatible");
  }

  const std::size_t n = train_set.size();
  const std::size_t classes = train_set.class_count();
  auto features = featurize_all(train_set, config.feature_size);
  auto val_features = featurize_all(validation, config.feature_size);
  std::optional<Standardizer> standardizer;
  if (config.standardize) {
    standardizer = Standardizer::fit(features);
    standardizer->apply(features);
    standardizer->apply(val_features);
  }
  std::vector<ClassId> val_truth(validation.size());
  for (std::size_t i = 0; i < validation.size(); ++i) val_truth[i] = validation.hard_label(i);

  const LabelMode label_mode =
      config.mode == TrainMode::kMidasHard || config.mode == TrainMode::kHard ? LabelMode::kHard
                                                                                : LabelMode::kSoft;
  std::vector<SoftLabel> targets;
  targets.reserve(n);
  for (std::size_t i = 0; i < n; ++i) targets.push_back(target_label(train_set, i, label_mode));

  Rng rng(config.seed);
  Classifier model = Classifier::initialized(features.front().size(), config.hidden, classes,
                                             config.activation, rng);
  std::vector<double> velocity(model.parameter_count(), 0.0);

  TrainResult result;
  double best_uar = -1.0;
  std::vector<LabeledFeature> samples(n);
  std::vector<std::size_t> order(n);
  std::vector<double> epoch_losses(n);

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    if (mixing) {
      const auto pairs = draw_mix_pairs(train_set, n, config.alpha, rng);
      for (std::size_t k = 0; k < n; ++k) {
        const auto& p = pairs[k];
        const auto& fa = features[p.index_i];
        const auto& fb = features[p.index_j];
        FeatureVector f(fa.size());
        for (std::size_t d = 0; d < f.size(); ++d) f[d] = p.lambda * fa[d] + (1.0 - p.lambda) * fb[d];
        samples[k] = LabeledFeature{std::move(f),
                                    mix_labels(targets[p.index_i], targets[p.index_j], p.lambda,
                                               config.normalize)};
      }
    } else {
      for (std::size_t k = 0; k < n; ++k) samples[k] = LabeledFeature{features[k], targets[k]};
    }

    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t stop = std::min(n, start + config.batch_size);
      std::vector<LabeledFeature> batch;
      batch.reserve(stop - start);
      for (std::size_t k = start; k < stop; ++k) batch.push_back(samples[order[k]]);
      const Gradient g = gradient(model, batch);
      if (!std::isfinite(g.loss)) {
        throw Error(ErrorKind::kDivergence, "non-finite training loss at epoch " +
                                                std::to_string(epoch) + ", batch starting at " +
                                                std::to_string(start) +
                                                "; lower the learning rate");
      }
      for (std::size_t k = start; k < stop; ++k) epoch_losses[order[k]] = g.sample_losses[k - start];

      auto params = model.flatten();
      const auto grad = g.flatten();
      for (std::size_t p = 0; p < params.size(); ++p) {
        const double step = grad[p] + config.weight_decay * params[p];
        velocity[p] = config.momentum * velocity[p] + step;
        params[p] -= config.learning_rate * velocity[p];
        if (!std::isfinite(params[p])) {
          throw Error(ErrorKind::kDivergence, "parameters overflowed at epoch " +
                                                  std::to_string(epoch) + "; lower the learning rate");
        }
      }
      model.assign(params);
    }

    // Summed in sample order so the value does not depend on the shuffle.
    double loss_sum = 0.0;
    for (double l : epoch_losses) loss_sum += l;

    std::vector<ClassId> preds(validation.size());
    for (std::size_t i = 0; i < validation.size(); ++i) preds[i] = predict(model, val_features[i]);
    const auto cm = confusion(preds, val_truth, classes);
    EpochRecord rec{epoch, loss_sum / static_cast<double>(n), uar(cm), war(cm)};
    result.history.push_back(rec);
    if (rec.val_uar > best_uar) {
      best_uar = rec.val_uar;
      result.best_epoch = epoch;
      result.model = model;
    }
  }
  if (standardizer) standardizer->fold_into(result.model);
  result.model.round_to_float();
  return result;
}

nlohmann::ordered_json history_to_json(const TrainResult& result) {
  nlohmann::ordered_json j;
  j["best_epoch"] = result.best_epoch;
  j["epochs"] = nlohmann::ordered_json::array();
  for (const auto& r : result.history) {
    j["epochs"].push_back(
        {{"epoch", r.epoch}, {"train_loss", r.train_loss}, {"val_uar", r.val_uar}, {"val_war", r.val_war}});
  }
  return j;
}

// ---------------------------------------------------------------------------

void save_checkpoint(const Checkpoint& ck, const std::filesystem::path& path) {
  nlohmann::ordered_json header;
  header["format"] = "midas-checkpoint";
  header["version"] = 1;
  header["input_dim"] = ck.model.input_dim();
  header["class_count"] = ck.model.class_count();
  header["activation"] = to_string(ck.model.activation());
  header["layers"] = nlohmann::ordered_json::array();
  for (const auto& l : ck.model.layers()) header["layers"].push_back({l.inputs, l.outputs});
  header["feature_size"] = {ck.feature_size.height, ck.feature_size.width};
  header["channels"] = ck.channels;
  header["class_names"] = ck.class_names;
  header["config_hash"] = ck.config_hash;
  header["parameter_count"] = ck.model.parameter_count();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot open " + path.string() + " for writing");
  out << header.dump() << '\n';
  for (double p : ck.model.flatten()) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(p));
    const char bytes[4] = {static_cast<char>(bits & 0xff), static_cast<char>((bits >> 8) & 0xff),
                           static_cast<char>((bits >> 16) & 0xff),
                           static_cast<char>((bits >> 24) & 0xff)};
    out.write(bytes, 4);
  }
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kMissingFile, "cannot open checkpoint " + path.string());
  std::string line;
  std::getline(in, line);
  Checkpoint ck;
  std::size_t count = 0;
  try {
    const auto header = nlohmann::json::parse(line);
    if (header.at("format") != "midas-checkpoint" || header.at("version") != 1) {
      throw Error(ErrorKind::kMalformedRecord, path.string() + " is not a midas checkpoint");
    }
    std::vector<std::size_t> hidden;
    const auto layers = header.at("layers");
    for (std::size_t l = 0; l + 1 < layers.size(); ++l) hidden.push_back(layers[l].at(1).get<std::size_t>());
    ck.model = Classifier(header.at("input_dim").get<std::size_t>(), hidden,
                          header.at("class_count").get<std::size_t>(),
                          parse_activation(header.at("activation").get<std::string>()));
    ck.feature_size = FeatureSize{header.at("feature_size").at(0).get<std::uint32_t>(),
                                  header.at("feature_size").at(1).get<std::uint32_t>()};
    ck.channels = header.at("channels").get<std::uint32_t>();
    ck.class_names = header.at("class_names").get<std::vector<std::string>>();
    ck.config_hash = header.at("config_hash").get<std::string>();
    count = header.at("parameter_count").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kMalformedRecord, "checkpoint header: " + std::string(e.what()));
  }
  if (count != ck.model.parameter_count()) {
    throw Error(ErrorKind::kMalformedRecord, "checkpoint parameter count disagrees with layers");
  }
  std::vector<unsigned char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (raw.size() != 4 * count) {
    throw Error(ErrorKind::kMalformedRecord, "checkpoint parameter block has the wrong length");
  }
  std::vector<double> params(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::uint32_t bits = raw[4 * k] | (raw[4 * k + 1] << 8) | (raw[4 * k + 2] << 16) |
                               (static_cast<std::uint32_t>(raw[4 * k + 3]) << 24);
    params[k] = std::bit_cast<float>(bits);
  }
  ck.model.assign(params);
  return ck;
}

}  // namespace midas
