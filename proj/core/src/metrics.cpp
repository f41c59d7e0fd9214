#include "midas/metrics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "midas/error.hpp"
#include "midas/model.hpp"

namespace midas {

ConfusionMatrix::ConfusionMatrix(std::size_t class_count)
    : classes_(class_count), counts_(class_count * class_count, 0) {
  if (class_count == 0) throw Error(ErrorKind::kInvalidInput, "confusion matrix needs classes");
}

void ConfusionMatrix::add(ClassId truth, ClassId predicted) {
  if (truth.index >= classes_ || predicted.index >= classes_) {
    throw Error(ErrorKind::kInvalidInput, "class id out of range for confusion matrix");
  }
  ++counts_[truth.index * classes_ + predicted.index];
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
  if (other.classes_ != classes_) {
    throw Error(ErrorKind::kShapeMismatch, "cannot merge confusion matrices of different sizes");
  }
  for (std::size_t k = 0; k < counts_.size(); ++k) counts_[k] += other.counts_[k];
}

std::size_t ConfusionMatrix::row_sum(std::size_t truth) const {
  std::size_t s = 0;
  for (std::size_t p = 0; p < classes_; ++p) s += at(truth, p);
  return s;
}

std::size_t ConfusionMatrix::total() const {
  std::size_t s = 0;
  for (std::size_t v : counts_) s += v;
  return s;
}

std::size_t ConfusionMatrix::trace() const {
  std::size_t s = 0;
  for (std::size_t c = 0; c < classes_; ++c) s += at(c, c);
  return s;
}

std::vector<std::vector<std::size_t>> ConfusionMatrix::rows() const {
  std::vector<std::vector<std::size_t>> out(classes_);
  for (std::size_t t = 0; t < classes_; ++t) {
    out[t].assign(counts_.begin() + t * classes_, counts_.begin() + (t + 1) * classes_);
  }
  return out;
}

ConfusionMatrix confusion(std::span<const ClassId> predictions, std::span<const ClassId> truths,
                          std::size_t class_count) {
  if (predictions.size() != truths.size()) {
    throw Error(ErrorKind::kInvalidInput, "predictions and truths differ in length");
  }
  if (predictions.empty()) throw Error(ErrorKind::kEmptyDataset, "no predictions to tally");
  ConfusionMatrix cm(class_count);
  for (std::size_t k = 0; k < predictions.size(); ++k) cm.add(truths[k], predictions[k]);
  return cm;
}

std::vector<double> per_class_accuracy(const ConfusionMatrix& cm) {
  std::vector<double> acc(cm.class_count(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t c = 0; c < cm.class_count(); ++c) {
    const auto support = cm.row_sum(c);
    if (support > 0) acc[c] = static_cast<double>(cm.at(c, c)) / static_cast<double>(support);
  }
  return acc;
}

RecallSummary summarize(const ConfusionMatrix& cm) {
  const auto total = cm.total();
  if (total == 0) throw Error(ErrorKind::kEmptyDataset, "confusion matrix is empty");
  RecallSummary s;
  s.per_class = per_class_accuracy(cm);
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t c = 0; c < s.per_class.size(); ++c) {
    if (std::isnan(s.per_class[c])) {
      s.excluded_classes.push_back(c);
    } else {
      sum += s.per_class[c];
      ++used;
    }
  }
  s.uar = sum / static_cast<double>(used);
  s.war = static_cast<double>(cm.trace()) / static_cast<double>(total);
  return s;
}

double uar(const ConfusionMatrix& cm) { return summarize(cm).uar; }

double war(const ConfusionMatrix& cm) {
  const auto total = cm.total();
  if (total == 0) throw Error(ErrorKind::kEmptyDataset, "confusion matrix is empty");
  return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

double uar_std_error(const ConfusionMatrix& cm) {
  double var_sum = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < cm.class_count(); ++c) {
    const auto n = cm.row_sum(c);
    if (n == 0) continue;
    const double a = static_cast<double>(cm.at(c, c)) / static_cast<double>(n);
    var_sum += a * (1.0 - a) / static_cast<double>(n);
    ++present;
  }
  if (present == 0) throw Error(ErrorKind::kEmptyDataset, "confusion matrix is empty");
  return std::sqrt(var_sum) / static_cast<double>(present);
}

CoexistenceMatrix coexistence(const LabeledDataset& dataset) {
  if (dataset.empty()) throw Error(ErrorKind::kEmptyDataset, "coexistence of an empty dataset");
  const std::size_t c_count = dataset.class_count();
  CoexistenceMatrix m;
  m.class_count = c_count;
  m.ratios.assign(c_count * c_count, 0.0);
  m.support.assign(c_count, 0);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto row = dataset.hard_label(i).index;
    ++m.support[row];
    const auto& q = dataset[i].soft;
    for (std::size_t c = 0; c < c_count; ++c) m.ratios[row * c_count + c] += q[c];
  }
  m.present.assign(c_count, false);
  for (std::size_t r = 0; r < c_count; ++r) {
    if (m.support[r] == 0) continue;
    m.present[r] = true;
    for (std::size_t c = 0; c < c_count; ++c) m.ratios[r * c_count + c] /= static_cast<double>(m.support[r]);
  }
  return m;
}

nlohmann::ordered_json report(const Classifier& model, const LabeledDataset& dataset,
                              FeatureSize feature_size) {
  if (dataset.empty()) throw Error(ErrorKind::kEmptyDataset, "cannot evaluate on an empty dataset");
  if (model.class_count() != dataset.class_count()) {
    throw Error(ErrorKind::kDimensionMismatch, "checkpoint and dataset differ in class count");
  }
  if (dataset.clip_shape() && feature_dim(*dataset.clip_shape(), feature_size) != model.input_dim()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "checkpoint input size does not match clips of shape " + to_string(*dataset.clip_shape()));
  }
  using json = nlohmann::ordered_json;
  const auto& names = dataset.class_names();

  ConfusionMatrix cm(dataset.class_count());
  json samples = json::array();
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& e = dataset[i];
    const auto feature = featurize(*e.clip, feature_size);
    const SoftLabel posterior = forward(model, feature);
    const ClassId pred = predict(model, feature);
    const ClassId truth = dataset.hard_label(i);
    cm.add(truth, pred);
    json rec;
    rec["clip_id"] = e.clip_id();
    rec["truth"] = names[truth.index];
    rec["predicted"] = names[pred.index];
    rec["posterior"] = posterior.vector();
    rec["soft_label"] = e.soft.vector();
    samples.push_back(std::move(rec));
  }

  const RecallSummary s = summarize(cm);
  json doc;
  doc["class_names"] = names;
  doc["num_samples"] = dataset.size();
  json per_class = json::object();
  for (std::size_t c = 0; c < names.size(); ++c) {
    per_class[names[c]] = std::isnan(s.per_class[c]) ? json(nullptr) : json(s.per_class[c]);
  }
  doc["per_class_accuracy"] = std::move(per_class);
  doc["uar"] = s.uar;
  doc["war"] = s.war;
  doc["confusion"] = cm.rows();
  json warnings = json::array();
  for (auto c : s.excluded_classes) {
    warnings.push_back("class '" + names[c] + "' has no samples and is excluded from UAR");
  }
  doc["warnings"] = std::move(warnings);
  doc["samples"] = std::move(samples);
  return doc;
}

std::string confusion_csv(const ConfusionMatrix& cm, const std::vector<std::string>& class_names) {
  std::ostringstream out;
  out << "truth\\predicted";
  for (const auto& n : class_names) out << ',' << n;
  out << '\n';
  for (std::size_t t = 0; t < cm.class_count(); ++t) {
    out << class_names[t];
    for (std::size_t p = 0; p < cm.class_count(); ++p) out << ',' << cm.at(t, p);
    out << '\n';
  }
  return out.str();
}

std::string coexistence_csv(const CoexistenceMatrix& m,
                            const std::vector<std::string>& class_names) {
  std::ostringstream out;
  out.precision(6);
  out << std::fixed << "hard_label,support";
  for (const auto& n : class_names) out << ',' << n;
  out << '\n';
  for (std::size_t r = 0; r < m.class_count; ++r) {
    out << class_names[r] << ',' << m.support[r];
    for (std::size_t c = 0; c < m.class_count; ++c) {
      out << ',';
      if (m.present[r]) out << m.at(r, c);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace midas
