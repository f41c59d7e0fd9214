#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "midas/dataset.hpp"
#include "midas/labels.hpp"

namespace midas {

class Classifier;
struct FeatureSize;

/// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t class_count = kDefaultClassCount);

  std::size_t class_count() const noexcept { return classes_; }
  std::size_t at(std::size_t truth, std::size_t predicted) const {
    return counts_[truth * classes_ + predicted];
  }
  void add(ClassId truth, ClassId predicted);
  void merge(const ConfusionMatrix& other);

  std::size_t row_sum(std::size_t truth) const;
  std::size_t total() const;
  std::size_t trace() const;
  std::vector<std::vector<std::size_t>> rows() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t classes_;
  std::vector<std::size_t> counts_;
};

ConfusionMatrix confusion(std::span<const ClassId> predictions, std::span<const ClassId> truths,
                          std::size_t class_count);

/// counts[c][c] / rowsum[c]; NaN for classes with no samples.
std::vector<double> per_class_accuracy(const ConfusionMatrix& cm);
/// Mean of per-class accuracies over classes that have samples.
double uar(const ConfusionMatrix& cm);
/// trace / total.
double war(const ConfusionMatrix& cm);
/// Binomial standard error of the UAR: sqrt(sum_c a_c (1 - a_c) / n_c) / K
/// over the K classes with samples.
double uar_std_error(const ConfusionMatrix& cm);

struct RecallSummary {
  std::vector<double> per_class;
  double uar = 0.0;
  double war = 0.0;
  std::vector<std::size_t> excluded_classes;  // absent from the evaluated split
};

RecallSummary summarize(const ConfusionMatrix& cm);

struct CoexistenceMatrix {
  std::size_t class_count = 0;
  std::vector<double> ratios;      // row-major C x C
  std::vector<std::size_t> support;
  std::vector<bool> present;       // false: no sample of that hard class

  double at(std::size_t row, std::size_t col) const { return ratios[row * class_count + col]; }
};

/// Row c is the mean soft label over samples whose hard label is c.
CoexistenceMatrix coexistence(const LabeledDataset& dataset);

/// Per-class accuracy, UAR, WAR, the confusion matrix, and one
/// posterior-vs-soft-label record per sample.
nlohmann::ordered_json report(const Classifier& model, const LabeledDataset& dataset,
                              FeatureSize feature_size);

std::string confusion_csv(const ConfusionMatrix& cm, const std::vector<std::string>& class_names);
std::string coexistence_csv(const CoexistenceMatrix& m,
                            const std::vector<std::string>& class_names);

}  // namespace midas
