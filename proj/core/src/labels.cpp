#include "midas/labels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "midas/error.hpp"

namespace midas {

std::vector<std::string> default_class_names() {
  return {kEmotionNames.begin(), kEmotionNames.end()};
}

SoftLabel::SoftLabel(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw Error(ErrorKind::kInvalidInput, "soft label must have at least one class");
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0) {
      throw Error(ErrorKind::kInvalidInput, "soft label component is negative or non-finite");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "soft label sums to " << sum << ", expected 1";
    throw Error(ErrorKind::kInvalidInput, msg.str());
  }
}

SoftLabel SoftLabel::one_hot(ClassId cls, std::size_t class_count) {
  if (cls.index >= class_count) {
    throw Error(ErrorKind::kInvalidInput, "class id out of range");
  }
  std::vector<double> p(class_count, 0.0);
  p[cls.index] = 1.0;
  return SoftLabel(std::move(p));
}

SoftLabel SoftLabel::uniform(std::size_t class_count) {
  return SoftLabel(std::vector<double>(class_count, 1.0 / static_cast<double>(class_count)));
}

double SoftLabel::max() const { return *std::max_element(probs_.begin(), probs_.end()); }

VoteRecord::VoteRecord(std::vector<int> counts) : counts_(std::move(counts)) {
  if (counts_.empty()) {
    throw Error(ErrorKind::kInvalidInput, "vote record must have at least one class");
  }
  for (int c : counts_) {
    if (c < 0) throw Error(ErrorKind::kInvalidInput, "negative vote count");
  }
  total_ = std::accumulate(counts_.begin(), counts_.end(), 0);
}

int VoteRecord::max_count() const { return *std::max_element(counts_.begin(), counts_.end()); }

bool VoteRecord::has_unique_max() const {
  const int top = max_count();
  return std::count(counts_.begin(), counts_.end(), top) == 1;
}

SoftLabel aggregate_votes(const VoteRecord& votes) {
  if (votes.total() < 1) {
    throw Error(ErrorKind::kInvalidInput, "vote record has zero total votes");
  }
  const double total = votes.total();
  std::vector<double> p(votes.size());
  for (std::size_t c = 0; c < p.size(); ++c) p[c] = votes[c] / total;
  return SoftLabel(std::move(p));
}

ClassId hard_label_of(const SoftLabel& soft) {
  const auto probs = soft.probs();
  const auto top = std::max_element(probs.begin(), probs.end());
  if (std::count(probs.begin(), probs.end(), *top) != 1) {
    throw Error(ErrorKind::kAmbiguousLabel, "soft label has no unique maximum");
  }
  return ClassId{static_cast<std::size_t>(top - probs.begin())};
}

SoftLabel renormalize_softmax(std::span<const double> logits) {
  if (logits.empty()) throw Error(ErrorKind::kInvalidInput, "softmax of empty vector");
  for (double v : logits) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kInvalidInput, "softmax input is non-finite");
  }
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) {
    p[c] = std::exp(logits[c] - top);
    sum += p[c];
  }
  for (double& v : p) v /= sum;
  return SoftLabel(std::move(p));
}

LabelDecomposition decompose(const SoftLabel& soft, const VoteRecord& votes, ClassId true_class) {
  if (soft.size() != votes.size()) {
    throw Error(ErrorKind::kInvalidInput, "soft label and vote record differ in class count");
  }
  if (true_class.index >= votes.size()) {
    throw Error(ErrorKind::kInvalidInput, "true class out of range");
  }
  const SoftLabel expected = aggregate_votes(votes);
  for (std::size_t c = 0; c < soft.size(); ++c) {
    if (std::abs(expected[c] - soft[c]) > kSimplexTolerance) {
      throw Error(ErrorKind::kInvalidInput, "soft label is not the average of the given votes");
    }
  }
  LabelDecomposition d;
  d.correct_count = votes[true_class.index];
  d.total = votes.total();
  d.true_class = true_class;
  d.wrong_mass.assign(votes.size(), 0.0);
  const double total = votes.total();
  for (std::size_t c = 0; c < votes.size(); ++c) {
    if (c != true_class.index) d.wrong_mass[c] = votes[c] / total;
  }
  return d;
}

std::vector<double> reconstruct(const LabelDecomposition& d) {
  std::vector<double> q = d.wrong_mass;
  q[d.true_class.index] += static_cast<double>(d.correct_count) / d.total;
  return q;
}

}  // namespace midas
