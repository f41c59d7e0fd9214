#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace midas {

inline constexpr std::size_t kDefaultClassCount = 7;

// Canonical class order. Every vector, file and report uses this order.
inline constexpr std::array<std::string_view, kDefaultClassCount> kEmotionNames = {
    "Happy", "Sad", "Neutral", "Angry", "Surprise", "Disgust", "Fear"};

std::vector<std::string> default_class_names();

struct ClassId {
  std::size_t index = 0;

  friend auto operator<=>(const ClassId&, const ClassId&) = default;
};

namespace emotion {
inline constexpr ClassId kHappy{0};
inline constexpr ClassId kSad{1};
inline constexpr ClassId kNeutral{2};
inline constexpr ClassId kAngry{3};
inline constexpr ClassId kSurprise{4};
inline constexpr ClassId kDisgust{5};
inline constexpr ClassId kFear{6};
}  // namespace emotion

inline constexpr double kSimplexTolerance = 1e-9;

/// A probability vector over C classes: nonnegative, summing to one within
/// kSimplexTolerance. Construction validates; the stored vector is never
/// re-normalized behind the caller's back.
class SoftLabel {
 public:
  SoftLabel() = default;
  explicit SoftLabel(std::vector<double> probs);

  static SoftLabel one_hot(ClassId cls, std::size_t class_count);
  static SoftLabel uniform(std::size_t class_count);

  std::span<const double> probs() const noexcept { return probs_; }
  const std::vector<double>& vector() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t c) const { return probs_[c]; }
  double max() const;

  friend bool operator==(const SoftLabel&, const SoftLabel&) = default;

 private:
  std::vector<double> probs_;
};

/// Per-class vote tallies for one clip.
class VoteRecord {
 public:
  VoteRecord() = default;
  explicit VoteRecord(std::vector<int> counts);

  std::span<const int> counts() const noexcept { return counts_; }
  const std::vector<int>& vector() const noexcept { return counts_; }
  std::size_t size() const noexcept { return counts_.size(); }
  int operator[](std::size_t c) const { return counts_[c]; }
  int total() const noexcept { return total_; }
  int max_count() const;
  bool has_unique_max() const;

  friend bool operator==(const VoteRecord&, const VoteRecord&) = default;

 private:
  std::vector<int> counts_;
  int total_ = 0;
};

/// q = (l/S) e_true + wrong_mass, where l counts the votes for the true class
/// and wrong_mass carries the remaining votes divided by S.
struct LabelDecomposition {
  int correct_count = 0;
  int total = 0;
  ClassId true_class;
  std::vector<double> wrong_mass;
};

SoftLabel aggregate_votes(const VoteRecord& votes);

/// Argmax of a soft label; throws kAmbiguousLabel on a tied maximum.
ClassId hard_label_of(const SoftLabel& soft);

/// exp(v - max v) / sum, so large inputs cannot overflow.
SoftLabel renormalize_softmax(std::span<const double> logits);

LabelDecomposition decompose(const SoftLabel& soft, const VoteRecord& votes, ClassId true_class);

/// (l/S) e_true + wrong_mass, used to check decompositions.
std::vector<double> reconstruct(const LabelDecomposition& d);

}  // namespace midas
