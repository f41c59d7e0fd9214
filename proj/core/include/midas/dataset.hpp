#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "midas/clip.hpp"
#include "midas/labels.hpp"

namespace midas {

struct DatasetEntry {
  std::shared_ptr<const Clip> clip;
  VoteRecord votes;
  SoftLabel soft;
  // Empty when the votes have a tied maximum; such entries only exist
  // before filter_unresolved runs.
  std::optional<ClassId> hard;
  std::optional<std::string> scenario;

  const std::string& clip_id() const { return clip->id(); }
};

/// Clips plus their vote records. Soft and hard labels are always derived
/// from the votes on insertion, so they can never drift out of sync.
class LabeledDataset {
 public:
  explicit LabeledDataset(std::vector<std::string> class_names = default_class_names(),
                          std::string provenance = {});

  void add(std::shared_ptr<const Clip> clip, VoteRecord votes,
           std::optional<std::string> scenario = std::nullopt);
  void add(const DatasetEntry& entry);

  const std::vector<DatasetEntry>& entries() const noexcept { return entries_; }
  const DatasetEntry& operator[](std::size_t i) const { return entries_[i]; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  std::size_t class_count() const noexcept { return class_names_.size(); }
  const std::vector<std::string>& class_names() const noexcept { return class_names_; }
  const std::optional<ClipShape>& clip_shape() const noexcept { return shape_; }
  const std::string& provenance() const noexcept { return provenance_; }
  void set_provenance(std::string p) { provenance_ = std::move(p); }

  bool fully_resolved() const;
  /// Throws kAmbiguousLabel if entry i has no unique most-voted class.
  ClassId hard_label(std::size_t i) const;
  std::vector<std::size_t> class_histogram() const;

  LabeledDataset subset(std::span<const std::size_t> indices) const;
  LabeledDataset empty_like() const;

 private:
  std::vector<std::string> class_names_;
  std::string provenance_;
  std::optional<ClipShape> shape_;
  std::vector<DatasetEntry> entries_;
};

LabeledDataset load_manifest(const std::filesystem::path& path);

/// Writes the manifest plus one clip binary per entry under
/// "<manifest stem>.clips/". Output is a pure function of the dataset.
void save_manifest(const LabeledDataset& dataset, const std::filesystem::path& path);

struct FilterResult {
  LabeledDataset kept;
  std::size_t removed = 0;
};

/// Drops entries without a single most-voted class, preserving order.
FilterResult filter_unresolved(const LabeledDataset& dataset);

struct SplitPair {
  LabeledDataset train;
  LabeledDataset validation;
  std::uint64_t seed = 0;
};

/// Per hard class c with n_c samples, round(ratio * n_c) go to train.
SplitPair stratified_split(const LabeledDataset& dataset, double ratio, std::uint64_t seed);

struct AmbiguityPartition {
  LabeledDataset clear;
  LabeledDataset mixed;
};

/// clear: entries with max(soft) > threshold. mixed: an equally sized
/// uniform sample of the whole dataset. With balance on, both groups are
/// resampled to the input's hard-class distribution at `group_size` entries
/// (default: the clear group's size).
AmbiguityPartition partition_by_ambiguity(const LabeledDataset& dataset, double threshold,
                                          bool balance, std::uint64_t seed,
                                          std::optional<std::size_t> group_size = std::nullopt);

/// Bucket k counts the clips whose largest vote count is k.
std::vector<std::size_t> max_vote_histogram(const LabeledDataset& dataset);
std::vector<double> histogram_percentages(std::span<const std::size_t> histogram);

/// Largest-remainder allocation of `total` slots proportionally to `weights`.
std::vector<std::size_t> proportional_allocation(std::span<const std::size_t> weights,
                                                 std::size_t total);

}  // namespace midas
