#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "midas/clip.hpp"
#include "midas/dataset.hpp"
#include "midas/labels.hpp"
#include "midas/rng.hpp"

namespace midas {

inline constexpr double kDefaultAlpha = 0.8;

enum class LabelMode { kSoft, kHard };

std::string_view to_string(LabelMode mode);
LabelMode parse_label_mode(std::string_view text);

struct MixCoefficient {
  double lambda = 0.5;
  double alpha = kDefaultAlpha;
};

/// lambda ~ Beta(alpha, alpha), built from two Gamma(alpha, 1) draws.
MixCoefficient sample_lambda(double alpha, Rng& rng);

/// Frame-wise lambda * a + (1 - lambda) * b. Shapes must match exactly.
Clip mix_clips(const Clip& a, const Clip& b, double lambda, std::string clip_id = {});

/// lambda * qa + (1 - lambda) * qb, optionally pushed through a softmax.
SoftLabel mix_labels(const SoftLabel& qa, const SoftLabel& qb, double lambda, bool normalize);

/// Training target for one entry under the given label mode.
SoftLabel target_label(const LabeledDataset& dataset, std::size_t index, LabelMode mode);

struct MixPair {
  std::size_t index_i = 0;
  std::size_t index_j = 0;
  double lambda = 0.5;
};

/// Pairing plan: shuffle the indices, pair position k with position
/// (k + 1 + offset) mod n, re-shuffling every n pairs. A pair whose two
/// entries share a clip_id (duplicates after oversampling) has its partner
/// redrawn. One lambda per pair.
std::vector<MixPair> draw_mix_pairs(const LabeledDataset& dataset, std::size_t count, double alpha,
                                    Rng& rng);

struct MixSample {
  Clip clip;
  SoftLabel label;
  double lambda = 0.5;
  std::string source_i;
  std::string source_j;
  std::size_t index_i = 0;
  std::size_t index_j = 0;
  LabelMode label_mode = LabelMode::kSoft;
  bool normalized = true;
};

std::vector<MixSample> midas_batch(const LabeledDataset& dataset, std::size_t batch_size,
                                   double alpha, LabelMode label_mode, bool normalize, Rng& rng);

}  // namespace midas
