#include "midas/mixer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "midas/error.hpp"

namespace midas {

std::string_view to_string(LabelMode mode) {
  return mode == LabelMode::kSoft ? "soft" : "hard";
}

LabelMode parse_label_mode(std::string_view text) {
  if (text == "soft") return LabelMode::kSoft;
  if (text == "hard") return LabelMode::kHard;
  throw Error(ErrorKind::kInvalidInput, "unknown label mode '" + std::string(text) + "'");
}

MixCoefficient sample_lambda(double alpha, Rng& rng) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::kInvalidInput, "beta parameter alpha must be positive");
  }
  std::gamma_distribution<double> gamma(alpha, 1.0);
  for (;;) {
    const double x = gamma(rng);
    const double y = gamma(rng);
    // Both draws can underflow to zero for very small alpha.
    if (x + y > 0.0) return MixCoefficient{x / (x + y), alpha};
  }
}

Clip mix_clips(const Clip& a, const Clip& b, double lambda, std::string clip_id) {
  if (a.shape() != b.shape()) {
    throw Error(ErrorKind::kShapeMismatch, "cannot mix clip '" + a.id() + "' (" +
                                               to_string(a.shape()) + ") with '" + b.id() + "' (" +
                                               to_string(b.shape()) + ")");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorKind::kInvalidInput, "mixing coefficient must lie in [0, 1]");
  }
  const auto xa = a.data();
  const auto xb = b.data();
  std::vector<float> out(xa.size());
  const double mu = 1.0 - lambda;
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = static_cast<float>(lambda * xa[k] + mu * xb[k]);
  }
  if (clip_id.empty()) clip_id = a.id() + "+" + b.id();
  return Clip(std::move(clip_id), a.shape(), std::move(out));
}

SoftLabel mix_labels(const SoftLabel& qa, const SoftLabel& qb, double lambda, bool normalize) {
  if (qa.size() != qb.size()) {
    throw Error(ErrorKind::kShapeMismatch, "cannot mix labels of different class counts");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorKind::kInvalidInput, "mixing coefficient must lie in [0, 1]");
  }
  std::vector<double> raw(qa.size());
  for (std::size_t c = 0; c < raw.size(); ++c) raw[c] = lambda * qa[c] + (1.0 - lambda) * qb[c];
  if (normalize) return renormalize_softmax(raw);
  return SoftLabel(std::move(raw));
}

SoftLabel target_label(const LabeledDataset& dataset, std::size_t index, LabelMode mode) {
  if (mode == LabelMode::kHard) {
    return SoftLabel::one_hot(dataset.hard_label(index), dataset.class_count());
  }
  return dataset[index].soft;
}

std::vector<MixPair> draw_mix_pairs(const LabeledDataset& dataset, std::size_t count, double alpha,
                                    Rng& rng) {
  const std::size_t n = dataset.size();
  if (n < 2) throw Error(ErrorKind::kInvalidInput, "mixing needs at least two clips");
  if (count == 0) throw Error(ErrorKind::kInvalidInput, "batch size must be positive");

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t offset = 0;

  std::vector<MixPair> pairs;
  pairs.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t pos = k % n;
    if (pos == 0) {
      std::shuffle(perm.begin(), perm.end(), rng);
      offset = uniform_index(rng, n - 1);
    }
    const std::size_t i = perm[pos];
    std::size_t j = perm[(pos + 1 + offset) % n];
    if (dataset[i].clip_id() == dataset[j].clip_id()) {
      std::vector<std::size_t> others;
      for (std::size_t m = 0; m < n; ++m) {
        if (dataset[m].clip_id() != dataset[i].clip_id()) others.push_back(m);
      }
      if (others.empty()) {
        throw Error(ErrorKind::kInvalidInput,
                    "every entry shares clip '" + dataset[i].clip_id() + "'; nothing to mix");
      }
      j = others[uniform_index(rng, others.size())];
    }
    pairs.push_back(MixPair{i, j, sample_lambda(alpha, rng).lambda});
  }
  return pairs;
}

std::vector<MixSample> midas_batch(const LabeledDataset& dataset, std::size_t batch_size,
                                   double alpha, LabelMode label_mode, bool normalize, Rng& rng) {
  const auto pairs = draw_mix_pairs(dataset, batch_size, alpha, rng);
  std::vector<MixSample> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    const auto& a = dataset[p.index_i];
    const auto& b = dataset[p.index_j];
    MixSample s;
    s.clip = mix_clips(*a.clip, *b.clip, p.lambda);
    s.label = mix_labels(target_label(dataset, p.index_i, label_mode),
                         target_label(dataset, p.index_j, label_mode), p.lambda, normalize);
    s.lambda = p.lambda;
    s.source_i = a.clip_id();
    s.source_j = b.clip_id();
    s.index_i = p.index_i;
    s.index_j = p.index_j;
    s.label_mode = label_mode;
    s.normalized = normalize;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace midas
