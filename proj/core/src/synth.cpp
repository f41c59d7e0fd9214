#include "midas/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "midas/error.hpp"

namespace midas {

namespace {

float clamp01(double v) { return static_cast<float>(std::clamp(v, 0.0, 1.0)); }

// One prototype per class: a random base image plus a linear drift in time.
std::vector<std::vector<double>> make_prototypes(const SynthConfig& cfg) {
  Rng rng = substream(cfg.seed, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const ClipShape& s = cfg.shape;
  std::vector<std::vector<double>> protos(cfg.class_count);
  for (auto& p : protos) {
    std::vector<double> base(s.frame_size());
    std::vector<double> direction(s.frame_size());
    for (double& v : base) v = 0.5 + cfg.between_sd * normal(rng);
    for (double& v : direction) v = cfg.drift * normal(rng);
    p.resize(s.element_count());
    for (std::size_t t = 0; t < s.frames; ++t) {
      const double phase = s.frames > 1 ? static_cast<double>(t) / (s.frames - 1) - 0.5 : 0.0;
      for (std::size_t k = 0; k < base.size(); ++k) {
        p[t * base.size() + k] = base[k] + phase * direction[k];
      }
    }
  }
  return protos;
}

}  // namespace

void validate(const SynthConfig& c) {
  if (c.class_count < 2) throw Error(ErrorKind::kInvalidInput, "synth needs at least two classes");
  if (c.samples_per_class == 0) throw Error(ErrorKind::kInvalidInput, "samples per class must be positive");
  if (c.shape.frames == 0 || c.shape.height == 0 || c.shape.width == 0 || c.shape.channels == 0) {
    throw Error(ErrorKind::kInvalidInput, "synth clip dimensions must be positive");
  }
  if (!(c.ambiguity >= 0.0 && c.ambiguity <= 1.0)) {
    throw Error(ErrorKind::kInvalidInput, "ambiguity fraction must lie in [0, 1]");
  }
  if (c.annotators < 1) throw Error(ErrorKind::kInvalidInput, "need at least one annotator");
  if (!(c.temperature > 0.0)) throw Error(ErrorKind::kInvalidInput, "temperature must be positive");
  if (c.between_sd < 0.0 || c.within_sd < 0.0 || c.drift < 0.0) {
    throw Error(ErrorKind::kInvalidInput, "noise scales must be nonnegative");
  }
}

std::vector<double> tempered_distribution(const SoftLabel& mixture, double tau) {
  if (!(tau > 0.0)) throw Error(ErrorKind::kInvalidInput, "temperature must be positive");
  const auto m = mixture.probs();
  double top = -std::numeric_limits<double>::infinity();
  for (double p : m) {
    if (p > 0.0) top = std::max(top, std::log(p));
  }
  std::vector<double> out(m.size(), 0.0);
  double sum = 0.0;
  for (std::size_t c = 0; c < m.size(); ++c) {
    if (m[c] > 0.0) {
      out[c] = std::exp((std::log(m[c]) - top) / tau);
      sum += out[c];
    }
  }
  for (double& v : out) v /= sum;
  return out;
}

VoteRecord simulate_annotators(const SoftLabel& true_mixture, int annotators, double tau, Rng& rng) {
  if (annotators < 1) throw Error(ErrorKind::kInvalidInput, "need at least one annotator");
  const auto p = tempered_distribution(true_mixture, tau);
  std::discrete_distribution<std::size_t> pick(p.begin(), p.end());
  std::vector<int> counts(p.size(), 0);
  for (int s = 0; s < annotators; ++s) ++counts[pick(rng)];
  return VoteRecord(std::move(counts));
}

LabeledDataset generate(const SynthConfig& cfg, std::vector<SynthSample>* truths) {
  validate(cfg);
  const auto protos = make_prototypes(cfg);
  const ClipShape& s = cfg.shape;
  const auto n_ambiguous =
      static_cast<std::size_t>(std::lround(cfg.ambiguity * static_cast<double>(cfg.samples_per_class)));

  char provenance[160];
  std::snprintf(provenance, sizeof(provenance),
                "synth seed=%llu ambiguity=%g annotators=%d temperature=%g",
                static_cast<unsigned long long>(cfg.seed), cfg.ambiguity, cfg.annotators,
                cfg.temperature);
  std::vector<std::string> names;
  if (cfg.class_count == kDefaultClassCount) {
    names = default_class_names();
  } else {
    for (std::size_t c = 0; c < cfg.class_count; ++c) names.push_back("class" + std::to_string(c));
  }
  LabeledDataset raw(std::move(names), provenance);
  std::vector<SynthSample> raw_truths;

  std::size_t serial = 0;
  for (std::size_t c = 0; c < cfg.class_count; ++c) {
    for (std::size_t k = 0; k < cfg.samples_per_class; ++k, ++serial) {
      // Independent stream per sample, so any sample can be regenerated alone.
      Rng rng = substream(cfg.seed, serial + 1);
      std::normal_distribution<double> noise(0.0, 1.0);
      const bool ambiguous = k < n_ambiguous;

      std::vector<double> mixture(cfg.class_count, 0.0);
      std::size_t other = c;
      double weight = 1.0;
      if (ambiguous) {
        other = uniform_index(rng, cfg.class_count - 1);
        if (other >= c) ++other;
        weight = std::uniform_real_distribution<double>(0.3, 0.7)(rng);
        mixture[other] = 1.0 - weight;
      }
      mixture[c] += weight;

      std::vector<float> pixels(s.element_count());
      for (std::size_t e = 0; e < pixels.size(); ++e) {
        const double v = weight * protos[c][e] + (1.0 - weight) * protos[other][e];
        pixels[e] = clamp01(v + cfg.within_sd * noise(rng));
      }
      SoftLabel truth(mixture);
      auto votes = simulate_annotators(truth, cfg.annotators, cfg.temperature, rng);

      char id[48];
      std::snprintf(id, sizeof(id), "synth_%zu_%05zu", c, k);
      raw.add(std::make_shared<const Clip>(id, s, std::move(pixels)), std::move(votes));
      raw_truths.push_back(SynthSample{std::move(truth), ambiguous});
    }
  }

  if (truths) {
    truths->clear();
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i].hard) truths->push_back(raw_truths[i]);
    }
  }
  return filter_unresolved(raw).kept;
}

}  // namespace midas
