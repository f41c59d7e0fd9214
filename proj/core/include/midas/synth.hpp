#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "midas/clip.hpp"
#include "midas/dataset.hpp"
#include "midas/labels.hpp"
#include "midas/rng.hpp"

namespace midas {

/// Knobs for the synthetic ambiguous-expression generator.
struct SynthConfig {
  std::size_t class_count = kDefaultClassCount;
  std::size_t samples_per_class = 200;
  ClipShape shape{6, 16, 16, 3};
  double between_sd = 0.08;  // prototype pixel spread around 0.5
  double within_sd = 0.5;    // per-sample pixel noise
  double drift = 0.1;        // temporal drift amplitude of each prototype
  double ambiguity = 0.5;    // fraction of samples drawn as two-class mixtures
  int annotators = 10;
  double temperature = 1.0;
  std::uint64_t seed = 0;
};

void validate(const SynthConfig& config);

/// softmax(log(mixture) / tau); zero components stay zero.
std::vector<double> tempered_distribution(const SoftLabel& mixture, double tau);

/// S independent categorical votes from the tempered mixture.
VoteRecord simulate_annotators(const SoftLabel& true_mixture, int annotators, double tau, Rng& rng);

struct SynthSample {
  SoftLabel true_mixture;
  bool ambiguous = false;
};

/// Generates prototypes, samples, and votes, then removes tied records.
/// When `truths` is non-null it receives the latent mixture of every
/// retained entry, aligned with the returned dataset.
LabeledDataset generate(const SynthConfig& config, std::vector<SynthSample>* truths = nullptr);

}  // namespace midas
