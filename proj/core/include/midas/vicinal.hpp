#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "midas/dataset.hpp"
#include "midas/labels.hpp"
#include "midas/mixer.hpp"
#include "midas/rng.hpp"

namespace midas {

using Predictor = std::function<SoftLabel(const Clip&)>;
using LossFn = std::function<double(const SoftLabel& prediction, const SoftLabel& target)>;

struct RiskEstimate {
  double value = 0.0;
  std::size_t num_terms = 0;
  double std_error = 0.0;
  std::uint64_t seed = 0;
};

/// Mean and standard error (sample sd / sqrt(M)) of a sequence of losses.
RiskEstimate summarize_losses(const std::vector<double>& losses);

/// (1/M) sum_i loss(f(x_i), q_i) over the stored soft labels.
RiskEstimate empirical_risk(const Predictor& predictor, const LabeledDataset& dataset,
                            const LossFn& loss);

struct VicinalOptions {
  double alpha = kDefaultAlpha;
  std::size_t draws = 10000;
  LabelMode label_mode = LabelMode::kSoft;
  // The vicinity distribution itself has no softmax; training does.
  bool normalize = false;
  std::uint64_t seed = 0;
};

/// Monte-Carlo estimate of the mixed-sample risk: the mean loss over
/// `draws` samples from midas_batch.
RiskEstimate vicinal_risk(const Predictor& predictor, const LabeledDataset& dataset,
                          const LossFn& loss, const VicinalOptions& options);

struct VicinalParams {
  double lambda_prime = 0.0;
  std::vector<double> virtual_label;
};

/// Rewrites lambda q_i + (1 - lambda) q_j as
/// lambda' e_true + (1 - lambda') y'_j with lambda' = lambda l / S.
/// Throws kDegenerateCase when S - lambda l == 0.
VicinalParams reparameterize(double lambda, const LabelDecomposition& decomposition,
                             const SoftLabel& qj, int total_votes);

/// Max-abs residual between the reparameterized mixture and the direct one.
double check_vicinal_identity(double lambda, const SoftLabel& qi, const SoftLabel& qj,
                              const LabelDecomposition& decomposition, ClassId true_class,
                              int total_votes);

}  // namespace midas
