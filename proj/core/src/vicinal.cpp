#include "midas/vicinal.hpp"

#include <algorithm>
#include <cmath>

#include "midas/error.hpp"

namespace midas {

namespace {

constexpr std::size_t kDrawChunk = 1024;

}  // namespace

RiskEstimate summarize_losses(const std::vector<double>& losses) {
  RiskEstimate r;
  r.num_terms = losses.size();
  if (losses.empty()) return r;
  double sum = 0.0;
  for (double l : losses) sum += l;
  r.value = sum / static_cast<double>(losses.size());
  if (losses.size() > 1) {
    double ss = 0.0;
    for (double l : losses) ss += (l - r.value) * (l - r.value);
    const double sd = std::sqrt(ss / static_cast<double>(losses.size() - 1));
    r.std_error = sd / std::sqrt(static_cast<double>(losses.size()));
  }
  return r;
}

RiskEstimate empirical_risk(const Predictor& predictor, const LabeledDataset& dataset,
                            const LossFn& loss) {
  if (dataset.empty()) throw Error(ErrorKind::kEmptyDataset, "empirical risk of an empty dataset");
  std::vector<double> losses;
  losses.reserve(dataset.size());
  for (const auto& e : dataset.entries()) losses.push_back(loss(predictor(*e.clip), e.soft));
  return summarize_losses(losses);
}

RiskEstimate vicinal_risk(const Predictor& predictor, const LabeledDataset& dataset,
                          const LossFn& loss, const VicinalOptions& options) {
  if (dataset.size() < 2) {
    throw Error(ErrorKind::kInvalidInput, "vicinal risk needs at least two clips");
  }
  if (options.draws < 1) throw Error(ErrorKind::kInvalidInput, "draws must be at least 1");

  Rng rng(options.seed);
  std::vector<double> losses;
  losses.reserve(options.draws);
  for (std::size_t done = 0; done < options.draws;) {
    const std::size_t chunk = std::min(kDrawChunk, options.draws - done);
    for (const auto& s : midas_batch(dataset, chunk, options.alpha, options.label_mode,
                                     options.normalize, rng)) {
      losses.push_back(loss(predictor(s.clip), s.label));
    }
    done += chunk;
  }
  RiskEstimate r = summarize_losses(losses);
  r.seed = options.seed;
  return r;
}

VicinalParams reparameterize(double lambda, const LabelDecomposition& decomposition,
                             const SoftLabel& qj, int total_votes) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorKind::kInvalidInput, "mixing coefficient must lie in [0, 1]");
  }
  const int l = decomposition.correct_count;
  if (total_votes < 1 || l < 0 || l > total_votes || decomposition.total != total_votes) {
    throw Error(ErrorKind::kInvalidInput, "decomposition does not match the annotator count");
  }
  if (qj.size() != decomposition.wrong_mass.size()) {
    throw Error(ErrorKind::kShapeMismatch, "q_j and decomposition differ in class count");
  }
  const double s = total_votes;
  const double denom = s - lambda * l;
  if (denom == 0.0) {
    throw Error(ErrorKind::kDegenerateCase,
                "S - lambda*l vanishes (lambda = 1 with every vote correct)");
  }

  VicinalParams p;
  p.lambda_prime = lambda * l / s;
  const double wrong_weight = lambda / denom;
  const double qj_weight = s * (1.0 - lambda) / denom;
  p.virtual_label.resize(qj.size());
  for (std::size_t c = 0; c < qj.size(); ++c) {
    // wrong_mass * S recovers the summed one-hot wrong votes.
    p.virtual_label[c] = wrong_weight * (s * decomposition.wrong_mass[c]) + qj_weight * qj[c];
  }
  return p;
}

double check_vicinal_identity(double lambda, const SoftLabel& qi, const SoftLabel& qj,
                              const LabelDecomposition& decomposition, ClassId true_class,
                              int total_votes) {
  if (decomposition.true_class != true_class) {
    throw Error(ErrorKind::kInvalidInput, "decomposition was built for a different true class");
  }
  const auto rebuilt = reconstruct(decomposition);
  if (rebuilt.size() != qi.size()) {
    throw Error(ErrorKind::kShapeMismatch, "q_i and decomposition differ in class count");
  }
  for (std::size_t c = 0; c < qi.size(); ++c) {
    if (std::abs(rebuilt[c] - qi[c]) > kSimplexTolerance) {
      throw Error(ErrorKind::kInvalidInput, "decomposition is inconsistent with q_i");
    }
  }

  const VicinalParams p = reparameterize(lambda, decomposition, qj, total_votes);
  double worst = 0.0;
  for (std::size_t c = 0; c < qi.size(); ++c) {
    const double onehot = c == true_class.index ? 1.0 : 0.0;
    const double rewritten = p.lambda_prime * onehot + (1.0 - p.lambda_prime) * p.virtual_label[c];
    const double direct = lambda * qi[c] + (1.0 - lambda) * qj[c];
    worst = std::max(worst, std::abs(rewritten - direct));
  }
  return worst;
}

}  // namespace midas
