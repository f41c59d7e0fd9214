#include "midas/synth.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "midas/error.hpp"

namespace midas {
namespace {

SynthConfig small(double ambiguity, double tau, std::uint64_t seed = 1) {
  SynthConfig c;
  c.samples_per_class = 30;
  c.shape = ClipShape{3, 8, 8, 3};
  c.ambiguity = ambiguity;
  c.temperature = tau;
  c.seed = seed;
  return c;
}

TEST(Generate, NoAmbiguityAndColdAnnotatorsGiveUnanimousVotes) {
  std::vector<SynthSample> truths;
  const auto ds = generate(small(0.0, 0.01), &truths);
  EXPECT_EQ(ds.size(), 7u * 30u);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    EXPECT_EQ(ds[i].votes.max_count(), 10);
    EXPECT_EQ(ds[i].soft.max(), 1.0);
    EXPECT_FALSE(truths[i].ambiguous);
  }
  EXPECT_EQ(ds.class_histogram(), std::vector<std::size_t>(7, 30));
}

TEST(Generate, FullAmbiguityPushesMaxVotesBelowUnanimity) {
  const auto ds = generate(small(1.0, 1.0));
  const auto h = max_vote_histogram(ds);
  std::size_t unanimous = h.size() > 10 ? h[10] : 0;
  std::size_t below = 0;
  for (std::size_t k = 0; k < 10 && k < h.size(); ++k) below += h[k];
  // Weights in [0.3, 0.7] make unanimity rare (at most 0.7^10 ~ 2.8%).
  EXPECT_GT(below, 20 * unanimous);
  EXPECT_LT(static_cast<double>(unanimous) / ds.size(), 0.05);
}

TEST(Generate, DeterministicInSeed) {
  const auto a = generate(small(0.5, 1.0, 9));
  const auto b = generate(small(0.5, 1.0, 9));
  const auto c = generate(small(0.5, 1.0, 10));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(*a[i].clip, *b[i].clip);
    EXPECT_EQ(a[i].votes, b[i].votes);
  }
  EXPECT_NE(*a[0].clip, *c[0].clip);
}

TEST(Generate, SatisfiesDatasetInvariants) {
  std::vector<SynthSample> truths;
  const auto ds = generate(small(0.5, 1.0, 3), &truths);
  ASSERT_EQ(truths.size(), ds.size());
  EXPECT_TRUE(ds.fully_resolved());
  std::size_t ambiguous = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& e = ds[i];
    EXPECT_EQ(e.votes.total(), 10);
    EXPECT_EQ(e.soft, aggregate_votes(e.votes));
    for (float v : e.clip->data()) {
      EXPECT_GE(v, 0.0f);
      EXPECT_LE(v, 1.0f);
    }
    if (truths[i].ambiguous) {
      ++ambiguous;
      std::size_t support = 0;
      for (double p : truths[i].true_mixture.probs()) {
        support += p > 0.0;
        if (p > 0.0) {
          EXPECT_GE(p, 0.3 - 1e-12);
          EXPECT_LE(p, 0.7 + 1e-12);
        }
      }
      EXPECT_EQ(support, 2u);
    }
  }
  EXPECT_GT(ambiguous, 0u);
}

TEST(Generate, RejectsInvalidConfig) {
  auto c = small(0.5, 1.0);
  c.ambiguity = 1.5;
  EXPECT_THROW(generate(c), Error);
  c = small(0.5, 1.0);
  c.annotators = 0;
  EXPECT_THROW(generate(c), Error);
  c = small(0.5, 1.0);
  c.shape.width = 0;
  EXPECT_THROW(generate(c), Error);
  c = small(0.5, 0.0);
  EXPECT_THROW(generate(c), Error);
}

TEST(SimulateAnnotators, OneHotColdIsUnanimous) {
  Rng rng(1);
  const auto m = SoftLabel::one_hot(ClassId{4}, 7);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(simulate_annotators(m, 10, 1e-3, rng)[4], 10);
}

TEST(SimulateAnnotators, UniformCountsWithinBinomialBound) {
  Rng rng(2);
  const int s = 70000;
  const double p = 1.0 / 7.0;
  const double bound = 4.0 * std::sqrt(s * p * (1.0 - p));
  const auto v = simulate_annotators(SoftLabel::uniform(7), s, 1.0, rng);
  for (std::size_t c = 0; c < 7; ++c) EXPECT_LE(std::abs(v[c] - s * p), bound);
}

TEST(SimulateAnnotators, FrequenciesMatchTemperedDistribution) {
  Rng rng(3);
  const SoftLabel m({0.5, 0.3, 0.2, 0, 0, 0, 0});
  for (double tau : {0.5, 1.0, 2.0}) {
    const auto target = tempered_distribution(m, tau);
    const int n = 100000;
    const auto v = simulate_annotators(m, n, tau, rng);
    double tv = 0.0;
    for (std::size_t c = 0; c < 7; ++c) tv += std::abs(static_cast<double>(v[c]) / n - target[c]);
    EXPECT_LE(0.5 * tv, 0.01) << "tau " << tau;
    EXPECT_EQ(v[3] + v[4] + v[5] + v[6], 0);
  }
}

TEST(SimulateAnnotators, AggregateConvergesToMixtureAtUnitTemperature) {
  Rng rng(4);
  std::mt19937_64 g(5);
  std::exponential_distribution<double> e(1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> w(7);
    double sum = 0.0;
    for (double& x : w) sum += (x = e(g));
    for (double& x : w) x /= sum;
    const SoftLabel m(w);
    const auto q = aggregate_votes(simulate_annotators(m, 10000, 1.0, rng));
    for (std::size_t c = 0; c < 7; ++c) EXPECT_LE(std::abs(q[c] - m[c]), 0.02);
  }
}

TEST(TemperedDistribution, ClosedForm) {
  // softmax(log m / tau) = m^(1/tau) / sum m^(1/tau).
  const SoftLabel m({0.6, 0.4, 0});
  const auto t = tempered_distribution(m, 0.5);
  EXPECT_NEAR(t[0], 0.36 / 0.52, 1e-12);
  EXPECT_NEAR(t[1], 0.16 / 0.52, 1e-12);
  EXPECT_EQ(t[2], 0.0);
}

}  // namespace
}  // namespace midas
