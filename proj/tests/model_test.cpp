#include "midas/model.hpp"

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "midas/error.hpp"
#include "midas/mixer.hpp"
#include "test_support.hpp"

namespace midas {
namespace {

using testing::TempDir;

TEST(CrossEntropy, UniformPredictionAgainstOneHotIsLnC) {
  const double loss = soft_cross_entropy(SoftLabel::uniform(7), SoftLabel::one_hot(ClassId{3}, 7));
  EXPECT_NEAR(loss, 1.9459101490553132, 1e-12);
}

TEST(CrossEntropy, NeverBelowEntropy) {
  // CE(p, q) - H(q) = KL(q || p) >= 0, with equality at p = q.
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 1000; ++trial) {
    const SoftLabel p = testing::random_simplex(7, rng);
    const SoftLabel q = testing::random_simplex(7, rng);
    EXPECT_GE(soft_cross_entropy(p, q) - entropy(q), -1e-12);
    EXPECT_NEAR(soft_cross_entropy(q, q), entropy(q), 1e-12);
  }
}

TEST(CrossEntropy, FloorsZeroProbabilities) {
  const double loss = soft_cross_entropy(SoftLabel::one_hot(ClassId{0}, 3), SoftLabel::one_hot(ClassId{1}, 3));
  EXPECT_NEAR(loss, -std::log(1e-12), 1e-9);
}

TEST(Featurize, ConstantClipGivesConstantFeature) {
  const Clip c = Clip::constant("c", ClipShape{3, 10, 6, 2}, 0.3f);
  const auto f = featurize(c, FeatureSize{4, 4});
  ASSERT_EQ(f.size(), 4u * 4u * 2u);
  for (double v : f) EXPECT_NEAR(v, 0.3, 1e-7);
}

TEST(Featurize, CommutesWithMixing) {
  std::mt19937_64 g(1);
  const ClipShape s{4, 9, 7, 3};
  const auto a = testing::random_clip("a", s, g);
  const auto b = testing::random_clip("b", s, g);
  const double l = 0.3;
  const auto fm = featurize(mix_clips(*a, *b, l), FeatureSize{4, 3});
  const auto fa = featurize(*a, FeatureSize{4, 3});
  const auto fb = featurize(*b, FeatureSize{4, 3});
  for (std::size_t k = 0; k < fm.size(); ++k) EXPECT_NEAR(fm[k], l * fa[k] + (1 - l) * fb[k], 1e-6);
}

TEST(Featurize, PreservesMeanIntensity) {
  std::mt19937_64 g(2);
  const auto c = testing::random_clip("c", ClipShape{2, 7, 5, 1}, g);
  double mean = 0.0;
  for (float v : c->data()) mean += v;
  mean /= c->data().size();
  const auto f = featurize(*c, FeatureSize{3, 2});
  EXPECT_NEAR(std::accumulate(f.begin(), f.end(), 0.0) / f.size(), mean, 1e-7);
}

TEST(Featurize, RejectsOversizedTarget) {
  EXPECT_THROW(featurize(Clip::constant("c", ClipShape{1, 2, 2, 1}, 0.f), FeatureSize{4, 4}), Error);
}

TEST(Classifier, ZeroWeightsGiveUniformPosterior) {
  const Classifier m(12, {5, 4}, 7);
  std::vector<double> x(12, 0.7);
  const SoftLabel p = forward(m, x);
  for (double v : p.probs()) EXPECT_NEAR(v, 1.0 / 7.0, 1e-15);
}

TEST(Classifier, FlattenAssignRoundTrip) {
  Rng rng(3);
  auto m = Classifier::initialized(6, {4}, 3, Activation::kSigmoid, rng);
  EXPECT_EQ(m.parameter_count(), 6u * 4 + 4 + 4 * 3 + 3);
  Classifier copy(6, {4}, 3, Activation::kSigmoid);
  copy.assign(m.flatten());
  EXPECT_EQ(copy, m);
  EXPECT_THROW(copy.assign(std::vector<double>(5)), Error);
}

std::vector<LabeledFeature> random_batch(std::size_t n, std::size_t d, std::size_t c,
                                         std::mt19937_64& g) {
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<LabeledFeature> batch;
  for (std::size_t k = 0; k < n; ++k) {
    FeatureVector x(d);
    for (double& v : x) v = nd(g);
    batch.push_back({x, testing::random_simplex(c, g)});
  }
  return batch;
}

double batch_loss(const Classifier& m, const std::vector<LabeledFeature>& batch) {
  double s = 0.0;
  for (const auto& b : batch) s += soft_cross_entropy(forward(m, b.feature), b.target);
  return s / batch.size();
}

void check_finite_differences(Activation act) {
  std::mt19937_64 g(41);
  Rng rng(42);
  auto m = Classifier::initialized(5, {6, 4}, 4, act, rng);
  // Nonzero biases so they are exercised too.
  auto params = m.flatten();
  std::normal_distribution<double> nd(0.0, 0.3);
  for (double& p : params) p += nd(g);
  m.assign(params);

  const auto batch = random_batch(8, 5, 4, g);
  const auto grad = gradient(m, batch).flatten();
  ASSERT_EQ(grad.size(), params.size());

  const double h = 1e-5;
  std::uniform_int_distribution<std::size_t> pick(0, params.size() - 1);
  for (int k = 0; k < 50; ++k) {
    const std::size_t i = k < 10 ? params.size() - 1 - k : pick(g);
    auto plus = params, minus = params;
    plus[i] += h;
    minus[i] -= h;
    Classifier mp = m, mm = m;
    mp.assign(plus);
    mm.assign(minus);
    const double numeric = (batch_loss(mp, batch) - batch_loss(mm, batch)) / (2 * h);
    const double rel = std::abs(numeric - grad[i]) / std::max({std::abs(numeric), std::abs(grad[i]), 1e-8});
    EXPECT_LE(rel, 1e-4) << "parameter " << i << " analytic " << grad[i] << " numeric " << numeric;
  }
}

TEST(Gradient, MatchesFiniteDifferencesTanh) { check_finite_differences(Activation::kTanh); }
TEST(Gradient, MatchesFiniteDifferencesSigmoid) { check_finite_differences(Activation::kSigmoid); }

TEST(Gradient, BatchLossIsMeanOfSampleLosses) {
  std::mt19937_64 g(5);
  Rng rng(6);
  const auto m = Classifier::initialized(4, {3}, 5, Activation::kTanh, rng);
  const auto batch = random_batch(13, 4, 5, g);
  const auto grad = gradient(m, batch);
  ASSERT_EQ(grad.sample_losses.size(), 13u);
  double mean = 0.0;
  for (std::size_t k = 0; k < batch.size(); ++k) {
    EXPECT_NEAR(grad.sample_losses[k], soft_cross_entropy(forward(m, batch[k].feature), batch[k].target), 1e-12);
    mean += grad.sample_losses[k] / batch.size();
  }
  EXPECT_NEAR(grad.loss, mean, 1e-12);
  EXPECT_THROW(gradient(m, std::span<const LabeledFeature>{}), Error);
}

// Two classes of constant clips, dark versus bright.
LabeledDataset separable(std::size_t per_class, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<float> dark(0.0f, 0.3f), bright(0.7f, 1.0f);
  LabeledDataset ds({"Dark", "Bright"});
  for (std::size_t k = 0; k < per_class; ++k) {
    ds.add(std::make_shared<const Clip>(Clip::constant("d" + std::to_string(k), testing::tiny_shape(), dark(g))),
           VoteRecord({5, 0}));
    ds.add(std::make_shared<const Clip>(Clip::constant("b" + std::to_string(k), testing::tiny_shape(), bright(g))),
           VoteRecord({0, 5}));
  }
  return ds;
}

TrainConfig small_config(TrainMode mode) {
  TrainConfig c;
  c.mode = mode;
  c.epochs = 30;
  c.batch_size = 8;
  c.learning_rate = 0.5;
  c.hidden = {8};
  c.feature_size = FeatureSize{2, 2};
  c.seed = 3;
  return c;
}

TEST(Train, SeparableTwoClassReachesPerfectAccuracy) {
  const auto tr = separable(30, 1);
  const auto va = separable(10, 2);
  for (TrainMode mode : {TrainMode::kHard, TrainMode::kSoft, TrainMode::kMidas}) {
    auto c = small_config(mode);
    c.normalize = false;
    const auto r = train(tr, va, c);
    EXPECT_EQ(r.history[r.best_epoch - 1].val_uar, 1.0) << to_string(mode);
  }
}

TEST(Train, ZeroLearningRateLeavesLossFlat) {
  const auto tr = separable(10, 1);
  auto c = small_config(TrainMode::kSoft);
  c.learning_rate = 0.0;
  c.epochs = 5;
  const auto r = train(tr, tr, c);
  for (const auto& e : r.history) EXPECT_NEAR(e.train_loss, r.history[0].train_loss, 1e-12);
}

TEST(Train, DeterministicGivenSeed) {
  const auto tr = separable(12, 4);
  const auto va = separable(4, 5);
  const auto c = small_config(TrainMode::kMidas);
  const auto a = train(tr, va, c);
  const auto b = train(tr, va, c);
  EXPECT_EQ(a.model, b.model);
  EXPECT_EQ(a.best_epoch, b.best_epoch);
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t k = 0; k < a.history.size(); ++k) EXPECT_EQ(a.history[k].train_loss, b.history[k].train_loss);
}

TEST(Train, RejectsBadConfig) {
  const auto tr = separable(4, 1);
  auto c = small_config(TrainMode::kHard);
  c.learning_rate = -1.0;
  EXPECT_THROW(train(tr, tr, c), Error);
  c = small_config(TrainMode::kHard);
  c.epochs = 0;
  EXPECT_THROW(train(tr, tr, c), Error);
  EXPECT_THROW(train(LabeledDataset({"Dark", "Bright"}), tr, small_config(TrainMode::kHard)), Error);
}

TEST(Train, DivergenceIsReported) {
  // Identical clips with opposite labels keep the gradient away from zero.
  LabeledDataset tr({"Dark", "Bright"});
  for (int k = 0; k < 8; ++k) {
    tr.add(std::make_shared<const Clip>(Clip::constant("c" + std::to_string(k), testing::tiny_shape(), 0.5f)),
           VoteRecord(k % 2 ? std::vector<int>{1, 3} : std::vector<int>{3, 1}));
  }
  auto c = small_config(TrainMode::kHard);
  c.batch_size = 3;
  c.momentum = 0.9;
  c.learning_rate = 1e307;
  try {
    train(tr, tr, c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDivergence);
  }
}

TEST(TrainModes, ParseAndPrint) {
  EXPECT_EQ(parse_train_mode("midas-hard"), TrainMode::kMidasHard);
  EXPECT_EQ(parse_train_mode("soft"), TrainMode::kSoft);
  EXPECT_EQ(to_string(TrainMode::kMidas), "midas");
  EXPECT_THROW(parse_train_mode("mixup"), Error);
}

TEST(ConfigHash, StableAndSensitive) {
  TrainConfig a;
  TrainConfig b;
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  b.alpha = 0.4;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Checkpoint, RoundTripReproducesPredictions) {
  TempDir dir;
  const auto tr = separable(10, 7);
  const auto r = train(tr, tr, small_config(TrainMode::kSoft));
  Checkpoint ck{r.model, FeatureSize{2, 2}, 3, tr.class_names(), config_hash(small_config(TrainMode::kSoft))};
  save_checkpoint(ck, dir / "m.ckpt");
  const auto loaded = load_checkpoint(dir / "m.ckpt");
  EXPECT_EQ(loaded.model, r.model);
  EXPECT_EQ(loaded.class_names, tr.class_names());
  EXPECT_EQ(loaded.config_hash, ck.config_hash);
  EXPECT_EQ(loaded.feature_size, ck.feature_size);
  for (const auto& e : tr.entries()) {
    const auto f = featurize(*e.clip, FeatureSize{2, 2});
    EXPECT_EQ(forward(loaded.model, f), forward(r.model, f));
  }
  // Saving again gives identical bytes.
  save_checkpoint(loaded, dir / "again.ckpt");
  EXPECT_EQ(testing::read_bytes(dir / "m.ckpt"), testing::read_bytes(dir / "again.ckpt"));
}

TEST(Checkpoint, Errors) {
  TempDir dir;
  EXPECT_THROW(load_checkpoint(dir / "none.ckpt"), Error);
  std::ofstream(dir / "junk.ckpt") << "hello\n";
  try {
    load_checkpoint(dir / "junk.ckpt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMalformedRecord);
  }
}

}  // namespace
}  // namespace midas
