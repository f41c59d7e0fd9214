#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "midas/mixer.hpp"
#include "midas/model.hpp"
#include "midas/synth.hpp"

namespace {

midas::Clip noise_clip(const midas::ClipShape& shape, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  std::vector<float> data(shape.element_count());
  for (float& v : data) v = u(g);
  return midas::Clip("bench", shape, std::move(data));
}

void BM_MixClips(benchmark::State& state) {
  const midas::ClipShape shape{16, 112, 112, 3};
  const auto a = noise_clip(shape, 1);
  const auto b = noise_clip(shape, 2);
  for (auto _ : state) benchmark::DoNotOptimize(midas::mix_clips(a, b, 0.3));
  state.SetBytesProcessed(state.iterations() * shape.element_count() * sizeof(float));
}
BENCHMARK(BM_MixClips);

void BM_Featurize(benchmark::State& state) {
  const auto clip = noise_clip(midas::ClipShape{16, 112, 112, 3}, 3);
  const midas::FeatureSize size{static_cast<std::uint32_t>(state.range(0)), static_cast<std::uint32_t>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(midas::featurize(clip, size));
}
BENCHMARK(BM_Featurize)->Arg(4)->Arg(8)->Arg(16);

void BM_MidasBatch(benchmark::State& state) {
  midas::SynthConfig c;
  c.samples_per_class = 20;
  const auto ds = midas::generate(c);
  midas::Rng rng(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(midas::midas_batch(ds, 64, 0.8, midas::LabelMode::kSoft, true, rng));
  }
}
BENCHMARK(BM_MidasBatch);

void BM_Gradient(benchmark::State& state) {
  midas::Rng rng(5);
  const std::size_t dim = 8 * 8 * 3;
  const auto model = midas::Classifier::initialized(dim, {64, 64}, 7, midas::Activation::kTanh, rng);
  std::mt19937_64 g(6);
  std::normal_distribution<double> nd;
  std::vector<midas::LabeledFeature> batch;
  for (int k = 0; k < state.range(0); ++k) {
    midas::FeatureVector x(dim);
    for (double& v : x) v = nd(g);
    batch.push_back({x, midas::SoftLabel::uniform(7)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(midas::gradient(model, batch));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Gradient)->Arg(1)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
