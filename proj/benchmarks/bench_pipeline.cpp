#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "wearauth/features.hpp"
#include "wearauth/selection.hpp"
#include "wearauth/svm.hpp"
#include "wearauth/synth.hpp"
#include "wearauth/windows.hpp"

namespace {

std::vector<double> random_samples(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> gauss(70.0, 8.0);
  std::vector<double> out(n);
  for (double& x : out) {
    x = gauss(rng);
  }
  return out;
}

void BM_ComputeBiometricFeatures(benchmark::State& state) {
  std::mt19937_64 rng(11);
  const std::vector<double> samples = random_samples(rng, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wearauth::compute_biometric_features(samples));
  }
}
BENCHMARK(BM_ComputeBiometricFeatures);

void BM_KsTwoSample(benchmark::State& state) {
  std::mt19937_64 rng(12);
  const std::vector<double> a =
      random_samples(rng, static_cast<std::size_t>(state.range(0)));
  const std::vector<double> b =
      random_samples(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(wearauth::ks_two_sample(a, b));
  }
}
BENCHMARK(BM_KsTwoSample)->Arg(50)->Arg(500);

void BM_SmoTrain(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(13);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = i % 2 == 0 ? 1 : -1;
    std::vector<double> v(8);
    for (double& value : v) {
      value = gauss(rng) + (label > 0 ? 1.5 : -1.5);
    }
    x.push_back(std::move(v));
    y.push_back(label);
  }
  wearauth::TrainConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(wearauth::smo_train(x, y, cfg));
  }
}
BENCHMARK(BM_SmoTrain)->Arg(64)->Arg(256);

void BM_SegmentWindows(benchmark::State& state) {
  wearauth::CohortConfig cfg;
  cfg.n_subjects = 1;
  cfg.days = 7;
  cfg.seed = 21;
  const auto streams = wearauth::generate_cohort(cfg);
  const auto filtered = wearauth::filter_invalid_wear(streams.front());
  for (auto _ : state) {
    benchmark::DoNotOptimize(wearauth::segment_windows(filtered));
  }
}
BENCHMARK(BM_SegmentWindows);

}  // namespace

BENCHMARK_MAIN();
