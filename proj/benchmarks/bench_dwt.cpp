#include <benchmark/benchmark.h>

#include <random>

#include "ispar/detect/event_detector.hpp"
#include "ispar/features/dwt.hpp"
#include "ispar/features/feature_matrix.hpp"
#include "ispar/features/wavelet.hpp"

using namespace ispar;

namespace {

std::vector<double> signal(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<double> x(n);
  for (auto& v : x) v = g(rng);
  return x;
}

void BM_DwtDb4Level4(benchmark::State& state) {
  const auto x = signal(167);
  const auto& f = features::WaveletCatalog::builtin().at("db4");
  for (auto _ : state) benchmark::DoNotOptimize(features::dwtMultilevel(x, f, 4));
}
BENCHMARK(BM_DwtDb4Level4);

void BM_CombinedFeatures(benchmark::State& state) {
  detect::CaptureWindow w;
  for (auto& ch : w.samples) ch = signal(167);
  features::FeatureSpec spec;
  for (auto _ : state) benchmark::DoNotOptimize(features::extractFeatures(w, spec));
}
BENCHMARK(BM_CombinedFeatures);

void BM_EdScan(benchmark::State& state) {
  std::array<std::vector<double>, 3> id{signal(1000), signal(1000), signal(1000)};
  for (auto& ch : id) {
    for (std::size_t i = 0; i < ch.size(); ++i) ch[i] = std::sin(0.0376 * static_cast<double>(i)) + 1e-4 * ch[i];
  }
  for (auto _ : state) benchmark::DoNotOptimize(detect::detectAndCapture(id, detect::EDConfig{}));
}
BENCHMARK(BM_EdScan);

}  // namespace
