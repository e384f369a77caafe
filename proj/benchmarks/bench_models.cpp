#include <benchmark/benchmark.h>

#include <random>

#include "ispar/ml/model.hpp"

using namespace ispar;

namespace {

ml::Dataset data(int n, int d, int k) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  Eigen::MatrixXd X(n, d);
  std::vector<int> y;
  for (int i = 0; i < n; ++i) {
    y.push_back(i % k);
    for (int j = 0; j < d; ++j) X(i, j) = g(rng) + (j % k == i % k ? 1.0 : 0.0);
  }
  return ml::Dataset::make(X, y);
}

void BM_GbTrain(benchmark::State& state) {
  const auto ds = data(static_cast<int>(state.range(0)), 18, 4);
  ml::ModelSpec spec;
  spec.gb.nEstimators = 50;
  for (auto _ : state) benchmark::DoNotOptimize(ml::train(spec, ds, 1));
}
BENCHMARK(BM_GbTrain)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_PredictOne(benchmark::State& state) {
  const auto ds = data(1000, 18, 4);
  ml::ModelSpec spec;
  spec.kind = static_cast<ml::ModelKind>(state.range(0));
  spec.rf.nTrees = 100;
  spec.mlp.epochs = 20;
  const auto m = ml::train(spec, ds, 1);
  Eigen::Index i = 0;
  for (auto _ : state) {
    const Eigen::RowVectorXd row = ds.X.row(i++ % ds.X.rows());
    benchmark::DoNotOptimize(m.predict(row));
  }
  state.SetLabel(ml::toString(spec.kind));
}
BENCHMARK(BM_PredictOne)->DenseRange(0, 5);

}  // namespace
