#include "ispar/eval/timing.hpp"

#include <chrono>
#include <cmath>
#include <vector>

#include "ispar/common/error.hpp"

namespace ispar::eval {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

}  // namespace

TimingBlock timingReport(const ml::ModelSpec& spec, const ml::Dataset& train, const ml::Dataset& test,
                         std::uint64_t seed, int runs, const std::function<void()>& extractOne) {
  if (runs < 1) throw InvalidInput("timing: runs must be >= 1");
  if (test.size() == 0) throw InvalidInput("timing: empty test set");
  TimingBlock t;
  t.runs = runs;
  t.testInstances = test.size();

  auto t0 = Clock::now();
  const auto model = ml::train(spec, train, seed);
  t.trainSeconds = since(t0);

  t0 = Clock::now();
  volatile int sink = 0;
  for (int p : model.predict(test.X)) sink = sink + p;
  t.testAllSeconds = since(t0);

  std::vector<double> one;
  one.reserve(static_cast<std::size_t>(runs));
  for (int r = 0; r < runs; ++r) {
    const Eigen::RowVectorXd x = test.X.row(static_cast<Eigen::Index>(static_cast<std::size_t>(r) % test.size()));
    t0 = Clock::now();
    sink = sink + model.predict(x);
    one.push_back(since(t0));
  }
  for (double v : one) t.testOneMeanSeconds += v;
  t.testOneMeanSeconds /= static_cast<double>(runs);
  for (double v : one) t.testOneStdSeconds += (v - t.testOneMeanSeconds) * (v - t.testOneMeanSeconds);
  t.testOneStdSeconds = std::sqrt(t.testOneStdSeconds / static_cast<double>(runs));

  if (extractOne) {
    t0 = Clock::now();
    for (int r = 0; r < runs; ++r) extractOne();
    t.featureExtractSeconds = since(t0) / static_cast<double>(runs);
  }
  return t;
}

}  // namespace ispar::eval
