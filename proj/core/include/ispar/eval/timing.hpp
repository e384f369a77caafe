#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "ispar/ml/model.hpp"

namespace ispar::eval {

// Wall-clock costs in seconds, in the column order of the execution-time
// table: training, testing one instance, testing all instances, feature
// extraction per window.
struct TimingBlock {
  double trainSeconds = 0.0;
  double testOneMeanSeconds = 0.0;
  double testOneStdSeconds = 0.0;
  double testAllSeconds = 0.0;
  double featureExtractSeconds = 0.0;  // mean per window; 0 when not measured
  std::size_t testInstances = 0;
  int runs = 0;
};

// Trains `spec` once on `train`, predicts all of `test` once, then times
// `runs` single-instance predictions cycling through `test`. `extractOne`,
// when given, is timed `runs` times as well.
TimingBlock timingReport(const ml::ModelSpec& spec, const ml::Dataset& train, const ml::Dataset& test,
                         std::uint64_t seed, int runs = 100, const std::function<void()>& extractOne = {});

}  // namespace ispar::eval
