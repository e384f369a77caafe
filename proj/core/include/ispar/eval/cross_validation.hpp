#pragma once

#include <cstdint>
#include <vector>

#include "ispar/eval/metrics.hpp"
#include "ispar/ml/model.hpp"

namespace ispar::eval {

struct CVPlan {
  int folds = 10;
  bool stratified = true;
  std::uint64_t seed = 0;

  void validate() const;
};

using Folds = std::vector<std::vector<std::size_t>>;  // sorted test indices per fold

// Each class is shuffled and dealt round-robin, continuing from the fold
// where the previous class stopped, so per-fold class counts differ from the
// proportional share by less than one and fold sizes by at most one.
Folds stratifiedKFold(const std::vector<int>& y, int classCount, const CVPlan& plan);

struct TrainTestSplit {
  std::vector<std::size_t> train, test;
};

// Per-class shuffle; round(testFraction * n_c) samples of each class (at
// least one when n_c >= 2) go to the test side.
TrainTestSplit stratifiedSplit(const std::vector<int>& y, int classCount, double testFraction, std::uint64_t seed);

struct CvResult {
  std::vector<double> foldScores;  // balanced accuracy per fold
  double mean = 0.0;
  double stddev = 0.0;             // population
  Confusion pooled;                // summed over folds
};

// Fold f trains with seed deriveSeed(modelSeed, f); folds run on `jobs`
// threads and are combined in fold order.
CvResult crossValidate(const ml::ModelSpec& spec, const ml::Dataset& ds, const CVPlan& plan,
                       std::uint64_t modelSeed, int jobs = 1);

}  // namespace ispar::eval
