#include "ispar/eval/cross_validation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "ispar/common/error.hpp"
#include "ispar/common/hash.hpp"
#include "ispar/common/parallel.hpp"

namespace ispar::eval {

namespace {

std::vector<std::vector<std::size_t>> byClass(const std::vector<int>& y, int k) {
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] < 0 || y[i] >= k) throw InvalidInput("cv: label out of range");
    out[static_cast<std::size_t>(y[i])].push_back(i);
  }
  return out;
}

}  // namespace

void CVPlan::validate() const {
  if (folds < 2) throw InvalidInput("cv: need at least two folds");
}

Folds stratifiedKFold(const std::vector<int>& y, int classCount, const CVPlan& plan) {
  plan.validate();
  const auto f = static_cast<std::size_t>(plan.folds);
  Folds folds(f);
  std::mt19937_64 rng(plan.seed);
  std::size_t next = 0;
  if (!plan.stratified) {
    std::vector<std::size_t> all(y.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    if (all.size() < f) throw InvalidInput("cv: fewer samples than folds");
    std::shuffle(all.begin(), all.end(), rng);
    for (auto i : all) folds[next++ % f].push_back(i);
  } else {
    auto classes = byClass(y, classCount);
    for (std::size_t c = 0; c < classes.size(); ++c) {
      auto& idx = classes[c];
      if (idx.empty()) continue;
      if (idx.size() < f) {
        throw InvalidInput("cv: class " + std::to_string(c) + " has " + std::to_string(idx.size()) +
                           " samples, fewer than " + std::to_string(f) + " folds");
      }
      std::shuffle(idx.begin(), idx.end(), rng);
      for (auto i : idx) folds[next++ % f].push_back(i);
    }
  }
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

TrainTestSplit stratifiedSplit(const std::vector<int>& y, int classCount, double testFraction, std::uint64_t seed) {
  if (!(testFraction > 0.0 && testFraction < 1.0)) throw InvalidInput("split: test fraction must lie in (0, 1)");
  std::mt19937_64 rng(seed);
  TrainTestSplit s;
  for (auto& idx : byClass(y, classCount)) {
    std::shuffle(idx.begin(), idx.end(), rng);
    auto nTest = static_cast<std::size_t>(std::llround(testFraction * static_cast<double>(idx.size())));
    if (idx.size() >= 2) nTest = std::clamp<std::size_t>(nTest, 1, idx.size() - 1);
    s.test.insert(s.test.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(nTest));
    s.train.insert(s.train.end(), idx.begin() + static_cast<std::ptrdiff_t>(nTest), idx.end());
  }
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

CvResult crossValidate(const ml::ModelSpec& spec, const ml::Dataset& ds, const CVPlan& plan,
                       std::uint64_t modelSeed, int jobs) {
  ds.validate();
  const Folds folds = stratifiedKFold(ds.y, ds.classCount, plan);
  std::vector<Confusion> conf(folds.size());
  parallelFor(folds.size(), jobs, [&](std::size_t f) {
    std::vector<std::size_t> train;
    std::vector<bool> isTest(ds.size(), false);
    for (auto i : folds[f]) isTest[i] = true;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (!isTest[i]) train.push_back(i);
    }
    const auto model = ml::train(spec, ds.rows(train), deriveSeed(modelSeed, f));
    const auto test = ds.rows(folds[f]);
    conf[f] = Confusion::fromPredictions(test.y, model.predict(test.X), ds.classCount);
  });
  CvResult r;
  r.pooled = Confusion(ds.classCount);
  for (const auto& c : conf) {
    r.foldScores.push_back(balancedAccuracy(c));
    r.pooled += c;
  }
  for (double s : r.foldScores) r.mean += s;
  r.mean /= static_cast<double>(r.foldScores.size());
  for (double s : r.foldScores) r.stddev += (s - r.mean) * (s - r.mean);
  r.stddev = std::sqrt(r.stddev / static_cast<double>(r.foldScores.size()));
  return r;
}

}  // namespace ispar::eval
