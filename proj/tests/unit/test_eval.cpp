#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "ispar/common/error.hpp"
#include "ispar/eval/cross_validation.hpp"
#include "ispar/eval/grid_search.hpp"
#include "ispar/eval/metrics.hpp"
#include "ispar/eval/report.hpp"
#include "ispar/eval/timing.hpp"

using namespace ispar;
using namespace ispar::eval;

namespace {

Confusion twoClass(std::size_t tp, std::size_t fn, std::size_t tn, std::size_t fp) {
  Confusion c(2);
  c.at(0, 0) = tp;
  c.at(0, 1) = fn;
  c.at(1, 1) = tn;
  c.at(1, 0) = fp;
  return c;
}

ml::Dataset blobs(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd X(2 * n, 2);
  std::vector<int> y;
  for (int i = 0; i < 2 * n; ++i) {
    const int c = i < n ? 0 : 1;
    X(i, 0) = g(rng) + 5.0 * c;
    X(i, 1) = g(rng);
    y.push_back(c);
  }
  return ml::Dataset::make(X, y);
}

}  // namespace

TEST(Metrics, PublishedConfusionCounts) {
  EXPECT_NEAR(balancedAccuracy(twoClass(9406, 0, 2697, 8)), 0.9985, 5e-4);
  EXPECT_NEAR(balancedAccuracy(twoClass(6695, 12, 2601, 67)), 0.9865, 5e-4);
  Confusion four(4);
  const std::size_t hit[4] = {486, 546, 156, 1535}, n[4] = {489, 552, 156, 1539};
  for (int c = 0; c < 4; ++c) {
    four.at(c, c) = hit[c];
    four.at(c, (c + 1) % 4) = n[c] - hit[c];
  }
  EXPECT_NEAR(balancedAccuracy(four), 0.9951, 5e-4);
}

TEST(Metrics, OneVsRestCounts) {
  const auto c = Confusion::fromPredictions({0, 0, 1, 2, 2, 2}, {0, 1, 1, 2, 0, 2}, 3);
  EXPECT_EQ(c.tp(0), 1u);
  EXPECT_EQ(c.fn(0), 1u);
  EXPECT_EQ(c.fp(0), 1u);
  EXPECT_EQ(c.tn(0), 3u);
  EXPECT_EQ(c.support(2), 3u);
  EXPECT_DOUBLE_EQ(accuracy(c), 4.0 / 6.0);
  const auto r = perClassRecall(c);
  EXPECT_DOUBLE_EQ(r[2], 2.0 / 3.0);
  EXPECT_THROW(balancedAccuracy(Confusion::fromPredictions({0, 0}, {0, 1}, 2)), InvalidInput);
}

TEST(Folds, BalancedTenFold) {
  std::vector<int> y(100);
  for (int i = 0; i < 100; ++i) y[i] = i % 2;
  CVPlan plan;
  plan.seed = 4;
  const auto folds = stratifiedKFold(y, 2, plan);
  ASSERT_EQ(folds.size(), 10u);
  std::set<std::size_t> seen;
  for (const auto& f : folds) {
    int ones = 0;
    for (auto i : f) {
      ones += y[i];
      EXPECT_TRUE(seen.insert(i).second);
    }
    EXPECT_EQ(f.size(), 10u);
    EXPECT_EQ(ones, 5);
  }
  EXPECT_EQ(seen.size(), 100u);
}

TEST(Folds, UnevenClassesWithinOne) {
  std::vector<int> y;
  for (int i = 0; i < 60; ++i) y.push_back(0);
  for (int i = 0; i < 43; ++i) y.push_back(1);
  const auto folds = stratifiedKFold(y, 2, CVPlan{});
  std::size_t total = 0;
  for (const auto& f : folds) {
    int zeros = 0;
    for (auto i : f) zeros += y[i] == 0;
    EXPECT_EQ(zeros, 6);
    const int ones = static_cast<int>(f.size()) - zeros;
    EXPECT_TRUE(ones == 4 || ones == 5);
    EXPECT_TRUE(std::is_sorted(f.begin(), f.end()));
    total += f.size();
  }
  EXPECT_EQ(total, 103u);
}

TEST(Split, StratifiedShares) {
  std::vector<int> y;
  for (int i = 0; i < 50; ++i) y.push_back(i < 40 ? 0 : 1);
  const auto s = stratifiedSplit(y, 2, 0.2, 1);
  int ones = 0;
  for (auto i : s.test) ones += y[i];
  EXPECT_EQ(s.test.size(), 10u);
  EXPECT_EQ(ones, 2);
  EXPECT_EQ(s.train.size() + s.test.size(), 50u);
}

TEST(CrossValidate, JobsDoNotChangeResult) {
  const auto ds = blobs(1, 60);
  ml::ModelSpec spec;
  spec.kind = ml::ModelKind::RF;
  spec.rf.nTrees = 10;
  CVPlan plan;
  plan.folds = 5;
  const auto a = crossValidate(spec, ds, plan, 3, 1);
  const auto b = crossValidate(spec, ds, plan, 3, 4);
  EXPECT_EQ(a.foldScores, b.foldScores);
  EXPECT_EQ(a.pooled.counts, b.pooled.counts);
  EXPECT_EQ(a.pooled.total(), ds.size());
}

TEST(GridSearch, SingleCellAndDegenerateNeverWins) {
  // Imbalanced classes: a vanishing learning rate leaves the prior in charge,
  // so the degenerate cell predicts the majority class everywhere.
  auto full = blobs(2, 60);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < full.size(); ++i) {
    if (full.y[i] == 0 || i % 3 == 0) keep.push_back(i);
  }
  const auto ds = full.rows(keep);
  CVPlan plan;
  plan.folds = 5;
  ml::ModelSpec sane;
  sane.kind = ml::ModelKind::GB;
  sane.gb.nEstimators = 20;
  ml::ModelSpec degenerate = sane;
  degenerate.gb.learningRate = 1e-12;
  const auto one = gridSearch(ds, {sane}, plan, 7);
  EXPECT_EQ(one.best, 0u);
  const auto two = gridSearch(ds, {degenerate, sane}, plan, 7);
  EXPECT_EQ(two.best, 1u);
  const auto again = crossValidate(sane, ds, plan, 7);
  EXPECT_EQ(two.bestCell().cv.mean, again.mean);
}

TEST(Timing, SingleBelowAllAndColumns) {
  const auto train = blobs(3, 100);
  const auto test = blobs(4, 100);
  ml::ModelSpec spec;
  spec.kind = ml::ModelKind::KNN;
  const auto t = timingReport(spec, train, test, 1, 20, [] {});
  EXPECT_EQ(t.runs, 20);
  EXPECT_EQ(t.testInstances, 200u);
  EXPECT_LE(t.testOneMeanSeconds, t.testAllSeconds);
  EXPECT_GE(t.testOneStdSeconds, 0.0);
  const auto table = timingTable({{"knn", t}});
  for (const char* col : {"training", "testing one", "testing all", "feature extract"}) {
    EXPECT_NE(table.find(col), std::string::npos) << col;
  }
}

TEST(Report, JsonRoundTripAndCsv) {
  CvResult cv;
  cv.foldScores = {0.9, 1.0};
  cv.mean = 0.95;
  cv.stddev = 0.05;
  cv.pooled = twoClass(9, 1, 10, 0);
  const auto r = makeReport("detect", "gnb(varianceFloor=1e-09)", {"no-fault", "internal-fault"}, cv);
  const auto back = evalReportFromJson(toJson(r));
  EXPECT_EQ(back.task, "detect");
  EXPECT_EQ(back.confusion.counts, r.confusion.counts);
  EXPECT_DOUBLE_EQ(back.balancedAccuracy, r.balancedAccuracy);
  const auto csv = toCsv({r});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "task,model,class,support,tp,fn,fp,tn,recall,balanced_accuracy");
  EXPECT_NE(confusionTable(r).find("no-fault"), std::string::npos);
}
