#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ispar/common/error.hpp"
#include "ispar/select/mrmr.hpp"
#include "ispar/select/mutual_info.hpp"
#include "ispar/select/rf_importance.hpp"
#include "ispar/select/selection_report.hpp"
#include "ispar/select/wavelet_search.hpp"
#include "oracles.hpp"

using namespace ispar;
using namespace ispar::select;

TEST(MutualInfo, HandValues) {
  const std::vector<int> y{0, 1, 0, 1, 0, 1, 0, 1};
  EXPECT_EQ(mutualInformation(std::vector<int>(8, 3), y), 0.0);
  EXPECT_NEAR(mutualInformation(y, y), std::numbers::ln2, 1e-12);
  // Joint table over 3x3 with counts [[2,1,0],[0,2,1],[1,0,2]], n = 9.
  std::vector<int> a, b;
  const int t[3][3] = {{2, 1, 0}, {0, 2, 1}, {1, 0, 2}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int c = 0; c < t[i][j]; ++c) {
        a.push_back(i);
        b.push_back(j);
      }
    }
  }
  // Marginals are 3/9 each: I = sum p log(p / (1/9)).
  const double expected = 3 * (2.0 / 9 * std::log(2.0 / 9 * 9)) + 3 * (1.0 / 9 * std::log(1.0));
  EXPECT_NEAR(mutualInformation(a, b), expected, 1e-12);
}

TEST(MutualInfo, EqualFrequencyBinsAndTies) {
  std::vector<double> x;
  for (int i = 0; i < 20; ++i) x.push_back(19 - i);
  const auto b = equalFrequencyBins(x, 10);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(b[i], (19 - i) / 2);
  const auto tied = equalFrequencyBins(std::vector<double>(15, 1.0), 5);
  for (int v : tied) EXPECT_EQ(v, 0);
}

TEST(Mrmr, SingleCandidateAndFullCount) {
  const std::vector<int> y{0, 1, 0, 1};
  const auto one = mrmrSelectDiscrete({{0, 1, 0, 1}}, y, 1);
  EXPECT_EQ(one.chosen, (std::vector<std::size_t>{0}));
  const auto all = mrmrSelectDiscrete({{0, 0, 1, 1}, {0, 1, 0, 1}, {1, 1, 1, 0}}, y, 3);
  EXPECT_EQ(all.chosen.size(), 3u);
  EXPECT_EQ(all.chosen[0], 1u);
  EXPECT_THROW(mrmrSelectDiscrete({{0, 1, 0, 1}}, y, 2), InvalidInput);
  EXPECT_THROW(mrmrSelectDiscrete({{0, 1, 0, 1}}, y, 0), InvalidInput);
}

TEST(Mrmr, RedundancyPenaltySkipsDuplicate) {
  std::mt19937_64 rng(1);
  std::bernoulli_distribution coin(0.5), flip(0.1);
  // The duplicated column carries one label bit exactly; the independent
  // column carries the other bit with 10% flips, so it is less relevant.
  std::vector<int> y, strong, other;
  for (int i = 0; i < 400; ++i) {
    const int a = coin(rng), b = coin(rng);
    y.push_back(2 * a + b);
    strong.push_back(a);
    other.push_back(flip(rng) ? 1 - b : b);
  }
  const std::vector<std::vector<int>> cols{strong, strong, other};
  const auto r = mrmrSelectDiscrete(cols, y, 2);
  EXPECT_EQ(r.chosen, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(r.chosen, oracle::exhaustiveMrmr(cols, y, 2));
}

TEST(Mrmr, MatchesExhaustiveOracle) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> dd(2, 8), lv(2, 4);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = dd(rng);
    const int s = std::min(d, 1 + trial % 3);
    std::vector<int> y(120);
    std::uniform_int_distribution<int> cls(0, 2);
    for (auto& v : y) v = cls(rng);
    std::vector<std::vector<int>> cols(d);
    for (auto& c : cols) {
      std::uniform_int_distribution<int> level(0, lv(rng));
      std::bernoulli_distribution follow(0.4);
      for (int i = 0; i < 120; ++i) c.push_back(follow(rng) ? y[i] : level(rng));
    }
    EXPECT_EQ(mrmrSelectDiscrete(cols, y, s, 2).chosen, oracle::exhaustiveMrmr(cols, y, s))
        << "trial " << trial;
  }
}

TEST(Mrmr, MonotoneTransformInvariance) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Eigen::MatrixXd X(200, 5);
  std::vector<int> y(200);
  for (int i = 0; i < 200; ++i) {
    y[i] = i % 2;
    for (int j = 0; j < 5; ++j) X(i, j) = g(rng) + (j < 2 ? y[i] * (j + 1) : 0.0);
  }
  Eigen::MatrixXd Z = X.array().exp();
  EXPECT_EQ(mrmrSelect(X, y, 3).chosen, mrmrSelect(Z, y, 3).chosen);
}

TEST(RfImportance, SeparatingFeatureWinsAndSumsToOne) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  Eigen::MatrixXd X(150, 4);
  std::vector<int> y(150);
  for (int i = 0; i < 150; ++i) {
    y[i] = i % 3;
    for (int j = 0; j < 4; ++j) X(i, j) = g(rng);
    X(i, 2) = 10.0 * y[i] + 0.1 * g(rng);
  }
  const auto ds = ml::Dataset::make(X, y);
  ml::RfParams p;
  p.nTrees = 30;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto r = rfImportance(ds, p, seed, 2);
    EXPECT_EQ(r.chosen[0], 2u);
    double sum = 0.0;
    for (double v : r.scores) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(RfImportance, NoisyLabelsGiveComparableImportance) {
  // Each Monte-Carlo run draws fresh data and a fresh forest; with labels
  // independent of every column the per-feature means must sit within the
  // run-to-run spread.
  std::normal_distribution<double> g;
  std::bernoulli_distribution coin(0.5);
  ml::RfParams p;
  p.nTrees = 50;
  std::vector<std::vector<double>> per(4);
  for (std::uint64_t run = 0; run < 20; ++run) {
    std::mt19937_64 rng(100 + run);
    Eigen::MatrixXd X(200, 4);
    std::vector<int> y(200);
    for (int i = 0; i < 200; ++i) {
      y[i] = coin(rng);
      for (int j = 0; j < 4; ++j) X(i, j) = g(rng);
    }
    const auto r = rfImportance(ml::Dataset::make(X, y), p, run);
    for (int j = 0; j < 4; ++j) per[j].push_back(r.scores[j]);
  }
  std::vector<double> means;
  double sd = 0.0;
  for (const auto& v : per) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    means.push_back(m);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    sd = std::max(sd, std::sqrt(s / static_cast<double>(v.size() - 1)));
  }
  const auto [lo, hi] = std::minmax_element(means.begin(), means.end());
  EXPECT_LT(*hi - *lo, 3.0 * sd);
}

TEST(RfImportance, SingleClassFlagged) {
  Eigen::MatrixXd X = Eigen::MatrixXd::Random(10, 3);
  auto ds = ml::Dataset::make(X, std::vector<int>(10, 1));
  ds.classCount = 2;
  const auto r = rfImportance(ds, ml::RfParams{}, 1);
  for (double v : r.scores) EXPECT_EQ(v, 0.0);
  ASSERT_EQ(r.flags.size(), 1u);
}

namespace {

// Class 1 windows carry a Nyquist-rate burst on phase A; class 0 windows are
// a clean fundamental there. Phase A is noise-free, so every detail level 1
// coefficient separates the classes exactly; phases B and C are noise only.
std::vector<detect::CaptureWindow> burstWindows(std::vector<int>& y) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g(0.0, 0.01);
  std::vector<detect::CaptureWindow> ws;
  for (int i = 0; i < 60; ++i) {
    detect::CaptureWindow w;
    const int label = i % 2;
    for (int p = 0; p < 3; ++p) {
      w.samples[p].resize(64);
      for (int n = 0; n < 64; ++n) {
        w.samples[p][n] = std::sin(2.0 * std::numbers::pi * n / 64.0 + p) + (p == 0 ? 0.0 : g(rng));
        if (label && p == 0) w.samples[p][n] += (n % 2 ? 1.0 : -1.0);
      }
    }
    ws.push_back(w);
    y.push_back(label);
  }
  return ws;
}

}  // namespace

TEST(WaveletSearch, SeparableSpecRanksFirst) {
  std::vector<int> y;
  const auto ws = burstWindows(y);
  WaveletSearchConfig cfg;
  cfg.seed = 3;
  const std::vector<features::WaveletSpec> one{{"db1", 1}};
  const auto single = dtWaveletSearch(ws, y, 2, one, cfg);
  ASSERT_EQ(single.ranking.size(), 1u);
  EXPECT_EQ(single.top.size(), 1u);
  EXPECT_DOUBLE_EQ(single.ranking[0].meanBalancedAccuracy, 1.0);
  const auto specs = expandSpecs({"db1", "db2"}, 64);
  const auto many = dtWaveletSearch(ws, y, 2, specs, cfg);
  EXPECT_EQ(many.top.size(), std::min<std::size_t>(5, specs.size()));
  EXPECT_DOUBLE_EQ(many.ranking[0].meanBalancedAccuracy, 1.0);
  for (std::size_t i = 1; i < many.ranking.size(); ++i) {
    EXPECT_GE(many.ranking[i - 1].meanBalancedAccuracy, many.ranking[i].meanBalancedAccuracy);
  }
  const auto report = waveletSearchReport(many, {{"runs", "5"}});
  EXPECT_NE(report.find("runs"), std::string::npos);
}

TEST(SelectionReport, ListsChosenNames) {
  SelectionResult r{"mrmr", {1, 0}, {0.1, 0.5}, {0.5, 0.02}, {}};
  const auto text = selectionReport(r, {"phaseA.F2.max", "phaseB.db4.E2"}, {{"bins", "10"}});
  EXPECT_NE(text.find("method: mrmr"), std::string::npos);
  EXPECT_NE(text.find("chosen: 2"), std::string::npos);
  EXPECT_LT(text.find("phaseB.db4.E2"), text.find("phaseA.F2.max"));
}
