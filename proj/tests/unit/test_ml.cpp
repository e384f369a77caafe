#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "ispar/common/error.hpp"
#include "ispar/ml/decision_tree.hpp"
#include "ispar/ml/gradient_boosting.hpp"
#include "ispar/ml/knn.hpp"
#include "ispar/ml/mlp.hpp"
#include "ispar/ml/model.hpp"
#include "ispar/ml/model_io.hpp"
#include "ispar/ml/naive_bayes.hpp"
#include "ispar/ml/random_forest.hpp"

using namespace ispar;
using namespace ispar::ml;

namespace {

Dataset blobs(std::uint64_t seed, int perClass, int classes = 2, double gap = 6.0, int dim = 2) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd X(perClass * classes, dim);
  std::vector<int> y;
  for (int c = 0; c < classes; ++c) {
    for (int i = 0; i < perClass; ++i) {
      const int r = c * perClass + i;
      for (int j = 0; j < dim; ++j) X(r, j) = g(rng) + (j == c % dim ? gap * (1 + c / dim) : 0.0);
      y.push_back(c);
    }
  }
  return Dataset::make(X, y);
}

Dataset xorData() {
  Eigen::MatrixXd X(4, 2);
  X << 0, 0, 0, 1, 1, 0, 1, 1;
  return Dataset::make(X, {0, 1, 1, 0});
}

double trainAccuracy(const TrainedModel& m, const Dataset& ds) {
  const auto p = m.predict(ds.X);
  int ok = 0;
  for (std::size_t i = 0; i < p.size(); ++i) ok += p[i] == ds.y[i];
  return static_cast<double>(ok) / static_cast<double>(p.size());
}

ModelSpec specOf(ModelKind k) {
  ModelSpec s;
  s.kind = k;
  return s;
}

}  // namespace

TEST(DecisionTree, PureClassIsSingleLeaf) {
  Eigen::MatrixXd X = Eigen::MatrixXd::Random(12, 3);
  auto ds = Dataset::make(X, std::vector<int>(12, 1));
  ds.classCount = 3;
  const auto dt = DecisionTree::fit(ds, DtParams{});
  EXPECT_EQ(dt.tree().nodes.size(), 1u);
  EXPECT_EQ(dt.predict(X.row(0)), 1);
}

TEST(DecisionTree, XorAndStump) {
  DtParams p;
  p.maxDepth = 2;
  const auto x = xorData();
  const auto dt = DecisionTree::fit(x, p);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(dt.predict(x.X.row(i)), x.y[i]);
  Eigen::MatrixXd X(6, 1);
  X << 1, 2, 3, 10, 11, 12;
  const auto line = Dataset::make(X, {0, 0, 0, 1, 1, 1});
  p.maxDepth = 1;
  const auto stump = DecisionTree::fit(line, p);
  EXPECT_EQ(stump.tree().depth(), 1);
  for (int i = 0; i < 6; ++i) EXPECT_EQ(stump.predict(X.row(i)), line.y[i]);
}

TEST(DecisionTree, MonotoneTransformLeavesPredictionsUnchanged) {
  const auto ds = blobs(1, 40, 3, 1.5);
  Dataset t = ds;
  t.X = ds.X.array().exp();
  const auto a = train(specOf(ModelKind::DT), ds, 1);
  const auto b = train(specOf(ModelKind::DT), t, 1);
  EXPECT_EQ(a.predict(ds.X), b.predict(t.X));
}

TEST(RandomForest, SingleFullTreeEqualsDecisionTree) {
  const auto ds = blobs(2, 30, 3, 1.0);
  RfParams p;
  p.nTrees = 1;
  p.bootstrap = false;
  p.maxFeatures = 2;
  const auto rf = RandomForest::fit(ds, p, 7);
  const auto dt = DecisionTree::fit(ds, DtParams{}, 7);
  for (Eigen::Index i = 0; i < ds.X.rows(); ++i) EXPECT_EQ(rf.predict(ds.X.row(i)), dt.predict(ds.X.row(i)));
}

TEST(RandomForest, BlobsAndJobIndependence) {
  const auto train_ = blobs(3, 100);
  const auto test = blobs(4, 100);
  RfParams p;
  p.nTrees = 40;
  const auto a = RandomForest::fit(train_, p, 5, 1);
  const auto b = RandomForest::fit(train_, p, 5, 4);
  int ok = 0;
  for (Eigen::Index i = 0; i < test.X.rows(); ++i) {
    EXPECT_EQ(a.proba(test.X.row(i)), b.proba(test.X.row(i)));
    ok += a.predict(test.X.row(i)) == test.y[static_cast<std::size_t>(i)];
  }
  EXPECT_GE(ok, 190);
}

TEST(GradientBoosting, DevianceNeverRises) {
  const auto ds = blobs(5, 60, 3, 1.2);
  GbParams p;
  p.nEstimators = 60;
  p.subsample = 1.0;
  const auto gb = GradientBoosting::fit(ds, p, 1);
  ASSERT_EQ(gb.deviance().size(), 61u);
  for (std::size_t m = 1; m < gb.deviance().size(); ++m) EXPECT_LE(gb.deviance()[m], gb.deviance()[m - 1]);
}

TEST(GradientBoosting, TinyRateGivesPriors) {
  auto ds = blobs(6, 30, 2);
  ds = ds.rows({0, 1, 2, 3, 4, 5, 6, 7, 8, 30, 31, 32});  // priors 0.75 / 0.25
  GbParams p;
  p.learningRate = 1e-12;
  p.nEstimators = 1;
  const auto gb = GradientBoosting::fit(ds, p, 1);
  const auto pr = gb.proba(ds.X.row(0));
  EXPECT_NEAR(pr[0], 0.75, 1e-9);
  EXPECT_NEAR(pr[1], 0.25, 1e-9);
}

TEST(GradientBoosting, TwoBlobsFitExactly) {
  ModelSpec s = specOf(ModelKind::GB);
  s.gb.nEstimators = 50;
  s.gb.maxDepth = 2;
  const auto ds = blobs(7, 50, 2, 4.0);
  EXPECT_DOUBLE_EQ(trainAccuracy(train(s, ds, 1), ds), 1.0);
}

TEST(Knn, OneNeighbourMemorizesDistinctPoints) {
  const auto ds = blobs(8, 50, 3, 0.5);
  ModelSpec s = specOf(ModelKind::KNN);
  s.knn.k = 1;
  EXPECT_DOUBLE_EQ(trainAccuracy(train(s, ds, 0), ds), 1.0);
}

TEST(Knn, FullVoteTieGoesToLowerClass) {
  Eigen::MatrixXd X(4, 1);
  X << 0, 1, 2, 3;
  const auto ds = Dataset::make(X, {1, 0, 1, 0});
  KnnParams p;
  p.k = 4;
  const auto knn = Knn::fit(ds, p);
  Eigen::RowVectorXd q(1);
  q << 2.9;
  EXPECT_EQ(knn.predict(q), 0);
}

TEST(Knn, MetricsDisagreeOnConstructedTriple) {
  // Query at origin: A = (3, 0) has L1 3 and L2 3; B = (2, 2) has L1 4 and L2 2.83.
  Eigen::MatrixXd X(2, 2);
  X << 3, 0, 2, 2;
  const auto ds = Dataset::make(X, {0, 1});
  Eigen::RowVectorXd q = Eigen::RowVectorXd::Zero(2);
  KnnParams p;
  p.k = 1;
  p.metric = Metric::L1;
  EXPECT_EQ(Knn::fit(ds, p).predict(q), 0);
  p.metric = Metric::L2;
  EXPECT_EQ(Knn::fit(ds, p).predict(q), 1);
}

TEST(GaussianNb, BoundaryAtAnalyticCrossover) {
  // Equal priors, sigma 1, means 0 and 4: the boundary sits at 2.
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  const int n = 4000;
  Eigen::MatrixXd X(2 * n, 1);
  std::vector<int> y;
  for (int i = 0; i < 2 * n; ++i) {
    X(i, 0) = g(rng) + (i < n ? 0.0 : 4.0);
    y.push_back(i < n ? 0 : 1);
  }
  const auto nb = GaussianNB::fit(Dataset::make(X, y));
  double lo = 0.0, hi = 4.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    Eigen::RowVectorXd q(1);
    q << mid;
    (nb.predict(q) == 0 ? lo : hi) = mid;
  }
  EXPECT_NEAR(lo, 2.0, 0.04);
}

TEST(GaussianNb, ScalingLeavesPredictionsUnchanged) {
  const auto ds = blobs(10, 40, 3, 1.0);
  Dataset s = ds;
  s.X *= 1000.0;
  const auto a = GaussianNB::fit(ds);
  const auto b = GaussianNB::fit(s);
  for (Eigen::Index i = 0; i < ds.X.rows(); ++i) EXPECT_EQ(a.predict(ds.X.row(i)), b.predict(s.X.row(i)));
}

TEST(GaussianNb, IdenticalClassesPredictPrior) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  Eigen::MatrixXd X(100, 2);
  for (int i = 0; i < 100; ++i) {
    X(i, 0) = g(rng);
    X(i, 1) = g(rng);
  }
  // Class 1 holds every class-0 row twice: identical moments, prior 2/3.
  Eigen::MatrixXd W(300, 2);
  std::vector<int> yw;
  for (int i = 0; i < 100; ++i) {
    W.row(i) = X.row(i);
    W.row(100 + i) = X.row(i);
    W.row(200 + i) = X.row(i);
    yw.push_back(0);
  }
  for (int i = 100; i < 300; ++i) yw.push_back(1);
  const auto nb = GaussianNB::fit(Dataset::make(W, yw));
  for (int i = 0; i < 50; ++i) EXPECT_EQ(nb.predict(X.row(i)), 1);
}

TEST(Mlp, GradientMatchesCentralDifferences) {
  Eigen::MatrixXd X(3, 4);
  X << 0.3, -1.2, 0.5, 2.0, -0.7, 0.1, 1.5, -0.4, 1.1, 0.9, -0.2, 0.6;
  const std::vector<int> y{0, 2, 1};
  for (auto act : {Activation::Tanh, Activation::Logistic, Activation::Relu}) {
    MlpParams p;
    p.hiddenSizes = {5, 3};
    p.activation = act;
    auto net = Mlp::initialize(4, 3, p, 21);
    Eigen::VectorXd grad;
    net.lossAndGradient(X, y, 0.05, grad);
    const Eigen::VectorXd w = net.parameters();
    Eigen::VectorXd numeric(w.size());
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      Eigen::VectorXd a = w, b = w;
      a(i) += h;
      b(i) -= h;
      net.setParameters(a);
      const double la = net.loss(X, y, 0.05);
      net.setParameters(b);
      const double lb = net.loss(X, y, 0.05);
      numeric(i) = (la - lb) / (2.0 * h);
    }
    net.setParameters(w);
    const double rel = (grad - numeric).norm() / std::max(grad.norm() + numeric.norm(), 1e-12);
    EXPECT_LT(rel, 1e-5) << toString(act);
  }
}

TEST(Mlp, XorMostSeeds) {
  const auto ds = xorData();
  int solved = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ModelSpec s = specOf(ModelKind::MLP);
    s.mlp.hiddenSizes = {4};
    s.mlp.activation = Activation::Tanh;
    s.mlp.l2Alpha = 0.0;
    s.mlp.learningRate = 0.05;
    s.mlp.epochs = 2000;
    s.mlp.batchSize = 4;
    s.mlp.tolerance = 0.0;
    s.mlp.patience = 2000;
    solved += trainAccuracy(train(s, ds, seed), ds) == 1.0;
  }
  EXPECT_GE(solved, 8);
}

TEST(Mlp, RejectsNoHiddenLayer) {
  ModelSpec s = specOf(ModelKind::MLP);
  s.mlp.hiddenSizes.clear();
  EXPECT_THROW(s.validate(), InvalidInput);
}

TEST(ModelIo, RoundTripEveryKind) {
  const auto ds = blobs(12, 30, 3, 2.0, 3);
  for (auto k : {ModelKind::DT, ModelKind::RF, ModelKind::GB, ModelKind::KNN, ModelKind::GNB, ModelKind::MLP}) {
    ModelSpec s = specOf(k);
    s.rf.nTrees = 5;
    s.gb.nEstimators = 5;
    s.mlp.epochs = 5;
    const auto m = train(s, ds, 3);
    const auto bytes = encodeModel(m);
    EXPECT_EQ(bytes.substr(0, 8), "ISPARMD1");
    const auto back = decodeModel(bytes);
    EXPECT_EQ(back.spec().describe(), s.describe());
    for (Eigen::Index i = 0; i < ds.X.rows(); ++i) EXPECT_EQ(back.proba(ds.X.row(i)), m.proba(ds.X.row(i)));
    EXPECT_EQ(encodeModel(back), bytes) << toString(k);
    EXPECT_THROW(decodeModel(bytes.substr(0, bytes.size() / 2)), FormatError);
  }
}

TEST(Model, SameSeedSamePredictions) {
  const auto ds = blobs(13, 40, 3, 1.0);
  ModelSpec s = specOf(ModelKind::GB);
  s.gb.subsample = 0.7;
  const auto a = train(s, ds, 9);
  const auto b = train(s, ds, 9);
  EXPECT_EQ(encodeModel(a), encodeModel(b));
}
