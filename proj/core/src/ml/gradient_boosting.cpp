#include "ispar/ml/gradient_boosting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ispar/common/binary_io.hpp"
#include "ispar/common/error.hpp"

namespace ispar::ml {

namespace {

void softmaxInPlace(std::vector<double>& s) {
  const double mx = *std::max_element(s.begin(), s.end());
  double z = 0.0;
  for (auto& v : s) {
    v = std::exp(v - mx);
    z += v;
  }
  for (auto& v : s) v /= z;
}

double meanDeviance(const Eigen::MatrixXd& F, const std::vector<int>& y) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < F.rows(); ++i) {
    const double mx = F.row(i).maxCoeff();
    const double lse = mx + std::log((F.row(i).array() - mx).exp().sum());
    total += lse - F(i, y[static_cast<std::size_t>(i)]);
  }
  return total / static_cast<double>(F.rows());
}

}  // namespace

void GbParams::validate() const {
  if (!(learningRate > 0.0) || !std::isfinite(learningRate)) throw InvalidInput("gb: learningRate must be positive");
  if (nEstimators < 0) throw InvalidInput("gb: nEstimators must be >= 0");
  if (maxDepth < 1 || minLeaf < 1) throw InvalidInput("gb: maxDepth and minLeaf must be >= 1");
  if (!(subsample > 0.0 && subsample <= 1.0)) throw InvalidInput("gb: subsample must lie in (0, 1]");
}

GradientBoosting GradientBoosting::fit(const Dataset& ds, const GbParams& params, std::uint64_t seed) {
  ds.validate();
  params.validate();
  const auto n = static_cast<Eigen::Index>(ds.size());
  const int k = ds.classCount;
  const double kk = static_cast<double>(k);
  GradientBoosting m;
  m.learningRate_ = params.learningRate;
  const auto counts = ds.classCounts();
  for (auto c : counts) {
    // An absent class gets a large negative but finite score.
    m.init_.push_back(std::log(std::max(static_cast<double>(c), 1e-12) / static_cast<double>(n)));
  }

  Eigen::MatrixXd F(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int c = 0; c < k; ++c) F(i, c) = m.init_[static_cast<std::size_t>(c)];
  }
  m.deviance_.push_back(meanDeviance(F, ds.y));

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), std::size_t{0});
  const auto draw = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(params.subsample * static_cast<double>(n))));

  Eigen::MatrixXd P(n, k), inc(n, k);
  Eigen::VectorXd r(n);
  const TreeParams tp{params.maxDepth, params.minLeaf, 0};
  for (int round = 0; round < params.nEstimators; ++round) {
    std::vector<std::size_t> rows = all;
    if (draw < rows.size()) {
      for (std::size_t i = 0; i < draw; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, rows.size() - 1);
        std::swap(rows[i], rows[pick(rng)]);
      }
      rows.resize(draw);
      std::sort(rows.begin(), rows.end());
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      std::vector<double> s(static_cast<std::size_t>(k));
      for (int c = 0; c < k; ++c) s[static_cast<std::size_t>(c)] = F(i, c);
      softmaxInPlace(s);
      for (int c = 0; c < k; ++c) P(i, c) = s[static_cast<std::size_t>(c)];
    }
    std::vector<Tree> trees;
    trees.reserve(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
      for (Eigen::Index i = 0; i < n; ++i) r(i) = (ds.y[static_cast<std::size_t>(i)] == c ? 1.0 : 0.0) - P(i, c);
      const LeafValueFn leaf = [&](const std::vector<std::size_t>& lr) {
        double num = 0.0, den = 0.0;
        for (auto j : lr) {
          const double v = r(static_cast<Eigen::Index>(j));
          num += v;
          den += std::abs(v) * (1.0 - std::abs(v));
        }
        return den < 1e-150 ? 0.0 : (kk - 1.0) / kk * num / den;
      };
      trees.push_back(fitRegressionTree(ds.X, r, rows, tp, rng, leaf));
      for (Eigen::Index i = 0; i < n; ++i) inc(i, c) = trees.back().leaf(ds.X.row(i)).value[0];
    }
    const double before = m.deviance_.back();
    double scale = 1.0, after = before;
    for (int halving = 0; halving <= 40; ++halving, scale *= 0.5) {
      after = meanDeviance(F + (params.learningRate * scale) * inc, ds.y);
      if (!std::isfinite(after)) throw TrainingAbort("gb: non-finite deviance in round " + std::to_string(round));
      if (after <= before) break;
    }
    if (after > before) {
      scale = 0.0;
      after = before;
    }
    F += (params.learningRate * scale) * inc;
    m.rounds_.push_back(std::move(trees));
    m.scales_.push_back(scale);
    m.deviance_.push_back(after);
  }
  return m;
}

std::vector<double> GradientBoosting::scores(const Eigen::RowVectorXd& x) const {
  std::vector<double> s = init_;
  for (std::size_t m = 0; m < rounds_.size(); ++m) {
    if (scales_[m] == 0.0) continue;
    const double step = learningRate_ * scales_[m];
    for (std::size_t c = 0; c < rounds_[m].size(); ++c) s[c] += step * rounds_[m][c].leaf(x).value[0];
  }
  return s;
}

std::vector<double> GradientBoosting::proba(const Eigen::RowVectorXd& x) const {
  auto s = scores(x);
  softmaxInPlace(s);
  return s;
}

int GradientBoosting::predict(const Eigen::RowVectorXd& x) const { return argmax(scores(x)); }

void GradientBoosting::save(std::ostream& out) const {
  io::writeF64(out, learningRate_);
  io::writeU64(out, init_.size());
  io::writeF64s(out, init_);
  io::writeU64(out, rounds_.size());
  for (std::size_t m = 0; m < rounds_.size(); ++m) {
    io::writeF64(out, scales_[m]);
    for (const auto& t : rounds_[m]) writeTree(out, t);
  }
  io::writeU64(out, deviance_.size());
  io::writeF64s(out, deviance_);
}

GradientBoosting GradientBoosting::load(std::istream& in) {
  GradientBoosting m;
  m.learningRate_ = io::readF64(in);
  const auto k = io::readU64(in);
  if (k < 1 || k > 4096) throw FormatError("gb: bad class count");
  m.init_ = io::readF64s(in, k);
  const auto rounds = io::readU64(in);
  if (rounds > (1ULL << 24)) throw FormatError("gb: bad round count");
  for (std::uint64_t r = 0; r < rounds; ++r) {
    m.scales_.push_back(io::readF64(in));
    std::vector<Tree> trees;
    for (std::uint64_t c = 0; c < k; ++c) trees.push_back(readTree(in));
    m.rounds_.push_back(std::move(trees));
  }
  const auto dev = io::readU64(in);
  if (dev > (1ULL << 24)) throw FormatError("gb: bad deviance length");
  m.deviance_ = io::readF64s(in, dev);
  return m;
}

}  // namespace ispar::ml
