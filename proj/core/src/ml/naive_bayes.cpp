#include "ispar/ml/naive_bayes.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "ispar/common/binary_io.hpp"
#include "ispar/common/error.hpp"
#include "ispar/ml/cart.hpp"

namespace ispar::ml {

void GnbParams::validate() const {
  if (!(varianceFloor > 0.0)) throw InvalidInput("gnb: varianceFloor must be positive");
}

GaussianNB GaussianNB::fit(const Dataset& ds, const GnbParams& params) {
  ds.validate();
  params.validate();
  const int k = ds.classCount;
  const auto d = ds.X.cols();
  GaussianNB m;
  m.mean_ = Eigen::MatrixXd::Zero(k, d);
  m.var_ = Eigen::MatrixXd::Zero(k, d);
  const auto counts = ds.classCounts();
  for (std::size_t i = 0; i < ds.size(); ++i) m.mean_.row(ds.y[i]) += ds.X.row(static_cast<Eigen::Index>(i));
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] > 0) m.mean_.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
  }
  for (std::size_t i = 0; i < ds.size(); ++i) {
    m.var_.row(ds.y[i]) += (ds.X.row(static_cast<Eigen::Index>(i)) - m.mean_.row(ds.y[i])).array().square().matrix();
  }
  double meanVar = 0.0;
  const Eigen::RowVectorXd mu = ds.X.colwise().mean();
  for (Eigen::Index j = 0; j < d; ++j) meanVar += (ds.X.col(j).array() - mu(j)).square().mean();
  meanVar /= static_cast<double>(d);
  const double floor = meanVar > 0.0 ? params.varianceFloor * meanVar : std::numeric_limits<double>::min();
  for (int c = 0; c < k; ++c) {
    const auto n = counts[static_cast<std::size_t>(c)];
    if (n == 1) m.flags_.push_back("class " + std::to_string(c) + " has a single sample; variance floor used");
    if (n > 0) m.var_.row(c) /= static_cast<double>(n);
    m.var_.row(c) = m.var_.row(c).cwiseMax(floor);
    m.logPrior_.push_back(n > 0 ? std::log(static_cast<double>(n) / static_cast<double>(ds.size()))
                                : -std::numeric_limits<double>::infinity());
  }
  return m;
}

std::vector<double> GaussianNB::logPosterior(const Eigen::RowVectorXd& x) const {
  if (x.size() != mean_.cols()) throw InvalidInput("gnb: query dimension mismatch");
  std::vector<double> out(logPrior_.size());
  for (std::size_t c = 0; c < out.size(); ++c) {
    const auto ci = static_cast<Eigen::Index>(c);
    double ll = logPrior_[c];
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const double v = var_(ci, j), dx = x(j) - mean_(ci, j);
      ll -= 0.5 * (std::log(2.0 * std::numbers::pi * v) + dx * dx / v);
    }
    out[c] = ll;
  }
  return out;
}

std::vector<double> GaussianNB::proba(const Eigen::RowVectorXd& x) const {
  auto lp = logPosterior(x);
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : lp) mx = std::max(mx, v);
  double z = 0.0;
  for (auto& v : lp) {
    v = std::exp(v - mx);
    z += v;
  }
  for (auto& v : lp) v /= z;
  return lp;
}

int GaussianNB::predict(const Eigen::RowVectorXd& x) const { return argmax(logPosterior(x)); }

void GaussianNB::save(std::ostream& out) const {
  io::writeU64(out, static_cast<std::uint64_t>(mean_.rows()));
  io::writeU64(out, static_cast<std::uint64_t>(mean_.cols()));
  io::writeF64s(out, logPrior_);
  for (Eigen::Index c = 0; c < mean_.rows(); ++c) {
    for (Eigen::Index j = 0; j < mean_.cols(); ++j) {
      io::writeF64(out, mean_(c, j));
      io::writeF64(out, var_(c, j));
    }
  }
}

GaussianNB GaussianNB::load(std::istream& in) {
  GaussianNB m;
  const auto k = io::readU64(in), d = io::readU64(in);
  if (k < 1 || k > 4096 || d > (1ULL << 20)) throw FormatError("gnb: bad shape");
  m.logPrior_ = io::readF64s(in, k);
  m.mean_.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
  m.var_.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
  for (Eigen::Index c = 0; c < m.mean_.rows(); ++c) {
    for (Eigen::Index j = 0; j < m.mean_.cols(); ++j) {
      m.mean_(c, j) = io::readF64(in);
      m.var_(c, j) = io::readF64(in);
    }
  }
  return m;
}

}  // namespace ispar::ml
