#include "ispar/ml/knn.hpp"

#include <algorithm>
#include <numeric>

#include "ispar/common/binary_io.hpp"
#include "ispar/common/error.hpp"
#include "ispar/ml/cart.hpp"

namespace ispar::ml {

std::string toString(Metric m) { return m == Metric::L1 ? "l1" : "l2"; }

Metric parseMetric(const std::string& s) {
  if (s == "l1" || s == "L1" || s == "manhattan") return Metric::L1;
  if (s == "l2" || s == "L2" || s == "euclidean") return Metric::L2;
  throw InvalidInput("unknown metric '" + s + "'");
}

void KnnParams::validate() const {
  if (k < 1) throw InvalidInput("knn: k must be >= 1");
}

Knn Knn::fit(const Dataset& ds, const KnnParams& params) {
  ds.validate();
  params.validate();
  if (static_cast<std::size_t>(params.k) > ds.size()) throw InvalidInput("knn: k exceeds the training size");
  Knn m;
  m.params_ = params;
  m.y_ = ds.y;
  m.classCount_ = ds.classCount;
  const auto d = ds.X.cols();
  m.mean_ = Eigen::RowVectorXd::Zero(d);
  m.scale_ = Eigen::RowVectorXd::Ones(d);
  if (params.standardize) {
    m.mean_ = ds.X.colwise().mean();
    for (Eigen::Index j = 0; j < d; ++j) {
      const double var = (ds.X.col(j).array() - m.mean_(j)).square().mean();
      m.scale_(j) = var > 0.0 ? std::sqrt(var) : 1.0;
    }
  }
  m.X_.resize(ds.X.rows(), d);
  for (Eigen::Index i = 0; i < ds.X.rows(); ++i) m.X_.row(i) = m.transform(ds.X.row(i));
  return m;
}

Eigen::RowVectorXd Knn::transform(const Eigen::RowVectorXd& x) const {
  if (!params_.standardize) return x;
  return (x - mean_).cwiseQuotient(scale_);
}

std::vector<std::size_t> Knn::neighbours(const Eigen::RowVectorXd& x) const {
  if (x.size() != X_.cols()) throw InvalidInput("knn: query dimension mismatch");
  const Eigen::RowVectorXd q = transform(x);
  const auto n = static_cast<std::size_t>(X_.rows());
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto diff = X_.row(static_cast<Eigen::Index>(i)) - q;
    dist[i] = params_.metric == Metric::L1 ? diff.cwiseAbs().sum() : diff.squaredNorm();
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const auto k = static_cast<std::size_t>(params_.k);
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    [&](std::size_t a, std::size_t b) { return dist[a] < dist[b] || (dist[a] == dist[b] && a < b); });
  idx.resize(k);
  return idx;
}

std::vector<double> Knn::proba(const Eigen::RowVectorXd& x) const {
  std::vector<double> votes(static_cast<std::size_t>(classCount_), 0.0);
  for (auto i : neighbours(x)) votes[static_cast<std::size_t>(y_[i])] += 1.0;
  for (auto& v : votes) v /= static_cast<double>(params_.k);
  return votes;
}

int Knn::predict(const Eigen::RowVectorXd& x) const { return argmax(proba(x)); }

void Knn::save(std::ostream& out) const {
  io::writeU32(out, static_cast<std::uint32_t>(params_.k));
  io::writeU32(out, params_.metric == Metric::L1 ? 1 : 2);
  io::writeU32(out, params_.standardize ? 1 : 0);
  io::writeU32(out, static_cast<std::uint32_t>(classCount_));
  io::writeU64(out, static_cast<std::uint64_t>(X_.rows()));
  io::writeU64(out, static_cast<std::uint64_t>(X_.cols()));
  for (Eigen::Index j = 0; j < X_.cols(); ++j) {
    io::writeF64(out, mean_(j));
    io::writeF64(out, scale_(j));
  }
  for (Eigen::Index i = 0; i < X_.rows(); ++i) {
    io::writeI64(out, y_[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < X_.cols(); ++j) io::writeF64(out, X_(i, j));
  }
}

Knn Knn::load(std::istream& in) {
  Knn m;
  m.params_.k = static_cast<int>(io::readU32(in));
  m.params_.metric = io::readU32(in) == 1 ? Metric::L1 : Metric::L2;
  m.params_.standardize = io::readU32(in) != 0;
  m.classCount_ = static_cast<int>(io::readU32(in));
  const auto n = io::readU64(in), d = io::readU64(in);
  if (n > (1ULL << 28) || d > (1ULL << 20)) throw FormatError("knn: bad shape");
  m.mean_.resize(static_cast<Eigen::Index>(d));
  m.scale_.resize(static_cast<Eigen::Index>(d));
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(d); ++j) {
    m.mean_(j) = io::readF64(in);
    m.scale_(j) = io::readF64(in);
  }
  m.X_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
    m.y_.push_back(static_cast<int>(io::readI64(in)));
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(d); ++j) m.X_(i, j) = io::readF64(in);
  }
  return m;
}

}  // namespace ispar::ml
