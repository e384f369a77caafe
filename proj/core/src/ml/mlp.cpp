#include "ispar/ml/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "ispar/common/binary_io.hpp"
#include "ispar/common/error.hpp"
#include "ispar/ml/cart.hpp"

namespace ispar::ml {

namespace {

void activate(Activation a, Eigen::MatrixXd& z) {
  switch (a) {
    case Activation::Relu: z = z.cwiseMax(0.0); break;
    case Activation::Tanh: z = z.array().tanh().matrix(); break;
    case Activation::Logistic: z = (1.0 / (1.0 + (-z.array()).exp())).matrix(); break;
  }
}

// Derivative expressed through the activation output h.
Eigen::ArrayXXd derivative(Activation a, const Eigen::MatrixXd& h) {
  switch (a) {
    case Activation::Relu: return (h.array() > 0.0).cast<double>();
    case Activation::Tanh: return 1.0 - h.array().square();
    case Activation::Logistic: return h.array() * (1.0 - h.array());
  }
  return {};
}

void softmaxRows(Eigen::MatrixXd& z) {
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double mx = z.row(i).maxCoeff();
    z.row(i) = (z.row(i).array() - mx).exp().matrix();
    z.row(i) /= z.row(i).sum();
  }
}

}  // namespace

std::string toString(Activation a) {
  switch (a) {
    case Activation::Relu: return "relu";
    case Activation::Tanh: return "tanh";
    case Activation::Logistic: return "logistic";
  }
  return "?";
}

Activation parseActivation(const std::string& s) {
  if (s == "relu") return Activation::Relu;
  if (s == "tanh") return Activation::Tanh;
  if (s == "logistic") return Activation::Logistic;
  throw InvalidInput("unknown activation '" + s + "'");
}

std::string toString(LrSchedule s) { return s == LrSchedule::Constant ? "constant" : "invscaling"; }

LrSchedule parseLrSchedule(const std::string& s) {
  if (s == "constant") return LrSchedule::Constant;
  if (s == "invscaling") return LrSchedule::InvScaling;
  throw InvalidInput("unknown learning-rate schedule '" + s + "'");
}

void MlpParams::validate() const {
  if (hiddenSizes.empty()) throw InvalidInput("mlp: at least one hidden layer is required");
  for (int h : hiddenSizes) {
    if (h < 1) throw InvalidInput("mlp: hidden layer sizes must be >= 1");
  }
  if (!(l2Alpha >= 0.0)) throw InvalidInput("mlp: l2Alpha must be >= 0");
  if (!(learningRate > 0.0)) throw InvalidInput("mlp: learningRate must be positive");
  if (epochs < 1 || batchSize < 1 || patience < 1) throw InvalidInput("mlp: epochs, batchSize and patience must be >= 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0 && epsilon > 0.0)) {
    throw InvalidInput("mlp: invalid Adam constants");
  }
}

Mlp Mlp::initialize(int inputs, int classes, const MlpParams& params, std::uint64_t seed) {
  params.validate();
  if (inputs < 1 || classes < 2) throw InvalidInput("mlp: need >= 1 input and >= 2 classes");
  Mlp m;
  m.activation_ = params.activation;
  std::vector<int> widths{inputs};
  widths.insert(widths.end(), params.hiddenSizes.begin(), params.hiddenSizes.end());
  widths.push_back(classes);
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const double fanIn = widths[l], fanOut = widths[l + 1];
    const double factor = params.activation == Activation::Logistic ? 2.0 : 6.0;
    const double bound = std::sqrt(factor / (fanIn + fanOut));
    std::uniform_real_distribution<double> u(-bound, bound);
    Eigen::MatrixXd W(widths[l], widths[l + 1]);
    for (Eigen::Index j = 0; j < W.cols(); ++j) {
      for (Eigen::Index i = 0; i < W.rows(); ++i) W(i, j) = u(rng);
    }
    Eigen::RowVectorXd b(widths[l + 1]);
    for (Eigen::Index j = 0; j < b.size(); ++j) b(j) = u(rng);
    m.W_.push_back(std::move(W));
    m.b_.push_back(std::move(b));
  }
  m.mean_ = Eigen::RowVectorXd::Zero(inputs);
  m.scale_ = Eigen::RowVectorXd::Ones(inputs);
  return m;
}

Eigen::MatrixXd Mlp::standardize(const Eigen::MatrixXd& X) const {
  return ((X.rowwise() - mean_).array().rowwise() / scale_.array()).matrix();
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& Xs, std::vector<Eigen::MatrixXd>* acts) const {
  Eigen::MatrixXd h = Xs;
  if (acts) acts->assign(1, h);
  for (std::size_t l = 0; l < W_.size(); ++l) {
    Eigen::MatrixXd z = (h * W_[l]).rowwise() + b_[l];
    if (l + 1 < W_.size()) {
      activate(activation_, z);
    } else {
      softmaxRows(z);
    }
    h = std::move(z);
    if (acts) acts->push_back(h);
  }
  return h;
}

double Mlp::loss(const Eigen::MatrixXd& X, const std::vector<int>& y, double l2Alpha) const {
  const Eigen::MatrixXd p = forward(standardize(X), nullptr);
  double ce = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) ce -= std::log(std::max(p(i, y[static_cast<std::size_t>(i)]), 1e-300));
  double reg = 0.0;
  for (const auto& W : W_) reg += W.squaredNorm();
  const auto n = static_cast<double>(p.rows());
  return ce / n + 0.5 * l2Alpha * reg / n;
}

double Mlp::lossAndGradient(const Eigen::MatrixXd& X, const std::vector<int>& y, double l2Alpha,
                            Eigen::VectorXd& grad) const {
  std::vector<Eigen::MatrixXd> acts;
  const Eigen::MatrixXd p = forward(standardize(X), &acts);
  const auto n = static_cast<double>(p.rows());
  double ce = 0.0, reg = 0.0;
  Eigen::MatrixXd delta = p;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    const int c = y[static_cast<std::size_t>(i)];
    ce -= std::log(std::max(p(i, c), 1e-300));
    delta(i, c) -= 1.0;
  }
  delta /= n;
  for (const auto& W : W_) reg += W.squaredNorm();

  std::vector<Eigen::MatrixXd> gW(W_.size());
  std::vector<Eigen::RowVectorXd> gb(W_.size());
  for (std::size_t l = W_.size(); l-- > 0;) {
    gW[l] = acts[l].transpose() * delta + (l2Alpha / n) * W_[l];
    gb[l] = delta.colwise().sum();
    if (l > 0) delta = ((delta * W_[l].transpose()).array() * derivative(activation_, acts[l])).matrix();
  }
  Eigen::Index size = 0;
  for (std::size_t l = 0; l < W_.size(); ++l) size += W_[l].size() + b_[l].size();
  grad.resize(size);
  Eigen::Index o = 0;
  for (std::size_t l = 0; l < W_.size(); ++l) {
    grad.segment(o, gW[l].size()) = Eigen::Map<const Eigen::VectorXd>(gW[l].data(), gW[l].size());
    o += gW[l].size();
    grad.segment(o, gb[l].size()) = gb[l].transpose();
    o += gb[l].size();
  }
  return ce / n + 0.5 * l2Alpha * reg / n;
}

Eigen::VectorXd Mlp::parameters() const {
  Eigen::Index size = 0;
  for (std::size_t l = 0; l < W_.size(); ++l) size += W_[l].size() + b_[l].size();
  Eigen::VectorXd p(size);
  Eigen::Index o = 0;
  for (std::size_t l = 0; l < W_.size(); ++l) {
    p.segment(o, W_[l].size()) = Eigen::Map<const Eigen::VectorXd>(W_[l].data(), W_[l].size());
    o += W_[l].size();
    p.segment(o, b_[l].size()) = b_[l].transpose();
    o += b_[l].size();
  }
  return p;
}

void Mlp::setParameters(const Eigen::VectorXd& p) {
  Eigen::Index o = 0;
  for (std::size_t l = 0; l < W_.size(); ++l) {
    if (o + W_[l].size() + b_[l].size() > p.size()) throw InvalidInput("mlp: parameter vector too short");
    Eigen::Map<Eigen::VectorXd>(W_[l].data(), W_[l].size()) = p.segment(o, W_[l].size());
    o += W_[l].size();
    b_[l] = p.segment(o, b_[l].size()).transpose();
    o += b_[l].size();
  }
  if (o != p.size()) throw InvalidInput("mlp: parameter vector size mismatch");
}

Mlp Mlp::fit(const Dataset& ds, const MlpParams& params, std::uint64_t seed) {
  ds.validate();
  Mlp m = initialize(static_cast<int>(ds.dimension()), std::max(ds.classCount, 2), params, seed);
  m.mean_ = ds.X.colwise().mean();
  for (Eigen::Index j = 0; j < ds.X.cols(); ++j) {
    const double sd = std::sqrt((ds.X.col(j).array() - m.mean_(j)).square().mean());
    m.scale_(j) = sd > 0.0 ? sd : 1.0;
  }

  const std::size_t n = ds.size();
  const auto batch = std::min<std::size_t>(static_cast<std::size_t>(params.batchSize), n);
  std::mt19937_64 rng(seed ^ 0x6d6c70ULL);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  Eigen::VectorXd theta = m.parameters();
  Eigen::VectorXd mom = Eigen::VectorXd::Zero(theta.size()), vel = mom, grad;
  double best = std::numeric_limits<double>::infinity();
  int stale = 0;
  long step = 0;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    const double lr = params.schedule == LrSchedule::Constant
                          ? params.learningRate
                          : params.learningRate / std::sqrt(static_cast<double>(epoch + 1));
    double epochLoss = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t end = std::min(n, start + batch);
      Eigen::MatrixXd Xb(static_cast<Eigen::Index>(end - start), ds.X.cols());
      std::vector<int> yb;
      for (std::size_t i = start; i < end; ++i) {
        Xb.row(static_cast<Eigen::Index>(i - start)) = ds.X.row(static_cast<Eigen::Index>(order[i]));
        yb.push_back(ds.y[order[i]]);
      }
      const double l = m.lossAndGradient(Xb, yb, params.l2Alpha, grad);
      if (!std::isfinite(l) || !grad.allFinite()) {
        throw TrainingAbort("mlp: non-finite loss at epoch " + std::to_string(epoch));
      }
      epochLoss += l * static_cast<double>(end - start);
      ++step;
      mom = params.beta1 * mom + (1.0 - params.beta1) * grad;
      vel = params.beta2 * vel + (1.0 - params.beta2) * grad.cwiseProduct(grad);
      const double c1 = 1.0 - std::pow(params.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(params.beta2, static_cast<double>(step));
      theta.array() -= lr * (mom.array() / c1) / ((vel.array() / c2).sqrt() + params.epsilon);
      m.setParameters(theta);
    }
    epochLoss /= static_cast<double>(n);
    m.lossCurve_.push_back(epochLoss);
    if (epochLoss > best - params.tolerance) {
      if (++stale >= params.patience) break;
    } else {
      stale = 0;
    }
    best = std::min(best, epochLoss);
  }
  return m;
}

std::vector<double> Mlp::proba(const Eigen::RowVectorXd& x) const {
  if (x.size() != mean_.size()) throw InvalidInput("mlp: query dimension mismatch");
  const Eigen::MatrixXd p = forward(standardize(x), nullptr);
  return {p.data(), p.data() + p.size()};
}

int Mlp::predict(const Eigen::RowVectorXd& x) const { return argmax(proba(x)); }

void Mlp::save(std::ostream& out) const {
  io::writeU32(out, static_cast<std::uint32_t>(activation_));
  io::writeU64(out, static_cast<std::uint64_t>(mean_.size()));
  for (Eigen::Index j = 0; j < mean_.size(); ++j) {
    io::writeF64(out, mean_(j));
    io::writeF64(out, scale_(j));
  }
  io::writeU64(out, W_.size());
  for (std::size_t l = 0; l < W_.size(); ++l) {
    io::writeU64(out, static_cast<std::uint64_t>(W_[l].rows()));
    io::writeU64(out, static_cast<std::uint64_t>(W_[l].cols()));
    io::writeF64s(out, {W_[l].data(), static_cast<std::size_t>(W_[l].size())});
    io::writeF64s(out, {b_[l].data(), static_cast<std::size_t>(b_[l].size())});
  }
  io::writeU64(out, lossCurve_.size());
  io::writeF64s(out, lossCurve_);
}

Mlp Mlp::load(std::istream& in) {
  Mlp m;
  const auto act = io::readU32(in);
  if (act > 2) throw FormatError("mlp: bad activation");
  m.activation_ = static_cast<Activation>(act);
  const auto d = io::readU64(in);
  if (d < 1 || d > (1ULL << 20)) throw FormatError("mlp: bad input width");
  m.mean_.resize(static_cast<Eigen::Index>(d));
  m.scale_.resize(static_cast<Eigen::Index>(d));
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(d); ++j) {
    m.mean_(j) = io::readF64(in);
    m.scale_(j) = io::readF64(in);
  }
  const auto layers = io::readU64(in);
  if (layers < 2 || layers > 64) throw FormatError("mlp: bad layer count");
  for (std::uint64_t l = 0; l < layers; ++l) {
    const auto r = io::readU64(in), c = io::readU64(in);
    if (r > (1ULL << 16) || c > (1ULL << 16)) throw FormatError("mlp: bad layer shape");
    const auto w = io::readF64s(in, r * c);
    const auto b = io::readF64s(in, c);
    m.W_.push_back(Eigen::Map<const Eigen::MatrixXd>(w.data(), static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
    m.b_.push_back(Eigen::Map<const Eigen::RowVectorXd>(b.data(), static_cast<Eigen::Index>(c)));
  }
  const auto curve = io::readU64(in);
  if (curve > (1ULL << 24)) throw FormatError("mlp: bad loss curve");
  m.lossCurve_ = io::readF64s(in, curve);
  return m;
}

}  // namespace ispar::ml
