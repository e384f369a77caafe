#include "ispar/features/time_features.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ispar/common/error.hpp"

namespace ispar::features {

namespace {

double quantile(std::vector<double> sorted, double q) {
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::string toString(TimeFamily f) { return "F" + std::to_string(static_cast<int>(f)); }

TimeFamily parseTimeFamily(const std::string& s) {
  if (s.size() == 2 && s[0] == 'F' && s[1] >= '1' && s[1] <= '7') {
    return static_cast<TimeFamily>(s[1] - '0');
  }
  throw InvalidInput("unknown time feature family '" + s + "'");
}

std::string toString(TrendAggregate a) {
  switch (a) {
    case TrendAggregate::Slope: return "slope";
    case TrendAggregate::Intercept: return "intercept";
    case TrendAggregate::StdErr: return "stderr";
  }
  return "?";
}

TrendAggregate parseTrendAggregate(const std::string& s) {
  if (s == "slope") return TrendAggregate::Slope;
  if (s == "intercept") return TrendAggregate::Intercept;
  if (s == "stderr") return TrendAggregate::StdErr;
  throw InvalidInput("unknown trend aggregate '" + s + "'");
}

void TimeFeatureParams::validate(std::size_t n) const {
  if (arOrder < 1 || 4 * static_cast<std::size_t>(arOrder) >= n) {
    throw InvalidInput("time features: arOrder must be >= 1 and below n/4");
  }
  auto checkPair = [](std::pair<double, double> q) {
    if (!(q.first >= 0.0 && q.first < q.second && q.second <= 1.0)) {
      throw InvalidInput("time features: quantile pair must satisfy 0 <= ql < qh <= 1");
    }
  };
  for (const auto& q : quantilePairs) checkPair(q);
  checkPair(corridor);
  if (trendWindow < 3 || static_cast<std::size_t>(trendWindow) > n) {
    throw InvalidInput("time features: trendWindow must lie in [3, n]");
  }
  for (int l : acLags) {
    if (l < 0 || static_cast<std::size_t>(l) >= n) throw InvalidInput("time features: bad lag");
  }
  if (acLag < 0 || static_cast<std::size_t>(acLag) >= n) throw InvalidInput("time features: bad lag");
  if (peakSupport < 1) throw InvalidInput("time features: peak support must be >= 1");
  if (chunkCount < 1 || static_cast<std::size_t>(chunkCount) > n) {
    throw InvalidInput("time features: chunkCount must lie in [1, n]");
  }
  if (chunk < 1 || chunk > chunkCount) throw InvalidInput("time features: chunk out of range");
}

ArFit arCoefficients(std::span<const double> x, int order) {
  if (order < 1 || x.size() <= 4 * static_cast<std::size_t>(order)) {
    throw InvalidInput("AR: need order >= 1 and more than 4*order samples");
  }
  const auto l = static_cast<Eigen::Index>(order);
  const auto rows = static_cast<Eigen::Index>(x.size()) - l;
  Eigen::MatrixXd lags(rows, l);
  Eigen::VectorXd y(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto t = static_cast<std::size_t>(r + l);
    y(r) = x[t];
    for (Eigen::Index i = 0; i < l; ++i) lags(r, i) = x[t - 1 - static_cast<std::size_t>(i)];
  }
  // Centering absorbs the intercept, so the ridge term never touches it.
  const Eigen::RowVectorXd mean = lags.colwise().mean();
  const double yMean = y.mean();
  const Eigen::MatrixXd c = lags.rowwise() - mean;
  Eigen::MatrixXd gram = c.transpose() * c;
  const Eigen::VectorXd rhs = c.transpose() * (y.array() - yMean).matrix();

  ArFit fit;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double maxEig = eig.eigenvalues().maxCoeff();
  if (!(maxEig > 0.0) || eig.eigenvalues().minCoeff() <= 1e-12 * maxEig) {
    gram.diagonal().array() += 1e-8;
    fit.ridge = true;
  }
  const Eigen::VectorXd beta = gram.ldlt().solve(rhs);
  fit.phi.resize(static_cast<std::size_t>(order) + 1);
  fit.phi[0] = yMean - mean.dot(beta);
  for (Eigen::Index i = 0; i < l; ++i) fit.phi[static_cast<std::size_t>(i) + 1] = beta(i);
  return fit;
}

double avgChangeQuantile(std::span<const double> x, double ql, double qh) {
  if (!(ql >= 0.0 && ql < qh && qh <= 1.0)) throw InvalidInput("change quantile: need 0 <= ql < qh <= 1");
  if (x.size() < 2) return 0.0;
  const std::vector<double> v(x.begin(), x.end());
  const double lo = quantile(v, ql), hi = quantile(v, qh);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t t = 0; t + 1 < x.size(); ++t) {
    const bool in0 = x[t] >= lo && x[t] <= hi;
    const bool in1 = x[t + 1] >= lo && x[t + 1] <= hi;
    if (in0 && in1) {
      sum += std::abs(x[t + 1] - x[t]);
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

double aggLinearTrend(std::span<const double> x, int window, TrendAggregate agg) {
  if (window < 3 || static_cast<std::size_t>(window) > x.size()) {
    throw InvalidInput("linear trend: window must lie in [3, length]");
  }
  const auto w = static_cast<std::size_t>(window);
  const double tMean = static_cast<double>(w - 1) / 2.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < w; ++i) sxx += (static_cast<double>(i) - tMean) * (static_cast<double>(i) - tMean);
  const std::size_t windows = x.size() / w;
  double total = 0.0;
  for (std::size_t k = 0; k < windows; ++k) {
    const auto seg = x.subspan(k * w, w);
    double mean = 0.0;
    for (double v : seg) mean += v;
    mean /= static_cast<double>(w);
    double sxy = 0.0;
    for (std::size_t i = 0; i < w; ++i) sxy += (static_cast<double>(i) - tMean) * (seg[i] - mean);
    const double slope = sxy / sxx;
    const double intercept = mean - slope * tMean;
    switch (agg) {
      case TrendAggregate::Slope: total += slope; break;
      case TrendAggregate::Intercept: total += intercept; break;
      case TrendAggregate::StdErr: {
        double sse = 0.0;
        for (std::size_t i = 0; i < w; ++i) {
          const double r = seg[i] - intercept - slope * static_cast<double>(i);
          sse += r * r;
        }
        total += std::sqrt(sse / static_cast<double>(w - 2) / sxx);
        break;
      }
    }
  }
  return total / static_cast<double>(windows);
}

double autocorrelation(std::span<const double> x, int lag, bool* zeroVariance) {
  if (lag < 0 || static_cast<std::size_t>(lag) >= x.size()) throw InvalidInput("autocorrelation: bad lag");
  const std::size_t n = x.size();
  const auto l = static_cast<std::size_t>(lag);
  double mu = 0.0;
  for (double v : x) mu += v;
  mu /= static_cast<double>(n);
  double var = 0.0;
  for (double v : x) var += (v - mu) * (v - mu);
  var /= static_cast<double>(n);
  if (zeroVariance) *zeroVariance = var == 0.0;
  if (var == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t t = 0; t + l < n; ++t) s += (x[t] - mu) * (x[t + l] - mu);
  return s / (static_cast<double>(n - l) * var);
}

int countPeaks(std::span<const double> x, int m) {
  if (m < 1) throw InvalidInput("countPeaks: support must be >= 1");
  const auto s = static_cast<std::size_t>(m);
  int peaks = 0;
  for (std::size_t t = s; t + s < x.size(); ++t) {
    bool peak = true;
    for (std::size_t j = 1; j <= s && peak; ++j) peak = x[t] > x[t - j] && x[t] > x[t + j];
    if (peak) ++peaks;
  }
  return peaks;
}

double energyRatioByChunks(std::span<const double> x, int chunkCount, int j, bool* zeroEnergy) {
  if (chunkCount < 1 || static_cast<std::size_t>(chunkCount) > x.size() || j < 1 || j > chunkCount) {
    throw InvalidInput("energy ratio: need 1 <= j <= chunkCount <= length");
  }
  double total = 0.0;
  for (double v : x) total += v * v;
  if (zeroEnergy) *zeroEnergy = total == 0.0;
  if (total == 0.0) return 0.0;
  const std::size_t n = x.size(), k = static_cast<std::size_t>(chunkCount);
  const std::size_t base = n / k, extra = n % k;
  const auto idx = static_cast<std::size_t>(j - 1);
  const std::size_t begin = idx * base + std::min(idx, extra);
  const std::size_t len = base + (idx < extra ? 1 : 0);
  double part = 0.0;
  for (std::size_t t = begin; t < begin + len; ++t) part += x[t] * x[t];
  return part / total;
}

double maximum(std::span<const double> x) {
  if (x.empty()) throw InvalidInput("maximum: empty signal");
  return *std::max_element(x.begin(), x.end());
}

std::vector<std::string> timeFeatureNames(const std::vector<TimeFamily>& families,
                                          const TimeFeatureParams& p, bool extended) {
  std::vector<std::string> out;
  for (const auto f : families) {
    const std::string tag = toString(f) + ".";
    switch (f) {
      case TimeFamily::F1:
        if (extended) {
          for (int i = 0; i <= p.arOrder; ++i) out.push_back(tag + "ar" + std::to_string(i));
        } else {
          out.push_back(tag + "ar1");
        }
        break;
      case TimeFamily::F2: out.push_back(tag + "max"); break;
      case TimeFamily::F3:
        out.push_back(tag + "cq" + fmt(p.corridor.first) + "-" + fmt(p.corridor.second));
        if (extended) {
          for (const auto& q : p.quantilePairs) out.push_back(tag + "cq" + fmt(q.first) + "-" + fmt(q.second));
        }
        break;
      case TimeFamily::F4:
        if (extended) {
          for (auto a : {TrendAggregate::Slope, TrendAggregate::Intercept, TrendAggregate::StdErr}) {
            out.push_back(tag + toString(a));
          }
        } else {
          out.push_back(tag + toString(p.trendAggregate));
        }
        break;
      case TimeFamily::F5:
        if (extended) {
          for (int l : p.acLags) out.push_back(tag + "lag" + std::to_string(l));
        } else {
          out.push_back(tag + "lag" + std::to_string(p.acLag));
        }
        break;
      case TimeFamily::F6: out.push_back(tag + "peaks" + std::to_string(p.peakSupport)); break;
      case TimeFamily::F7:
        if (extended) {
          for (int j = 1; j <= p.chunkCount; ++j) {
            out.push_back(tag + "chunk" + std::to_string(j) + "of" + std::to_string(p.chunkCount));
          }
        } else {
          out.push_back(tag + "chunk" + std::to_string(p.chunk) + "of" + std::to_string(p.chunkCount));
        }
        break;
    }
  }
  return out;
}

std::vector<double> timeFeatures(std::span<const double> x, const std::vector<TimeFamily>& families,
                                 const TimeFeatureParams& p, bool extended) {
  p.validate(x.size());
  std::vector<double> out;
  for (const auto f : families) {
    switch (f) {
      case TimeFamily::F1: {
        const auto fit = arCoefficients(x, p.arOrder);
        if (extended) {
          out.insert(out.end(), fit.phi.begin(), fit.phi.end());
        } else {
          out.push_back(fit.phi[1]);
        }
        break;
      }
      case TimeFamily::F2: out.push_back(maximum(x)); break;
      case TimeFamily::F3:
        out.push_back(avgChangeQuantile(x, p.corridor.first, p.corridor.second));
        if (extended) {
          for (const auto& q : p.quantilePairs) out.push_back(avgChangeQuantile(x, q.first, q.second));
        }
        break;
      case TimeFamily::F4:
        if (extended) {
          for (auto a : {TrendAggregate::Slope, TrendAggregate::Intercept, TrendAggregate::StdErr}) {
            out.push_back(aggLinearTrend(x, p.trendWindow, a));
          }
        } else {
          out.push_back(aggLinearTrend(x, p.trendWindow, p.trendAggregate));
        }
        break;
      case TimeFamily::F5:
        if (extended) {
          for (int l : p.acLags) out.push_back(autocorrelation(x, l));
        } else {
          out.push_back(autocorrelation(x, p.acLag));
        }
        break;
      case TimeFamily::F6: out.push_back(static_cast<double>(countPeaks(x, p.peakSupport))); break;
      case TimeFamily::F7:
        if (extended) {
          for (int j = 1; j <= p.chunkCount; ++j) out.push_back(energyRatioByChunks(x, p.chunkCount, j));
        } else {
          out.push_back(energyRatioByChunks(x, p.chunkCount, p.chunk));
        }
        break;
    }
  }
  return out;
}

}  // namespace ispar::features
