#include "ispar/sim/current_transformer.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "ispar/common/error.hpp"
#include "ispar/sim/saturation.hpp"

namespace ispar::sim {

void CtParams::validate() const {
  if (!(ratedCurrent > 0.0) || !(burdenResistance > 0.0) || !(kneeFactor > 0.0) ||
      !(ratioError > 0.0 && ratioError < 1.0) ||
      !(saturatedSlopeRatio > 0.0 && saturatedSlopeRatio < 1.0) ||
      !(remanence >= -0.9 && remanence <= 0.9)) {
    throw InvalidInput("current transformer: parameter out of range");
  }
}

namespace {

// Solves lambda + a * g(lambda) = b for the odd monotone map g given as a
// piecewise-linear lambda(i) table.
double solveFlux(const OddPiecewiseLinear& map, double a, double b) {
  const auto& pts = map.points();
  const double sign = b < 0.0 ? -1.0 : 1.0;
  const double target = std::abs(b);
  // h(lambda) = lambda + a * i(lambda) is increasing; find the bracketing breakpoint.
  std::size_t k = 1;
  while (k < pts.size() - 1 && pts[k].second + a * pts[k].first <= target) ++k;
  const auto& [i0, l0] = pts[k - 1];
  const auto& [i1, l1] = pts[k];
  const double di = (i1 - i0) / (l1 - l0);  // current per flux on this segment
  const double lambda = l0 + (target - l0 - a * i0) / (1.0 + a * di);
  return sign * lambda;
}

}  // namespace

std::vector<double> applyCurrentTransformer(std::span<const double> primary, const CtParams& ct,
                                            double dt, double frequency) {
  ct.validate();
  if (!(dt > 0.0) || !(frequency > 0.0)) throw InvalidInput("current transformer: bad time base");
  std::vector<double> out(primary.size(), 0.0);
  if (primary.empty()) return out;

  const double omega = 2.0 * std::numbers::pi * frequency;
  const double R = ct.burdenResistance;
  const double ipk = std::sqrt(2.0) * ct.ratedCurrent;
  const double lLinear = R / (omega * ct.ratioError);
  const double kneeFlux = R * ct.kneeFactor * ipk / omega;
  const double kneeCurrent = kneeFlux / lLinear;
  const double lSat = lLinear * ct.saturatedSlopeRatio;
  const OddPiecewiseLinear map({{0.0, 0.0},
                                {kneeCurrent, kneeFlux},
                                {kneeCurrent + 1e6 * ipk, kneeFlux + lSat * 1e6 * ipk}});

  // Fit the first cycle as a sinusoid to start on the linear steady state.
  const auto perCycle = static_cast<std::size_t>(std::lround(1.0 / (frequency * dt)));
  const std::size_t fit = std::min(perCycle, primary.size());
  std::complex<double> ip{};
  if (fit >= 4) {
    double cc = 0, ss = 0, cs = 0, yc = 0, ys = 0;
    for (std::size_t n = 0; n < fit; ++n) {
      const double t = static_cast<double>(n) * dt;
      const double c = std::cos(omega * t), s = std::sin(omega * t);
      cc += c * c;
      ss += s * s;
      cs += c * s;
      yc += primary[n] * c;
      ys += primary[n] * s;
    }
    const double det = cc * ss - cs * cs;
    if (std::abs(det) > 0.0) {
      const double a = (yc * ss - ys * cs) / det;   // cos coefficient
      const double b = (ys * cc - yc * cs) / det;   // sin coefficient
      ip = {a, -b};                                 // x(t) = Re(ip e^{jwt})
    }
  }
  const std::complex<double> lam = R * ip / std::complex<double>(R / lLinear, omega);
  double lambda = lam.real() + ct.remanence * kneeFlux;
  double is = primary[0] - map.inverse(lambda);
  out[0] = is;
  const double a = 0.5 * dt * R;
  for (std::size_t n = 1; n < primary.size(); ++n) {
    const double b = lambda + a * (primary[n] + is);
    lambda = solveFlux(map, a, b);
    is = primary[n] - map.inverse(lambda);
    if (!std::isfinite(is)) throw SimulationFault("current transformer: non-finite state");
    out[n] = is;
  }
  return out;
}

}  // namespace ispar::sim
