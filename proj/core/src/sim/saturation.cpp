#include "ispar/sim/saturation.hpp"

#include <algorithm>
#include <cmath>

#include "ispar/common/error.hpp"

namespace ispar::sim {

OddPiecewiseLinear::OddPiecewiseLinear(std::vector<std::pair<double, double>> points)
    : points_(std::move(points)) {
  if (points_.size() < 2) throw InvalidInput("piecewise-linear map needs at least two points");
  if (points_.front().first != 0.0 || points_.front().second != 0.0) {
    throw InvalidInput("piecewise-linear map must start at the origin");
  }
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i].first > points_[i - 1].first) ||
        !(points_[i].second > points_[i - 1].second)) {
      throw InvalidInput("piecewise-linear breakpoints must be strictly increasing");
    }
  }
}

OddPiecewiseLinear::Segment OddPiecewiseLinear::segmentAt(double x) const {
  const double ax = std::abs(x);
  const std::size_t n = points_.size();
  // Segment k (1-based) spans [points[k-1], points[k]); the last extends past the end.
  std::size_t k = 1;
  while (k < n - 1 && ax >= points_[k].first) ++k;
  return segment(x < 0.0 ? -static_cast<int>(k) : static_cast<int>(k));
}

OddPiecewiseLinear::Segment OddPiecewiseLinear::segment(int id) const {
  const auto k = static_cast<std::size_t>(id < 0 ? -id : id);
  if (k < 1 || k >= points_.size()) throw InvalidInput("piecewise-linear segment id out of range");
  const auto& [x0, y0] = points_[k - 1];
  const auto& [x1, y1] = points_[k];
  const double slope = (y1 - y0) / (x1 - x0);
  const double intercept = y0 - slope * x0;
  if (id < 0) return {id, slope, -intercept};
  return {id, slope, intercept};
}

double OddPiecewiseLinear::operator()(double x) const {
  const auto s = segmentAt(x);
  return s.intercept + s.slope * x;
}

double OddPiecewiseLinear::inverse(double y) const {
  const double ay = std::abs(y);
  const std::size_t n = points_.size();
  std::size_t k = 1;
  while (k < n - 1 && ay >= points_[k].second) ++k;
  const auto& [x0, y0] = points_[k - 1];
  const auto& [x1, y1] = points_[k];
  const double x = x0 + (ay - y0) * (x1 - x0) / (y1 - y0);
  return y < 0.0 ? -x : x;
}

void SaturationCurve::validate() const {
  if (breakpoints.size() < 2) throw InvalidInput("saturation curve needs at least two breakpoints");
  if (breakpoints.front().h != 0.0 || breakpoints.front().b != 0.0) {
    throw InvalidInput("saturation curve must start at (0, 0) (odd symmetry)");
  }
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i].h > breakpoints[i - 1].h) || !(breakpoints[i].b > breakpoints[i - 1].b)) {
      throw InvalidInput("saturation curve breakpoints must increase in both H and B");
    }
  }
  if (!(ratedPeakFluxDensity > 0.0) || ratedPeakFluxDensity >= breakpoints.back().b * 10.0) {
    throw InvalidInput("rated peak flux density out of range");
  }
  for (double r : residualFlux) {
    if (!(r >= -0.8 && r <= 0.8)) throw InvalidInput("residual flux must lie in [-0.8, 0.8]");
  }
}

SaturationCurve SaturationCurve::defaultCurve() {
  SaturationCurve c;
  c.breakpoints = {{0.0, 0.0},     {40.0, 1.65},    {80.0, 1.78},     {200.0, 1.86},
                   {1000.0, 1.93}, {10000.0, 2.02}, {100000.0, 2.14}};
  c.ratedPeakFluxDensity = 1.6;
  return c;
}

CoreCharacteristic::CoreCharacteristic(const SaturationCurve& curve,
                                       double unsaturatedInductance, double ratedPeakFlux)
    : unsaturated_(unsaturatedInductance), ratedPeakFlux_(ratedPeakFlux) {
  curve.validate();
  if (!(unsaturatedInductance > 0.0) || !(ratedPeakFlux > 0.0)) {
    throw InvalidInput("core characteristic needs positive inductance and flux");
  }
  const double fluxScale = ratedPeakFlux / curve.ratedPeakFluxDensity;  // Wb-turn per T
  const auto& first = curve.breakpoints[1];
  const double currentScale = (first.b / first.h) * fluxScale / unsaturatedInductance;  // A per A/m
  std::vector<std::pair<double, double>> pts;
  pts.reserve(curve.breakpoints.size());
  for (const auto& p : curve.breakpoints) pts.emplace_back(p.h * currentScale, p.b * fluxScale);
  map_ = OddPiecewiseLinear(std::move(pts));
}

}  // namespace ispar::sim
