#pragma once

#include <array>
#include <utility>
#include <vector>

namespace ispar::sim {

// Odd-symmetric monotone piecewise-linear map y = f(x). Breakpoints are given
// for x >= 0 starting at the origin; the last segment extends to infinity
// with its own slope, and f(-x) = -f(x).
class OddPiecewiseLinear {
 public:
  struct Segment {
    int id = 0;  // signed: positive side 1..n, negative side -1..-n
    double slope = 0.0;
    double intercept = 0.0;  // y = intercept + slope * x on this segment
  };

  OddPiecewiseLinear() = default;
  explicit OddPiecewiseLinear(std::vector<std::pair<double, double>> points);

  double operator()(double x) const;
  double inverse(double y) const;
  Segment segmentAt(double x) const;
  // Segment by signed id; ids 1 and -1 name the same line through the origin.
  Segment segment(int id) const;
  int segmentCount() const { return static_cast<int>(points_.size()) - 1; }
  const std::vector<std::pair<double, double>>& points() const { return points_; }

 private:
  std::vector<std::pair<double, double>> points_;
};

struct BHPoint {
  double h = 0.0;  // A/m
  double b = 0.0;  // T
};

// Core B-H characteristic plus per-phase remanence used when a unit is
// energized from rest.
struct SaturationCurve {
  std::vector<BHPoint> breakpoints;       // starts at (0, 0)
  double ratedPeakFluxDensity = 1.6;      // T at rated voltage
  std::array<double, 3> residualFlux{};   // fraction of peak rated flux, per phase

  void validate() const;

  // Seven-breakpoint default: linear to about 1.03 pu flux, air-core slope at the end.
  static SaturationCurve defaultCurve();
};

// A curve scaled to one core: flux linkage of winding 1 as a function of the
// net magnetizing current referred to winding 1.
class CoreCharacteristic {
 public:
  CoreCharacteristic() = default;
  // `unsaturatedInductance` fixes the slope of the first segment,
  // `ratedPeakFlux` the flux linkage mapped to ratedPeakFluxDensity.
  CoreCharacteristic(const SaturationCurve& curve, double unsaturatedInductance,
                     double ratedPeakFlux);

  double flux(double current) const { return map_(current); }
  double current(double flux) const { return map_.inverse(flux); }
  OddPiecewiseLinear::Segment segmentAt(double current) const { return map_.segmentAt(current); }
  const OddPiecewiseLinear& map() const { return map_; }
  double unsaturatedInductance() const { return unsaturated_; }
  double ratedPeakFlux() const { return ratedPeakFlux_; }

 private:
  OddPiecewiseLinear map_;
  double unsaturated_ = 0.0;
  double ratedPeakFlux_ = 0.0;
};

}  // namespace ispar::sim
