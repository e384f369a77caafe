#pragma once

#include <span>
#include <vector>

namespace ispar::sim {

// Primary-referred CT with one saturable magnetizing branch and a resistive
// burden. The magnetizing characteristic is linear up to the knee, then
// nearly flat.
struct CtParams {
  double ratedCurrent = 1255.0;     // A rms, primary
  double burdenResistance = 2.0;    // ohm, primary-referred
  double kneeFactor = 20.0;         // symmetrical multiple of rated current at the knee
  double ratioError = 0.005;        // linear-region magnetizing share at rated current
  double saturatedSlopeRatio = 2e-4;  // saturated over unsaturated inductance
  double remanence = 0.0;           // initial DC flux, fraction of knee flux, in [-0.9, 0.9]

  void validate() const;
};

// Secondary current (primary amperes) for a sampled primary current. The
// first `steadyCycles` cycles are assumed to be a steady sinusoid and fix the
// initial flux so the response starts without a DC transient.
std::vector<double> applyCurrentTransformer(std::span<const double> primary, const CtParams& ct,
                                            double dt, double frequency);

}  // namespace ispar::sim
