#include "ispar/sim/rating.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ispar/common/error.hpp"

namespace ispar::sim {

double TransformerRating::omega() const { return 2.0 * std::numbers::pi * frequency; }

std::array<double, 3> TransformerRating::leakageSplit() const {
  return {(x13 - x23 + x12) / 2.0, (x23 - x13 + x12) / 2.0, (x13 - x12 + x23) / 2.0};
}

void TransformerRating::validate(int windings) const {
  if (windings != 2 && windings != 3) throw InvalidInput("rating: windings must be 2 or 3");
  if (!(frequency > 0.0) || !std::isfinite(frequency)) {
    throw InvalidInput("rating: frequency must be positive");
  }
  if (!(magnetizingCurrent > 0.0)) {
    throw InvalidInput("rating: magnetizing current fraction must be positive");
  }
  for (int w = 0; w < windings; ++w) {
    if (!(voltage[w] > 0.0) || !(current[w] > 0.0) || !std::isfinite(voltage[w]) ||
        !std::isfinite(current[w])) {
      throw InvalidInput("rating: winding " + std::to_string(w + 1) +
                         " voltage and current must be positive");
    }
  }
  if (windings == 2) {
    if (!(x12 > 0.0)) throw InvalidInput("rating: x12 must be positive");
    return;
  }
  const auto split = leakageSplit();
  for (int k = 0; k < 3; ++k) {
    if (split[k] < 0.0) {
      throw InvalidInput("rating: leakage triple is physically inconsistent (X" +
                         std::to_string(k + 1) + " < 0)");
    }
  }
}

TransformerRating TransformerRating::withTap(int w, double ratio) const {
  if (!(ratio > 0.0)) throw InvalidInput("rating: tap ratio must be positive");
  TransformerRating r = *this;
  r.voltage[w] *= ratio;
  r.current[w] /= ratio;
  return r;
}

}  // namespace ispar::sim
