#pragma once

#include <array>

namespace ispar::sim {

// Nameplate data of one single-phase transformer unit (one core).
// Two-winding units use index 0 and 1 only; the third entries are ignored.
struct TransformerRating {
  std::array<double, 3> voltage{};  // rated winding voltages, V rms
  std::array<double, 3> current{};  // rated winding currents, A rms
  double x12 = 0.10;                // pairwise leakage reactances, pu
  double x13 = 0.10;
  double x23 = 0.10;
  double magnetizingCurrent = 0.005;  // Im1 = Im2 = Im3, pu of rated current
  double frequency = 60.0;            // Hz

  double omega() const;

  // Star-equivalent leakage split X1, X2, X3 (pu).
  std::array<double, 3> leakageSplit() const;

  // Throws InvalidInput unless every voltage/current/frequency used by a
  // `windings`-winding unit is strictly positive and the leakage split is
  // non-negative.
  void validate(int windings) const;

  // Copy with winding `w` retapped by `ratio` (turns scaled, same power).
  TransformerRating withTap(int w, double ratio) const;
};

}  // namespace ispar::sim
