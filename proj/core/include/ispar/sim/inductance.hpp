#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ispar/sim/rating.hpp"

namespace ispar::sim {

// Self/mutual inductance matrix of one faulted single-phase unit. Each
// winding is split in two sub-coils at the fault point; sub-coil k has
// leakage inductance leakage[k] and magnetizing inductance magnetizing[k],
// and L(j,k) = sqrt(magnetizing[j] * magnetizing[k]) off the diagonal.
//
// Coil order for three windings: 1,2 = winding 1; 3,4 = winding 2;
// 5,6 = winding 3. For two windings: 1,2 = winding 1; 3,4 = winding 2.
struct InductanceModel {
  int order = 0;
  Eigen::MatrixXd L;
  std::vector<double> leakage;
  std::vector<double> magnetizing;
  std::vector<double> fraction;  // share of its winding's turns held by each sub-coil
  double fault1 = 100.0;         // percent
  double fault2 = 100.0;
};

// Builds the 6x6 model of a three-winding unit. fault1 splits windings 1 and
// 3, fault2 splits winding 2 (percent of turns in the first sub-coil).
InductanceModel buildThreeWindingMatrix(const TransformerRating& rating, double fault1,
                                        double fault2);

// Builds the 4x4 model of a two-winding unit; fault1 splits both windings.
InductanceModel buildTwoWindingMatrix(const TransformerRating& rating, double fault1);

// Smallest eigenvalue of the symmetric matrix (self-adjoint solver).
double minEigenvalue(const Eigen::MatrixXd& L);

}  // namespace ispar::sim
