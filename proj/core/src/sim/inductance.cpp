#include "ispar/sim/inductance.hpp"

#include <cmath>

#include "ispar/common/error.hpp"

namespace ispar::sim {

namespace {

void checkPercent(double p, const char* name) {
  if (!(p >= 0.0 && p <= 100.0)) {
    throw InvalidInput(std::string("fault fraction ") + name + " must lie in [0, 100]");
  }
}

void fillMatrix(InductanceModel& m) {
  const int n = m.order;
  m.L.setZero(n, n);
  for (int j = 0; j < n; ++j) {
    m.L(j, j) = m.leakage[j] + m.magnetizing[j];
    for (int k = j + 1; k < n; ++k) {
      const double mjk = std::sqrt(m.magnetizing[j] * m.magnetizing[k]);
      m.L(j, k) = mjk;
      m.L(k, j) = mjk;
    }
  }
}

}  // namespace

InductanceModel buildThreeWindingMatrix(const TransformerRating& rating, double fault1,
                                        double fault2) {
  rating.validate(3);
  checkPercent(fault1, "fault1");
  checkPercent(fault2, "fault2");

  const double w = rating.omega();
  const double im = rating.magnetizingCurrent;
  const double fa = fault1 * 0.01;
  const double fb = 1.0 - fa;
  const double fc = fault2 * 0.01;
  const double fd = 1.0 - fc;
  const double fe = fault1 * 0.01;
  const double ff = 1.0 - fe;

  const auto [v1, v2, v3] = rating.voltage;
  const auto [i1, i2, i3] = rating.current;
  const double z1 = v1 / i1;
  const double z2 = v2 / i2;
  const double z3 = v3 / i3;
  const double l1 = v1 / (w * im * i1);
  const double l2 = v2 / (w * im * i2);
  const double l3 = v3 / (w * im * i3);
  const auto [x1, x2, x3] = rating.leakageSplit();
  const double lk1 = x1 * z1 / w;
  const double lk2 = x2 * z2 / w;
  const double lk3 = x3 * z3 / w;

  InductanceModel m;
  m.order = 6;
  m.fault1 = fault1;
  m.fault2 = fault2;
  m.fraction = {fa, fb, fc, fd, fe, ff};
  m.leakage = {lk1 * fa, lk1 * fb, lk2 * fc, lk2 * fd, lk3 * fe, lk3 * ff};
  m.magnetizing = {l1 * fa * fa, l1 * fb * fb, l2 * fc * fc,
                   l2 * fd * fd, l3 * fe * fe, l3 * ff * ff};
  fillMatrix(m);
  return m;
}

InductanceModel buildTwoWindingMatrix(const TransformerRating& rating, double fault1) {
  rating.validate(2);
  checkPercent(fault1, "fault1");

  const double w = rating.omega();
  const double im = rating.magnetizingCurrent;
  const double fa = fault1 * 0.01;
  const double fb = 1.0 - fa;
  const double fc = fa;
  const double fd = 1.0 - fc;

  const auto [v1, v2, v3] = rating.voltage;
  const auto [i1, i2, i3] = rating.current;
  const double l1 = v1 / (w * im * i1);
  const double l2 = v2 / (w * im * i2);
  // Two windings: the star split degenerates to X1 = X2 = x12 / 2.
  const double lk1 = 0.5 * rating.x12 * (v1 / i1) / w;
  const double lk2 = 0.5 * rating.x12 * (v2 / i2) / w;

  InductanceModel m;
  m.order = 4;
  m.fault1 = fault1;
  m.fault2 = fault1;
  m.fraction = {fa, fb, fc, fd};
  m.leakage = {lk1 * fa, lk1 * fb, lk2 * fc, lk2 * fd};
  m.magnetizing = {l1 * fa * fa, l1 * fb * fb, l2 * fc * fc, l2 * fd * fd};
  fillMatrix(m);
  return m;
}

double minEigenvalue(const Eigen::MatrixXd& L) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(L, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace ispar::sim
