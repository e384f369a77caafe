#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ispar::features {

// Seven time-domain families. F1 is the AR model and F3 the change-quantile
// corridor, following the family definitions rather than the earlier list.
enum class TimeFamily { F1 = 1, F2, F3, F4, F5, F6, F7 };

std::string toString(TimeFamily f);
TimeFamily parseTimeFamily(const std::string& s);

enum class TrendAggregate { Slope, Intercept, StdErr };

std::string toString(TrendAggregate a);
TrendAggregate parseTrendAggregate(const std::string& s);

struct TimeFeatureParams {
  int arOrder = 4;
  std::vector<std::pair<double, double>> quantilePairs{
      {0.0, 0.2}, {0.2, 0.4}, {0.4, 0.6}, {0.6, 0.8}, {0.8, 1.0}};
  std::pair<double, double> corridor{0.0, 1.0};  // F3 default scalar
  int trendWindow = 20;
  TrendAggregate trendAggregate = TrendAggregate::Slope;  // F4 default scalar
  std::vector<int> acLags{1, 2, 5};
  int acLag = 5;  // F5 default scalar
  int peakSupport = 3;
  int chunkCount = 10;
  int chunk = 1;  // F7 default scalar, 1-based

  // Checks the invariants against a window of n samples.
  void validate(std::size_t n) const;
};

struct ArFit {
  std::vector<double> phi;  // phi_0 (intercept) .. phi_order
  bool ridge = false;       // normal equations were singular; lambda = 1e-8 used
};

// Least squares x_t ~ phi_0 + sum_i phi_i x_{t-i}, t = order .. n-1. The
// ridge fallback penalizes only the lag coefficients.
ArFit arCoefficients(std::span<const double> x, int order);

// Mean |x_{t+1} - x_t| over consecutive pairs with both samples inside
// [quantile(ql), quantile(qh)]; 0 without such pairs. Quantiles use linear
// interpolation between order statistics.
double avgChangeQuantile(std::span<const double> x, double ql, double qh);

// Mean over consecutive non-overlapping windows of the per-window OLS
// statistic (index 0 .. window-1 as regressor). A trailing partial window is
// dropped.
double aggLinearTrend(std::span<const double> x, int window, TrendAggregate agg);

// Population-variance autocorrelation; 0 (and *flag set) when the variance
// is 0.
double autocorrelation(std::span<const double> x, int lag, bool* zeroVariance = nullptr);

// Indices t with x_t strictly above every neighbour within distance m; only
// t whose full 2m neighbourhood lies inside the signal are considered.
int countPeaks(std::span<const double> x, int m);

// Energy of chunk j (1-based) over total energy. Chunk sizes differ by at
// most one, longer chunks first. 0 (and *flag set) for a zero signal.
double energyRatioByChunks(std::span<const double> x, int chunkCount, int j,
                           bool* zeroEnergy = nullptr);

double maximum(std::span<const double> x);

// Names (without phase prefix) and values for the requested families. The
// default schema has one scalar per family; the extended schema has every
// AR coefficient, corridor, aggregate, lag and chunk.
std::vector<std::string> timeFeatureNames(const std::vector<TimeFamily>& families,
                                          const TimeFeatureParams& p, bool extended = false);
std::vector<double> timeFeatures(std::span<const double> x, const std::vector<TimeFamily>& families,
                                 const TimeFeatureParams& p, bool extended = false);

}  // namespace ispar::features
