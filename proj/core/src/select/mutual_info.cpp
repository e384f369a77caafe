#include "ispar/select/mutual_info.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>

#include "ispar/common/error.hpp"

namespace ispar::select {

std::vector<int> equalFrequencyBins(std::span<const double> x, int bins) {
  if (bins < 1) throw InvalidInput("binning: bins must be >= 1");
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<int> out(n, 0);
  int bin = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (r == 0 || x[order[r]] != x[order[r - 1]]) {
      bin = static_cast<int>(r * static_cast<std::size_t>(bins) / n);
    }
    out[order[r]] = bin;
  }
  return out;
}

std::vector<std::vector<int>> discretizeColumns(const Eigen::MatrixXd& X, int bins) {
  std::vector<std::vector<int>> cols;
  cols.reserve(static_cast<std::size_t>(X.cols()));
  std::vector<double> col(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    for (Eigen::Index i = 0; i < X.rows(); ++i) col[static_cast<std::size_t>(i)] = X(i, j);
    cols.push_back(equalFrequencyBins(col, bins));
  }
  return cols;
}

double mutualInformation(const std::vector<int>& x, const std::vector<int>& y) {
  if (x.size() != y.size()) throw InvalidInput("mutual information: lengths differ");
  if (x.empty()) return 0.0;
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> px, py;
  for (std::size_t i = 0; i < x.size(); ++i) {
    joint[{x[i], y[i]}] += 1.0;
    px[x[i]] += 1.0;
    py[y[i]] += 1.0;
  }
  const auto n = static_cast<double>(x.size());
  double mi = 0.0;
  for (const auto& [k, c] : joint) {
    mi += c / n * std::log(c * n / (px[k.first] * py[k.second]));
  }
  return std::max(mi, 0.0);
}

}  // namespace ispar::select
