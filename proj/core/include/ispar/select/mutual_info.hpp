#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace ispar::select {

// Equal-frequency bins by rank: bin = floor(rank * bins / n), with tied
// values sharing the bin of their first rank. Depends only on the ordering
// of x, so strictly increasing transforms leave it unchanged.
std::vector<int> equalFrequencyBins(std::span<const double> x, int bins = 10);
std::vector<std::vector<int>> discretizeColumns(const Eigen::MatrixXd& X, int bins = 10);

// I(x; y) in nats from empirical joint counts.
double mutualInformation(const std::vector<int>& x, const std::vector<int>& y);

}  // namespace ispar::select
