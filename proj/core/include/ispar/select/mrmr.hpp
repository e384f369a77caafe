#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace ispar::select {

struct SelectionResult {
  std::string method;                // mrmr | rf-importance | dt-wavelet-search
  std::vector<std::size_t> chosen;   // in selection (or rank) order
  std::vector<double> scores;        // one per candidate feature
  std::vector<double> stepScores;    // criterion value when each chosen feature was picked
  std::vector<std::string> flags;
};

// Greedy difference-form mRMR on discretized columns. The first pick
// maximizes I(x; y); each next maximizes I(x; y) minus the mean I(x; x_s)
// over the chosen set. Ties go to the lower index. scores = I(x; y).
SelectionResult mrmrSelectDiscrete(const std::vector<std::vector<int>>& columns, const std::vector<int>& y,
                                   int count, int jobs = 1);

// Equal-frequency binning with `bins` bins, then mrmrSelectDiscrete.
SelectionResult mrmrSelect(const Eigen::MatrixXd& X, const std::vector<int>& y, int count, int bins = 10,
                           int jobs = 1);

}  // namespace ispar::select
