#include "ispar/select/mrmr.hpp"

#include "ispar/common/error.hpp"
#include "ispar/common/parallel.hpp"
#include "ispar/select/mutual_info.hpp"

namespace ispar::select {

SelectionResult mrmrSelectDiscrete(const std::vector<std::vector<int>>& columns, const std::vector<int>& y,
                                   int count, int jobs) {
  const std::size_t d = columns.size();
  if (count < 1 || static_cast<std::size_t>(count) > d) throw InvalidInput("mrmr: count must lie in [1, features]");
  SelectionResult r;
  r.method = "mrmr";
  r.scores.resize(d);
  parallelFor(d, jobs, [&](std::size_t j) { r.scores[j] = mutualInformation(columns[j], y); });

  std::vector<double> redundancy(d, 0.0);
  std::vector<bool> taken(d, false);
  for (int step = 0; step < count; ++step) {
    std::size_t best = d;
    double bestScore = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      if (taken[j]) continue;
      const double s = step == 0 ? r.scores[j] : r.scores[j] - redundancy[j] / static_cast<double>(step);
      if (best == d || s > bestScore) {
        best = j;
        bestScore = s;
      }
    }
    taken[best] = true;
    r.chosen.push_back(best);
    r.stepScores.push_back(bestScore);
    if (step + 1 == count) break;
    std::vector<double> add(d, 0.0);
    parallelFor(d, jobs, [&](std::size_t j) {
      if (!taken[j]) add[j] = mutualInformation(columns[j], columns[best]);
    });
    for (std::size_t j = 0; j < d; ++j) redundancy[j] += add[j];
  }
  return r;
}

SelectionResult mrmrSelect(const Eigen::MatrixXd& X, const std::vector<int>& y, int count, int bins, int jobs) {
  if (static_cast<std::size_t>(X.rows()) != y.size()) throw InvalidInput("mrmr: X rows and labels differ");
  return mrmrSelectDiscrete(discretizeColumns(X, bins), y, count, jobs);
}

}  // namespace ispar::select
