#include "ispar/select/rf_importance.hpp"

#include <algorithm>
#include <numeric>

namespace ispar::select {

SelectionResult rfImportance(const ml::Dataset& ds, const ml::RfParams& params, std::uint64_t seed, int jobs) {
  ds.validate();
  SelectionResult r;
  r.method = "rf-importance";
  const auto counts = ds.classCounts();
  const auto present = std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; });
  if (present < 2) {
    r.scores.assign(ds.dimension(), 0.0);
    r.flags.push_back("single class present; importances are zero");
  } else {
    r.scores = ml::RandomForest::fit(ds, params, seed, jobs).importance();
  }
  r.chosen.resize(ds.dimension());
  std::iota(r.chosen.begin(), r.chosen.end(), std::size_t{0});
  std::stable_sort(r.chosen.begin(), r.chosen.end(),
                   [&](std::size_t a, std::size_t b) { return r.scores[a] > r.scores[b]; });
  for (auto j : r.chosen) r.stepScores.push_back(r.scores[j]);
  return r;
}

}  // namespace ispar::select
