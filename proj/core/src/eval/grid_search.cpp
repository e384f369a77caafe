#include "ispar/eval/grid_search.hpp"

#include "ispar/common/error.hpp"

namespace ispar::eval {

GridResult gridSearch(const ml::Dataset& ds, const std::vector<ml::ModelSpec>& grid, const CVPlan& plan,
                      std::uint64_t modelSeed, int jobs) {
  if (grid.empty()) throw InvalidInput("grid search: empty grid");
  GridResult r;
  bool any = false;
  for (const auto& spec : grid) {
    GridCell cell;
    cell.spec = spec;
    try {
      cell.cv = crossValidate(spec, ds, plan, modelSeed, jobs);
    } catch (const TrainingAbort& e) {
      cell.failed = true;
      cell.error = e.what();
    }
    if (!cell.failed && (!any || cell.cv.mean > r.cells[r.best].cv.mean)) {
      r.best = r.cells.size();
      any = true;
    }
    r.cells.push_back(std::move(cell));
  }
  if (!any) throw TrainingAbort("grid search: every cell failed; first error: " + r.cells.front().error);
  return r;
}

}  // namespace ispar::eval
