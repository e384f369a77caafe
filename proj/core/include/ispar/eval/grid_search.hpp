#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ispar/eval/cross_validation.hpp"

namespace ispar::eval {

struct GridCell {
  ml::ModelSpec spec;
  bool failed = false;
  std::string error;
  CvResult cv;
};

struct GridResult {
  std::vector<GridCell> cells;  // grid order
  std::size_t best = 0;

  const GridCell& bestCell() const { return cells.at(best); }
};

// Mean CV balanced accuracy per cell with the same folds for every cell.
// Cells whose training aborts are marked failed and skipped; the best cell is
// the first one reaching the maximum. Throws TrainingAbort when every cell
// fails.
GridResult gridSearch(const ml::Dataset& ds, const std::vector<ml::ModelSpec>& grid, const CVPlan& plan,
                      std::uint64_t modelSeed, int jobs = 1);

}  // namespace ispar::eval
