#pragma once

#include <cstdint>

#include "ispar/ml/dataset.hpp"
#include "ispar/ml/random_forest.hpp"
#include "ispar/select/mrmr.hpp"

namespace ispar::select {

// Mean decrease in gini impurity, normalized to sum to 1. chosen lists every
// feature by descending importance (ties: lower index). A single-class
// dataset yields all-zero scores and a flag.
SelectionResult rfImportance(const ml::Dataset& ds, const ml::RfParams& params, std::uint64_t seed, int jobs = 1);

}  // namespace ispar::select
