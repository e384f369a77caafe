#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ispar/select/mrmr.hpp"
#include "ispar/select/wavelet_search.hpp"

namespace ispar::select {

using ReportParams = std::vector<std::pair<std::string, std::string>>;

// Plain-text block: method, parameters, then one line per chosen feature with
// its schema name and score. Numbers use %.6g, so the text is stable.
std::string selectionReport(const SelectionResult& r, const std::vector<std::string>& schema,
                            const ReportParams& params = {});
std::string waveletSearchReport(const WaveletSearchResult& r, const ReportParams& params = {});

}  // namespace ispar::select
