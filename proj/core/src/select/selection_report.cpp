#include "ispar/select/selection_report.hpp"

#include <cstdio>
#include <sstream>

#include "ispar/common/error.hpp"

namespace ispar::select {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void writeParams(std::ostringstream& out, const ReportParams& params) {
  out << "parameters:";
  if (params.empty()) out << " none";
  for (const auto& [k, v] : params) out << ' ' << k << '=' << v;
  out << '\n';
}

}  // namespace

std::string selectionReport(const SelectionResult& r, const std::vector<std::string>& schema,
                            const ReportParams& params) {
  std::ostringstream out;
  out << "method: " << r.method << '\n';
  writeParams(out, params);
  for (const auto& f : r.flags) out << "flag: " << f << '\n';
  out << "chosen: " << r.chosen.size() << '\n';
  for (std::size_t i = 0; i < r.chosen.size(); ++i) {
    const auto j = r.chosen[i];
    if (j >= schema.size() || j >= r.scores.size()) throw InvalidInput("selection report: index out of schema");
    out << "  " << (i + 1) << ' ' << schema[j] << " score=" << num(r.scores[j]);
    if (i < r.stepScores.size()) out << " step=" << num(r.stepScores[i]);
    out << '\n';
  }
  return out.str();
}

std::string waveletSearchReport(const WaveletSearchResult& r, const ReportParams& params) {
  std::ostringstream out;
  out << "method: dt-wavelet-search\n";
  writeParams(out, params);
  out << "ranking: " << r.ranking.size() << '\n';
  for (std::size_t i = 0; i < r.ranking.size(); ++i) {
    const auto& s = r.ranking[i];
    out << "  " << (i + 1) << ' ' << s.spec.label() << " mean_bacc=" << num(s.meanBalancedAccuracy) << " runs=";
    for (std::size_t k = 0; k < s.runScores.size(); ++k) out << (k ? "," : "") << num(s.runScores[k]);
    out << '\n';
  }
  out << "top: " << r.top.size() << '\n';
  for (const auto& s : r.top) out << "  " << s.spec.label() << '\n';
  for (const auto& s : r.skipped) out << "skipped: " << s << '\n';
  return out.str();
}

}  // namespace ispar::select
