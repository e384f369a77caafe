#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ispar/eval/cross_validation.hpp"
#include "ispar/eval/metrics.hpp"
#include "ispar/eval/timing.hpp"

namespace ispar::eval {

struct EvalReport {
  std::string task;
  std::string model;  // ModelSpec::describe()
  std::vector<std::string> classNames;
  Confusion confusion;
  double balancedAccuracy = 0.0;
  std::vector<double> perClassRecall;
  std::vector<double> foldScores;
  double foldStd = 0.0;
  std::optional<TimingBlock> timing;
};

EvalReport makeReport(const std::string& task, const std::string& model, std::vector<std::string> classNames,
                      const CvResult& cv);
// Single-split report from a confusion matrix.
EvalReport makeReport(const std::string& task, const std::string& model, std::vector<std::string> classNames,
                      const Confusion& confusion);

std::string toJson(const EvalReport& r);
EvalReport evalReportFromJson(const std::string& text);

// Confusion matrix with per-class recall and the balanced accuracy line.
std::string confusionTable(const EvalReport& r);
// One line per report: task, model, balanced accuracy and fold spread.
std::string comparisonTable(const std::vector<EvalReport>& reports);
// Columns: classifier, training (s), testing one (ms), testing all (s),
// feature extract (ms).
std::string timingTable(const std::vector<std::pair<std::string, TimingBlock>>& rows);
// task,model,class,support,tp,fn,fp,tn,recall,balanced_accuracy
std::string toCsv(const std::vector<EvalReport>& reports);

}  // namespace ispar::eval
