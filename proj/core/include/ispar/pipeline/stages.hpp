#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ispar/features/feature_matrix.hpp"
#include "ispar/ml/dataset.hpp"
#include "ispar/pipeline/artifacts.hpp"
#include "ispar/pipeline/config.hpp"

namespace ispar::pipeline {

struct StageContext {
  PipelineConfig config;
  std::string root;  // stage directory
  int jobs = 1;
  std::function<void(const std::string&)> log;  // progress lines; may be empty
};

// Runs one stage after checking its upstream. Artifacts depend only on the
// config and upstream artifacts; timings go to <root>/logs, which no stage
// record lists.
void runStage(const std::string& stage, const StageContext& ctx);
void runAll(const StageContext& ctx);

// Captures of the given task, labelled for it. Detect keeps every capture;
// locate keeps internal faults; identify keeps the four disturbances.
struct TaskSubset {
  std::vector<std::size_t> rows;  // into the extracted feature matrices
  std::vector<int> labels;
};
TaskSubset taskSubset(Task task, const std::vector<CaptureRecord>& captures,
                      const std::vector<std::size_t>& kept);

// The dataset a task's models are trained on: the task's time families plus
// its selected energies, columns in featureSchema order.
struct TaskData {
  ml::Dataset data;
  features::FeatureSpec spec;
  std::vector<std::size_t> captureIndex;  // source capture of each row
};
TaskData loadTaskData(const StageContext& ctx, Task task);

}  // namespace ispar::pipeline
