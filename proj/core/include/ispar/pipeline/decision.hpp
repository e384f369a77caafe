#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ispar/detect/event_detector.hpp"
#include "ispar/features/feature_matrix.hpp"
#include "ispar/ml/model.hpp"
#include "ispar/pipeline/config.hpp"

namespace ispar::pipeline {

// A trained classifier together with the features it was trained on.
struct TaskModel {
  Task task = Task::Detect;
  features::FeatureSpec spec;
  std::vector<std::string> schema;
  std::vector<std::string> classNames;
  std::size_t dimension = 0;
  std::function<int(const Eigen::RowVectorXd&)> predict;
};

TaskModel makeTaskModel(Task task, features::FeatureSpec spec, std::vector<std::string> schema,
                        std::shared_ptr<const ml::TrainedModel> model);

struct DecisionModels {
  TaskModel detector, locator, identifier;
  std::size_t windowLength = 0;

  // Each model's schema must equal the schema its feature spec produces for
  // windowLength, with matching dimension and class names.
  void validate() const;
};

struct Decision {
  bool trip = false;
  std::string unit;         // set when trip
  std::string disturbance;  // set when no trip
  int detectorCalls = 0, locatorCalls = 0, identifierCalls = 0;

  std::string label() const;
};

// Detector first; the locator runs only on a fault and the identifier only
// otherwise. Throws InvalidInput on a schema mismatch or a window of the
// wrong length.
Decision threeStageDecision(const detect::CaptureWindow& window, const DecisionModels& models);

// Models and feature descriptors written by the train stage under `root`.
DecisionModels loadDecisionModels(const std::string& root);

}  // namespace ispar::pipeline
