#include "ispar/pipeline/decision.hpp"

#include <filesystem>

#include "ispar/common/binary_io.hpp"
#include "ispar/common/error.hpp"
#include "ispar/ml/model_io.hpp"
#include "ispar/pipeline/artifacts.hpp"
#include "json.hpp"

namespace ispar::pipeline {

using nlohmann::json;

TaskModel makeTaskModel(Task task, features::FeatureSpec spec, std::vector<std::string> schema,
                        std::shared_ptr<const ml::TrainedModel> model) {
  TaskModel m;
  m.task = task;
  m.spec = std::move(spec);
  m.schema = std::move(schema);
  m.classNames = taskClassNames(task);
  m.dimension = static_cast<std::size_t>(model->dimension());
  if (model->classCount() != static_cast<int>(m.classNames.size())) {
    throw InvalidInput(toString(task) + " model has " + std::to_string(model->classCount()) + " classes, expected " +
                       std::to_string(m.classNames.size()));
  }
  m.predict = [model](const Eigen::RowVectorXd& x) { return model->predict(x); };
  return m;
}

namespace {

void checkModel(const TaskModel& m, Task expected, std::size_t windowLength) {
  const auto name = toString(expected);
  if (m.task != expected) throw InvalidInput(name + " slot holds a " + toString(m.task) + " model");
  if (!m.predict) throw InvalidInput(name + " model has no predictor");
  if (m.classNames != taskClassNames(expected)) throw InvalidInput(name + " model class names do not match the task");
  if (m.schema.size() != m.dimension) {
    throw InvalidInput("schema mismatch for " + name + ": " + std::to_string(m.schema.size()) +
                       " names but the model takes " + std::to_string(m.dimension) + " inputs");
  }
  if (features::featureSchema(m.spec, windowLength) != m.schema) {
    throw InvalidInput("schema mismatch for " + name + ": feature spec does not reproduce the training schema");
  }
}

int classify(const TaskModel& m, const detect::CaptureWindow& w) {
  const auto f = features::extractFeatures(w, m.spec);
  Eigen::RowVectorXd x(static_cast<Eigen::Index>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) x(static_cast<Eigen::Index>(i)) = f[i];
  const int c = m.predict(x);
  if (c < 0 || c >= static_cast<int>(m.classNames.size())) throw InvalidInput(toString(m.task) + " model returned a bad class");
  return c;
}

}  // namespace

void DecisionModels::validate() const {
  checkModel(detector, Task::Detect, windowLength);
  checkModel(locator, Task::Locate, windowLength);
  checkModel(identifier, Task::Identify, windowLength);
}

std::string Decision::label() const { return trip ? "trip:" + unit : "no-trip:" + disturbance; }

Decision threeStageDecision(const detect::CaptureWindow& window, const DecisionModels& models) {
  models.validate();
  for (const auto& ph : window.samples) {
    if (ph.size() != models.windowLength) throw InvalidInput("decision: window length does not match the models");
  }
  Decision d;
  ++d.detectorCalls;
  d.trip = classify(models.detector, window) == 1;
  if (d.trip) {
    ++d.locatorCalls;
    d.unit = models.locator.classNames[static_cast<std::size_t>(classify(models.locator, window))];
  } else {
    ++d.identifierCalls;
    d.disturbance = models.identifier.classNames[static_cast<std::size_t>(classify(models.identifier, window))];
  }
  return d;
}

DecisionModels loadDecisionModels(const std::string& root) {
  namespace fs = std::filesystem;
  const auto dir = fs::path(stagePath(root, "train"));
  DecisionModels dm;
  auto load = [&](Task t) {
    const auto name = toString(t);
    const auto descPath = dir / ("task_" + name + ".json");
    if (!fs::exists(descPath)) throw MissingArtifact("train", "no trained " + name + " model in " + dir.string() + "; run `ispar train` first");
    const auto j = json::parse(io::readFile(descPath.string()));
    auto spec = featureSpecFromJson(j.at("featureSpec").dump());
    auto schema = j.at("schema").get<std::vector<std::string>>();
    dm.windowLength = j.at("windowLength").get<std::size_t>();
    auto model = std::make_shared<const ml::TrainedModel>(ml::loadModel((dir / j.at("model").get<std::string>()).string()));
    return makeTaskModel(t, std::move(spec), std::move(schema), std::move(model));
  };
  dm.detector = load(Task::Detect);
  dm.locator = load(Task::Locate);
  dm.identifier = load(Task::Identify);
  dm.validate();
  return dm;
}

}  // namespace ispar::pipeline
