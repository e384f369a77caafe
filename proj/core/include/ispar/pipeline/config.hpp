#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ispar/detect/event_detector.hpp"
#include "ispar/eval/cross_validation.hpp"
#include "ispar/features/time_features.hpp"
#include "ispar/ml/model.hpp"
#include "ispar/sim/sweep.hpp"

namespace ispar::pipeline {

// The three applications. Each trains its own model on its own subset of
// captures.
enum class Task { Detect, Locate, Identify };
inline constexpr std::array<Task, 3> kTasks{Task::Detect, Task::Locate, Task::Identify};

std::string toString(Task t);
Task parseTask(const std::string& s);
std::vector<std::string> taskClassNames(Task t);

struct SimulationConfig {
  std::vector<sim::KindSampling> kinds;
  bool noise = true;
  double noiseSnrDb = 60.0;
};

struct FeaturesConfig {
  std::string mode = "combined";  // combined | time
  std::vector<std::string> poolWavelets{"db4", "sym2", "bior2.2", "coif1"};
  std::array<std::vector<features::TimeFamily>, 3> taskFamilies{
      std::vector<features::TimeFamily>{features::TimeFamily::F1, features::TimeFamily::F2, features::TimeFamily::F3},
      std::vector<features::TimeFamily>{features::TimeFamily::F1, features::TimeFamily::F3, features::TimeFamily::F4},
      std::vector<features::TimeFamily>{features::TimeFamily::F5, features::TimeFamily::F6, features::TimeFamily::F7}};
  features::TimeFeatureParams time;
};

struct WaveletSearchSettings {
  bool enabled = false;
  std::vector<std::string> wavelets{"db4", "sym2", "bior2.2"};
  int runs = 5;
};

struct SelectionConfig {
  std::string method = "mrmr";  // mrmr | rf-importance
  int count = 9;
  int bins = 10;
  WaveletSearchSettings waveletSearch;
};

struct PipelineConfig {
  std::uint64_t seed = 1;
  std::string stageDir = "ispar-run";
  SimulationConfig simulation;
  detect::EDConfig detector;
  FeaturesConfig features;
  SelectionConfig selection;
  std::vector<ml::ModelSpec> grid{ml::ModelSpec{}};
  std::vector<ml::ModelSpec> evaluate{ml::ModelSpec{}};
  int folds = 10;
  int timingRuns = 100;

  void validate() const;
};

// Strict JSON reader: unknown keys, wrong types and invalid values raise
// ConfigError naming the offending path.
PipelineConfig parseConfig(const std::string& jsonText);
PipelineConfig loadConfig(const std::string& path);

// Sorted-key JSON of every setting except stageDir, defaults included. Two
// configs that parse to the same values give the same text.
std::string canonicalJson(const PipelineConfig& cfg);
std::string configHash(const PipelineConfig& cfg);

// Settings each stage depends on, as canonical JSON. A stage key hashes its
// own section together with the keys of its upstream stages.
std::string stageSection(const PipelineConfig& cfg, const std::string& stage);

// Named seeds derived from the global seed.
std::uint64_t sweepSeed(const PipelineConfig& cfg);
std::uint64_t modelSeed(const PipelineConfig& cfg);
std::uint64_t cvSeed(const PipelineConfig& cfg);
std::uint64_t selectionSeed(const PipelineConfig& cfg);

}  // namespace ispar::pipeline
