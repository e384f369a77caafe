#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ispar/detect/event_detector.hpp"
#include "ispar/features/feature_matrix.hpp"
#include "ispar/pipeline/config.hpp"
#include "ispar/sim/event_spec.hpp"

namespace ispar::pipeline {

// simulate -> detect -> extract -> select -> train -> evaluate -> report
const std::vector<std::string>& stageOrder();
// Empty for simulate.
std::string upstreamOf(const std::string& stage);

// fnv1a64 of the stage's config section and the upstream key, as hex. Any
// change to a stage's settings or to anything upstream changes the key.
std::string stageKey(const PipelineConfig& cfg, const std::string& stage);

std::string stagePath(const std::string& root, const std::string& stage);
std::string logsPath(const std::string& root);

// stage.json: the stage key, the upstream key it was built from and an
// fnv1a64 digest of every artifact file it lists.
struct StageInfo {
  std::string stage;
  std::string key;
  std::string upstreamKey;
  std::map<std::string, std::string> files;  // name relative to the stage dir -> digest
};

std::string fileDigest(const std::string& path);
void writeStageInfo(const std::string& root, const StageInfo& info);
// Throws MissingArtifact when stage.json is absent or unreadable.
StageInfo readStageInfo(const std::string& root, const std::string& stage);

// Checks that the upstream of `stage` exists, was built with the current
// config and that its files are intact, recursively. Throws MissingArtifact
// naming the first stage that must be (re)run.
void requireUpstream(const std::string& root, const PipelineConfig& cfg, const std::string& stage);

// run_manifest.json at the stage root: config hash, derived seeds and the
// key of every completed stage. No timestamps, so reruns give the same bytes.
void writeRunManifest(const std::string& root, const PipelineConfig& cfg);

// One detected event with the labels of the record it came from.
struct CaptureRecord {
  std::size_t recordId = 0;
  sim::EventKind kind = sim::EventKind::Healthy;
  sim::Unit unit = sim::Unit::None;
  detect::CaptureWindow window;
};

// Binary capture set, little-endian:
//
//   0  char[8] magic "ISPARCP1"     16 u64 capture count
//   8  u32 version (1)              24..63 reserved (0)
//  12  u32 samples per phase
//
// then per capture: u64 record id, u32 kind, u32 unit, u64 start index,
// u32 trigger phase, u32 reserved, and the three phases as float64.
inline constexpr std::size_t kCaptureHeaderBytes = 64;
std::string encodeCaptures(const std::vector<CaptureRecord>& captures, std::size_t windowLength);
std::vector<CaptureRecord> decodeCaptures(std::string_view bytes, std::size_t* windowLength = nullptr);

// Feature spec <-> JSON text, used for the per-task descriptors written by
// the train stage.
std::string featureSpecToJson(const features::FeatureSpec& spec);
features::FeatureSpec featureSpecFromJson(const std::string& text);

}  // namespace ispar::pipeline
