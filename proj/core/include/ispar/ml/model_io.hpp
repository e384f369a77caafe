#pragma once

#include <string>
#include <string_view>

#include "ispar/ml/model.hpp"

namespace ispar::ml {

// Binary model file: magic "ISPARMD1", u32 version, u32 kind tag, u64 seed,
// u32 input dimension, u32 class count, the hyperparameters of the kind,
// then the fitted parameters. Little-endian throughout.
std::string encodeModel(const TrainedModel& m);
TrainedModel decodeModel(std::string_view bytes);

// Human-readable sidecar: spec, seed, shape and a few fitted statistics.
std::string modelSummary(const TrainedModel& m);

// Writes `path` and `path + ".txt"`.
void saveModel(const std::string& path, const TrainedModel& m);
TrainedModel loadModel(const std::string& path);

}  // namespace ispar::ml
