#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ispar/detect/event_detector.hpp"
#include "ispar/features/wavelet.hpp"
#include "ispar/ml/decision_tree.hpp"

namespace ispar::select {

struct WaveletSearchConfig {
  int runs = 5;
  double testFraction = 0.2;
  int topK = 5;
  ml::DtParams tree;
  std::uint64_t seed = 0;
  int jobs = 1;
};

struct WaveletScore {
  features::WaveletSpec spec;
  double meanBalancedAccuracy = 0.0;
  std::vector<double> runScores;
};

struct WaveletSearchResult {
  std::vector<WaveletScore> ranking;  // descending; ties keep catalog order
  std::vector<WaveletScore> top;      // first min(topK, ranking size)
  std::vector<std::string> skipped;   // "label: reason"
};

// Every (wavelet, level) with 1 <= level <= max useful level for the window.
std::vector<features::WaveletSpec> expandSpecs(const std::vector<std::string>& wavelets, std::size_t windowLength,
                                               const features::WaveletCatalog& catalog =
                                                   features::WaveletCatalog::builtin());

// For each spec: detail coefficients of all phases as features, then a
// decision tree trained and tested on `runs` stratified splits. Run r uses
// the split seeded by deriveSeed(seed, r) for every spec, so specs are
// compared on identical splits. A spec whose extraction fails is skipped.
WaveletSearchResult dtWaveletSearch(const std::vector<detect::CaptureWindow>& windows, const std::vector<int>& y,
                                    int classCount, const std::vector<features::WaveletSpec>& specs,
                                    const WaveletSearchConfig& cfg,
                                    const features::WaveletCatalog& catalog = features::WaveletCatalog::builtin());

}  // namespace ispar::select
