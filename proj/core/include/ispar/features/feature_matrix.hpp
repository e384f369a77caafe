#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "ispar/detect/event_detector.hpp"
#include "ispar/features/time_features.hpp"
#include "ispar/features/wavelet.hpp"

namespace ispar::features {

// Energy of detail level `level` of one phase under one wavelet.
struct EnergyTerm {
  int phase = 0;  // 0 = A
  std::string wavelet;
  int level = 1;

  std::string name() const;
  static EnergyTerm parse(const std::string& name);
  bool operator==(const EnergyTerm&) const = default;
};

std::string phaseName(int phase);

enum class FeatureMode {
  Coeffs,      // every detail coefficient d_1..d_L of one wavelet, per phase
  Time,        // one scalar per family per phase
  Combined,    // time features followed by the listed energy terms
  EnergyPool,  // every energy (phase x wavelet x level <= max) of a wavelet list
};

std::string toString(FeatureMode m);
FeatureMode parseFeatureMode(const std::string& s);

struct FeatureSpec {
  FeatureMode mode = FeatureMode::Combined;
  WaveletSpec coeffs{"db4", 4};
  std::vector<TimeFamily> families{TimeFamily::F1, TimeFamily::F2, TimeFamily::F3};
  TimeFeatureParams time;
  bool extended = false;
  // Combined mode. When empty, levels 1-3 of coeffs.wavelet on every phase.
  std::vector<EnergyTerm> energies;
  // EnergyPool mode.
  std::vector<std::string> poolWavelets{"db4"};
};

// Schema for windows of `windowLength` samples. Per-phase blocks are
// concatenated in A, B, C order.
std::vector<std::string> featureSchema(const FeatureSpec& spec, std::size_t windowLength,
                                       const WaveletCatalog& catalog = WaveletCatalog::builtin());

// Features of one capture, in schema order.
std::vector<double> extractFeatures(const detect::CaptureWindow& window, const FeatureSpec& spec,
                                    const WaveletCatalog& catalog = WaveletCatalog::builtin());

struct FeatureMatrix {
  std::vector<std::string> schema;
  Eigen::MatrixXd values;         // one row per kept window
  std::vector<std::size_t> kept;  // source window index of each row
  std::vector<std::string> diagnostics;

  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values.cols()); }
};

// Windows producing a non-finite value are dropped with a diagnostic. Rows
// keep the input order regardless of `jobs`.
FeatureMatrix extractFeatureMatrix(const std::vector<detect::CaptureWindow>& windows,
                                   const FeatureSpec& spec, int jobs = 1,
                                   const WaveletCatalog& catalog = WaveletCatalog::builtin());

}  // namespace ispar::features
