#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ispar/sim/simulator.hpp"

namespace ispar::detect {

struct EDConfig {
  double alpha = 0.05;
  int cycleSamples = 167;

  void validate() const;
};

struct CaptureWindow {
  std::size_t startIndex = 0;
  std::array<std::vector<double>, 3> samples;  // cycleSamples per phase
  int triggerPhase = 0;                        // 0 = A, 1 = B, 2 = C
};

// (S_cur - S_prev) / S_cur with S_cur = sum |id| over [t, t + n_c) and
// S_prev over [t - n_c, t); 0 when S_cur is 0.
double edIndex(std::span<const double> id, std::size_t t, const EDConfig& cfg);

// First sample t (ascending) at which any phase reaches alpha. The cycle
// [t, t + n_c) is complete at sample t + n_c - 1, so the capture is the n_c
// samples that follow it.
std::optional<CaptureWindow> detectAndCapture(const std::array<std::vector<double>, 3>& id,
                                              const EDConfig& cfg);
std::optional<CaptureWindow> detectAndCapture(const sim::WaveformRecord& record,
                                              const EDConfig& cfg);

}  // namespace ispar::detect
