#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ispar/features/wavelet.hpp"

namespace ispar::features {

// details[l-1] holds d_l; approximation is a_L. inputLengths[l-1] is the
// length of the sequence level l decomposed (inputLengths[0] = signal length).
struct Decomposition {
  std::vector<std::vector<double>> details;
  std::vector<double> approximation;
  std::vector<std::size_t> inputLengths;

  int levels() const { return static_cast<int>(details.size()); }
};

// floor(log2(signalLength / (filterLength - 1))), floored at 0.
int maxUsefulLevel(std::size_t signalLength, std::size_t filterLength);

// Pyramid algorithm with periodized boundaries. An odd-length input is padded
// with one zero before filtering, so every level emits ceil(len / 2)
// coefficients and the transform stays orthogonal for orthogonal filters.
// Requires 1 <= level <= maxUsefulLevel(x.size(), filter length).
Decomposition dwtMultilevel(std::span<const double> x, const WaveletFilter& filter, int level);

// Inverse pyramid using the reconstruction filters; returns inputLengths[0]
// samples.
std::vector<double> idwtMultilevel(const Decomposition& dec, const WaveletFilter& filter);

// Coefficient counts |d_1| .. |d_level| for a signal of length n.
std::vector<std::size_t> detailLengths(std::size_t n, int level);

// E_l = sum_k d_l(k)^2 for each level.
std::vector<double> waveletEnergy(const std::vector<std::vector<double>>& details);

}  // namespace ispar::features
