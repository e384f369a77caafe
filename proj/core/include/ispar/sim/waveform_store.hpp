#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "ispar/sim/simulator.hpp"

namespace ispar::sim {

// Per-record binary file: a 64-byte little-endian header followed by the
// three channels interleaved sample by sample as float64.
//
//   0  char[8] magic "ISPARWF1"     32 u64 seed
//   8  u32 version (1)              40 u32 unit label code
//  12  u32 label code               44 u32 channel count (3)
//  16  f64 sample rate              48 f64 inception time
//  24  u64 samples per channel      56 u64 reserved (0)
inline constexpr std::size_t kWaveformHeaderBytes = 64;
inline constexpr std::uint32_t kWaveformVersion = 1;

std::string encodeWaveform(const WaveformRecord& rec);
// The header carries kind, unit, seed and inception time; the remaining spec
// fields live in the manifest.
WaveformRecord decodeWaveform(std::string_view bytes);

void writeWaveform(const std::string& path, const WaveformRecord& rec);
WaveformRecord readWaveform(const std::string& path);

}  // namespace ispar::sim
