#include "ispar/sim/waveform_store.hpp"

#include <cstring>
#include <sstream>

#include "ispar/common/binary_io.hpp"
#include "ispar/common/error.hpp"

namespace ispar::sim {

namespace {
constexpr char kMagic[8] = {'I', 'S', 'P', 'A', 'R', 'W', 'F', '1'};
}

std::string encodeWaveform(const WaveformRecord& rec) {
  const std::size_t n = rec.length();
  if (rec.id[1].size() != n || rec.id[2].size() != n) {
    throw InvalidInput("waveform: channels differ in length");
  }
  std::ostringstream out(std::ios::binary);
  out.write(kMagic, sizeof kMagic);
  io::writeU32(out, kWaveformVersion);
  io::writeU32(out, static_cast<std::uint32_t>(rec.label));
  io::writeF64(out, rec.sampleRate);
  io::writeU64(out, n);
  io::writeU64(out, rec.seed);
  io::writeU32(out, static_cast<std::uint32_t>(rec.unitLabel));
  io::writeU32(out, 3);
  io::writeF64(out, rec.spec.inceptionTime);
  io::writeU64(out, 0);
  std::vector<double> inter(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int p = 0; p < 3; ++p) inter[3 * i + static_cast<std::size_t>(p)] = rec.id[p][i];
  }
  io::writeF64s(out, inter);
  return out.str();
}

WaveformRecord decodeWaveform(std::string_view bytes) {
  if (bytes.size() < kWaveformHeaderBytes || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw FormatError("waveform: bad magic or truncated header");
  }
  std::istringstream in(std::string(bytes.substr(sizeof kMagic)), std::ios::binary);
  const auto version = io::readU32(in);
  if (version != kWaveformVersion) throw FormatError("waveform: unsupported version");
  WaveformRecord rec;
  const auto label = io::readU32(in);
  if (label >= static_cast<std::uint32_t>(kEventKindCount)) throw FormatError("waveform: bad label");
  rec.label = static_cast<EventKind>(label);
  rec.sampleRate = io::readF64(in);
  const auto n = io::readU64(in);
  rec.seed = io::readU64(in);
  const auto unit = io::readU32(in);
  if (unit > 2) throw FormatError("waveform: bad unit label");
  rec.unitLabel = static_cast<Unit>(unit);
  if (io::readU32(in) != 3) throw FormatError("waveform: expected 3 channels");
  rec.spec.kind = rec.label;
  rec.spec.unit = rec.unitLabel;
  rec.spec.inceptionTime = io::readF64(in);
  io::readU64(in);
  if (bytes.size() != kWaveformHeaderBytes + 24 * n) throw FormatError("waveform: size mismatch");
  const auto inter = io::readF64s(in, 3 * n);
  for (int p = 0; p < 3; ++p) rec.id[p].resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int p = 0; p < 3; ++p) rec.id[p][i] = inter[3 * i + static_cast<std::size_t>(p)];
  }
  return rec;
}

void writeWaveform(const std::string& path, const WaveformRecord& rec) {
  io::writeFileAtomic(path, encodeWaveform(rec));
}

WaveformRecord readWaveform(const std::string& path) { return decodeWaveform(io::readFile(path)); }

}  // namespace ispar::sim
