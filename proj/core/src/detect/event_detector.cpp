#include "ispar/detect/event_detector.hpp"

#include <cmath>
#include <string>

#include "ispar/common/error.hpp"

namespace ispar::detect {

void EDConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("ED: alpha must lie in (0, 1)");
  if (cycleSamples < 8) throw InvalidInput("ED: cycle must span at least 8 samples");
}

double edIndex(std::span<const double> id, std::size_t t, const EDConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.cycleSamples);
  if (t < n || t + n > id.size()) throw InvalidInput("ED: window out of bounds");
  double cur = 0.0, prev = 0.0;
  for (std::size_t i = t; i < t + n; ++i) {
    cur += std::abs(id[i]);
    prev += std::abs(id[i - n]);
  }
  return cur == 0.0 ? 0.0 : (cur - prev) / cur;
}

std::optional<CaptureWindow> detectAndCapture(const std::array<std::vector<double>, 3>& id,
                                              const EDConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.cycleSamples);
  const std::size_t len = id[0].size();
  if (id[1].size() != len || id[2].size() != len) throw InvalidInput("ED: phases differ in length");
  if (len < 3 * n) throw InvalidInput("ED: record shorter than three cycles");

  // Last t whose capture [t + n, t + 2n) still fits.
  const std::size_t lastT = len - 2 * n;
  for (std::size_t t = n; t <= lastT; ++t) {
    for (int p = 0; p < 3; ++p) {
      if (edIndex(id[p], t, cfg) < cfg.alpha) continue;
      CaptureWindow w;
      w.startIndex = t + n;
      w.triggerPhase = p;
      for (int q = 0; q < 3; ++q) {
        w.samples[q].assign(id[q].begin() + static_cast<std::ptrdiff_t>(t + n),
                            id[q].begin() + static_cast<std::ptrdiff_t>(t + 2 * n));
      }
      return w;
    }
  }
  return std::nullopt;
}

std::optional<CaptureWindow> detectAndCapture(const sim::WaveformRecord& record,
                                              const EDConfig& cfg) {
  return detectAndCapture(record.id, cfg);
}

}  // namespace ispar::detect
