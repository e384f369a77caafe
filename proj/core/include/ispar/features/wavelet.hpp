#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ispar::features {

enum class FilterKind {
  Orthogonal,    // rec filters are the time reverse of dec filters
  Biorthogonal,  // dual pair; perfect reconstruction but no Parseval
  Approximate,   // FIR truncation of an orthogonal wavelet (dmey)
};

// Decomposition and reconstruction filters in the PyWavelets convention. All
// four filters share one (even) length.
struct WaveletFilter {
  std::string name;
  std::string family;
  FilterKind kind = FilterKind::Orthogonal;
  std::vector<double> decLo, decHi, recLo, recHi;

  std::size_t length() const { return decLo.size(); }
};

// Versioned text catalog:
//
//   version 1
//   filter <name> <family> orthogonal|biorthogonal|approximate
//   dec_lo <n> c0 .. c(n-1)     (likewise dec_hi, rec_lo, rec_hi)
//   end
//
// '#' starts a comment line.
class WaveletCatalog {
 public:
  static WaveletCatalog parse(std::string_view text);
  static WaveletCatalog load(const std::string& path);
  // Compiled-in copy of core/data/wavelet_filters.txt.
  static const WaveletCatalog& builtin();

  int version() const { return version_; }
  bool contains(std::string_view name) const;
  const WaveletFilter& at(std::string_view name) const;
  const std::vector<WaveletFilter>& filters() const { return filters_; }
  std::vector<std::string> names() const;

 private:
  int version_ = 0;
  std::vector<WaveletFilter> filters_;
};

// One decomposition choice: a catalog filter and a depth.
struct WaveletSpec {
  std::string wavelet;
  int level = 1;

  std::string label() const { return wavelet + "/L" + std::to_string(level); }
};

}  // namespace ispar::features
