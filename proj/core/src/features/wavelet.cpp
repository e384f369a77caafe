#include "ispar/features/wavelet.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "ispar/common/binary_io.hpp"
#include "ispar/common/error.hpp"

namespace ispar::features {

namespace detail {
extern const std::string_view kBuiltinCatalogText;
}

namespace {

FilterKind parseKind(const std::string& s) {
  if (s == "orthogonal") return FilterKind::Orthogonal;
  if (s == "biorthogonal") return FilterKind::Biorthogonal;
  if (s == "approximate") return FilterKind::Approximate;
  throw FormatError("wavelet catalog: unknown filter kind '" + s + "'");
}

void checkFilter(const WaveletFilter& f) {
  const std::size_t n = f.decLo.size();
  if (n < 2 || n % 2 != 0) throw FormatError("wavelet catalog: " + f.name + " has odd or short filters");
  if (f.decHi.size() != n || f.recLo.size() != n || f.recHi.size() != n) {
    throw FormatError("wavelet catalog: " + f.name + " filters differ in length");
  }
  if (f.kind == FilterKind::Orthogonal) {
    const double sum = std::accumulate(f.decLo.begin(), f.decLo.end(), 0.0);
    if (std::abs(sum - std::sqrt(2.0)) > 1e-10) {
      throw FormatError("wavelet catalog: " + f.name + " lowpass does not sum to sqrt(2)");
    }
  }
}

}  // namespace

WaveletCatalog WaveletCatalog::parse(std::string_view text) {
  WaveletCatalog cat;
  std::istringstream in{std::string(text)};
  std::string line;
  WaveletFilter cur;
  bool open = false;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key) || key[0] == '#') continue;
    const auto where = " (line " + std::to_string(lineNo) + ")";
    if (key == "version") {
      if (!(ls >> cat.version_) || cat.version_ != 1) throw FormatError("wavelet catalog: unsupported version" + where);
    } else if (key == "filter") {
      if (open) throw FormatError("wavelet catalog: nested filter" + where);
      std::string kind;
      cur = WaveletFilter{};
      if (!(ls >> cur.name >> cur.family >> kind)) throw FormatError("wavelet catalog: bad filter line" + where);
      cur.kind = parseKind(kind);
      open = true;
    } else if (key == "dec_lo" || key == "dec_hi" || key == "rec_lo" || key == "rec_hi") {
      if (!open) throw FormatError("wavelet catalog: coefficients outside a filter" + where);
      std::size_t n = 0;
      if (!(ls >> n) || n == 0 || n > 4096) throw FormatError("wavelet catalog: bad length" + where);
      std::vector<double> c(n);
      for (auto& v : c) {
        if (!(ls >> v)) throw FormatError("wavelet catalog: truncated coefficients" + where);
      }
      auto& dst = key == "dec_lo" ? cur.decLo : key == "dec_hi" ? cur.decHi : key == "rec_lo" ? cur.recLo : cur.recHi;
      dst = std::move(c);
    } else if (key == "end") {
      if (!open) throw FormatError("wavelet catalog: stray end" + where);
      checkFilter(cur);
      if (cat.contains(cur.name)) throw FormatError("wavelet catalog: duplicate filter " + cur.name);
      cat.filters_.push_back(std::move(cur));
      open = false;
    } else {
      throw FormatError("wavelet catalog: unknown key '" + key + "'" + where);
    }
  }
  if (open) throw FormatError("wavelet catalog: missing end for " + cur.name);
  if (cat.version_ != 1) throw FormatError("wavelet catalog: missing version line");
  return cat;
}

WaveletCatalog WaveletCatalog::load(const std::string& path) { return parse(io::readFile(path)); }

const WaveletCatalog& WaveletCatalog::builtin() {
  static const WaveletCatalog cat = parse(detail::kBuiltinCatalogText);
  return cat;
}

bool WaveletCatalog::contains(std::string_view name) const {
  for (const auto& f : filters_) {
    if (f.name == name) return true;
  }
  return false;
}

const WaveletFilter& WaveletCatalog::at(std::string_view name) const {
  for (const auto& f : filters_) {
    if (f.name == name) return f;
  }
  throw InvalidInput("unknown wavelet '" + std::string(name) + "'");
}

std::vector<std::string> WaveletCatalog::names() const {
  std::vector<std::string> out;
  out.reserve(filters_.size());
  for (const auto& f : filters_) out.push_back(f.name);
  return out;
}

}  // namespace ispar::features
