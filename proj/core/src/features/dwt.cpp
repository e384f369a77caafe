#include "ispar/features/dwt.hpp"

#include <cmath>
#include <string>

#include "ispar/common/error.hpp"

namespace ispar::features {

namespace {

// One analysis step on a zero-padded even period m:
//   a[k] = sum_j lo[j] x[(2k + 1 - j) mod m], likewise d with hi.
void analyze(const std::vector<double>& x, const WaveletFilter& f, std::vector<double>& a,
             std::vector<double>& d) {
  const std::size_t m = x.size() + (x.size() % 2);
  const std::size_t half = m / 2;
  const std::size_t len = f.length();
  a.assign(half, 0.0);
  d.assign(half, 0.0);
  for (std::size_t k = 0; k < half; ++k) {
    double sa = 0.0, sd = 0.0;
    for (std::size_t j = 0; j < len; ++j) {
      // (2k + 1 - j) mod m, kept non-negative.
      const std::size_t idx = (2 * k + 1 + m * (len / m + 1) - j) % m;
      const double v = idx < x.size() ? x[idx] : 0.0;
      sa += f.decLo[j] * v;
      sd += f.decHi[j] * v;
    }
    a[k] = sa;
    d[k] = sd;
  }
}

// Transpose of analyze() with the reversed reconstruction filters, which for
// orthogonal filters are the decomposition filters themselves.
std::vector<double> synthesize(const std::vector<double>& a, const std::vector<double>& d,
                               const WaveletFilter& f, std::size_t outLen) {
  const std::size_t half = a.size();
  const std::size_t m = 2 * half;
  const std::size_t len = f.length();
  std::vector<double> x(m, 0.0);
  for (std::size_t k = 0; k < half; ++k) {
    for (std::size_t j = 0; j < len; ++j) {
      const std::size_t idx = (2 * k + 1 + m * (len / m + 1) - j) % m;
      x[idx] += f.recLo[len - 1 - j] * a[k] + f.recHi[len - 1 - j] * d[k];
    }
  }
  x.resize(outLen);
  return x;
}

}  // namespace

int maxUsefulLevel(std::size_t signalLength, std::size_t filterLength) {
  if (filterLength < 2) throw InvalidInput("maxUsefulLevel: filter length must be at least 2");
  if (signalLength < filterLength - 1) return 0;
  const double ratio = static_cast<double>(signalLength) / static_cast<double>(filterLength - 1);
  int level = 0;
  // Integer doubling avoids log2 rounding at exact powers of two.
  while (static_cast<double>(std::size_t{1} << (level + 1)) <= ratio) ++level;
  return level;
}

Decomposition dwtMultilevel(std::span<const double> x, const WaveletFilter& filter, int level) {
  const int maxLevel = maxUsefulLevel(x.size(), filter.length());
  if (level < 1 || level > maxLevel) {
    throw InvalidInput("dwt: level " + std::to_string(level) + " outside [1, " +
                       std::to_string(maxLevel) + "] for " + filter.name + " on " +
                       std::to_string(x.size()) + " samples");
  }
  Decomposition dec;
  std::vector<double> cur(x.begin(), x.end());
  for (int l = 0; l < level; ++l) {
    std::vector<double> a, d;
    dec.inputLengths.push_back(cur.size());
    analyze(cur, filter, a, d);
    dec.details.push_back(std::move(d));
    cur = std::move(a);
  }
  dec.approximation = std::move(cur);
  return dec;
}

std::vector<double> idwtMultilevel(const Decomposition& dec, const WaveletFilter& filter) {
  if (dec.details.empty() || dec.inputLengths.size() != dec.details.size()) {
    throw InvalidInput("idwt: malformed decomposition");
  }
  std::vector<double> cur = dec.approximation;
  for (int l = dec.levels() - 1; l >= 0; --l) {
    const auto& d = dec.details[static_cast<std::size_t>(l)];
    if (d.size() != cur.size()) throw InvalidInput("idwt: coefficient lengths disagree");
    cur = synthesize(cur, d, filter, dec.inputLengths[static_cast<std::size_t>(l)]);
  }
  return cur;
}

std::vector<std::size_t> detailLengths(std::size_t n, int level) {
  std::vector<std::size_t> out;
  for (int l = 0; l < level; ++l) {
    n = (n + 1) / 2;
    out.push_back(n);
  }
  return out;
}

std::vector<double> waveletEnergy(const std::vector<std::vector<double>>& details) {
  std::vector<double> e;
  e.reserve(details.size());
  for (const auto& d : details) {
    double s = 0.0;
    for (double v : d) s += v * v;
    e.push_back(s);
  }
  return e;
}

}  // namespace ispar::features
