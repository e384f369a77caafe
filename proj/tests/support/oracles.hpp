#pragma once

// Direct, loop-level reimplementations used as test oracles. They share no
// code with the library and favour obviousness over speed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

namespace oracle {

inline double quantileLinear(std::vector<double> x, double q) {
  std::sort(x.begin(), x.end());
  const double h = q * static_cast<double>(x.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= x.size()) return x.back();
  return x[lo] + (h - static_cast<double>(lo)) * (x[lo + 1] - x[lo]);
}

inline double autocorrelation(const std::vector<double>& x, int lag) {
  const std::size_t n = x.size();
  double mu = 0.0;
  for (double v : x) mu += v;
  mu /= static_cast<double>(n);
  double var = 0.0;
  for (double v : x) var += (v - mu) * (v - mu);
  var /= static_cast<double>(n);
  if (var == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t t = 0; t + lag < n; ++t) s += (x[t] - mu) * (x[t + lag] - mu);
  return s / (static_cast<double>(n - lag) * var);
}

inline double changeQuantile(const std::vector<double>& x, double ql, double qh) {
  const double lo = quantileLinear(x, ql);
  const double hi = quantileLinear(x, qh);
  double sum = 0.0;
  int pairs = 0;
  for (std::size_t t = 0; t + 1 < x.size(); ++t) {
    const bool a = x[t] >= lo && x[t] <= hi;
    const bool b = x[t + 1] >= lo && x[t + 1] <= hi;
    if (a && b) {
      sum += std::abs(x[t + 1] - x[t]);
      ++pairs;
    }
  }
  return pairs == 0 ? 0.0 : sum / pairs;
}

inline int countPeaks(const std::vector<double>& x, int m) {
  int count = 0;
  const int n = static_cast<int>(x.size());
  for (int t = m; t < n - m; ++t) {
    bool peak = true;
    for (int j = 1; j <= m; ++j) peak = peak && x[t] > x[t - j] && x[t] > x[t + j];
    if (peak) ++count;
  }
  return count;
}

inline double energyRatio(const std::vector<double>& x, int chunks, int j) {
  const std::size_t n = x.size();
  std::size_t begin = 0;
  double part = 0.0, total = 0.0;
  for (int c = 1; c <= chunks; ++c) {
    const std::size_t size = n / chunks + (static_cast<std::size_t>(c - 1) < n % chunks ? 1 : 0);
    for (std::size_t i = begin; i < begin + size; ++i) {
      total += x[i] * x[i];
      if (c == j) part += x[i] * x[i];
    }
    begin += size;
  }
  return total == 0.0 ? 0.0 : part / total;
}

// Mutual information (nats) of two discrete columns from joint counts.
inline double mutualInformation(const std::vector<int>& a, const std::vector<int>& b) {
  const double n = static_cast<double>(a.size());
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> pa, pb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1.0;
    pa[a[i]] += 1.0;
    pb[b[i]] += 1.0;
  }
  double mi = 0.0;
  for (const auto& [k, c] : joint) mi += c / n * std::log(c * n / (pa[k.first] * pb[k.second]));
  return std::max(mi, 0.0);
}

// Incremental mRMR optimum by exhaustive search: every ordered subset of
// `count` features is scored by its vector of per-step criteria (relevance
// minus mean redundancy to the features before it) and the lexicographic
// maximum wins; near-ties within 1e-12 go to the smaller index sequence.
inline std::vector<std::size_t> exhaustiveMrmr(const std::vector<std::vector<int>>& cols,
                                               const std::vector<int>& y, std::size_t count) {
  const std::size_t d = cols.size();
  std::vector<double> relevance(d);
  for (std::size_t j = 0; j < d; ++j) relevance[j] = mutualInformation(cols[j], y);
  std::vector<std::vector<double>> pair(d, std::vector<double>(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) pair[i][j] = mutualInformation(cols[i], cols[j]);
  }
  std::vector<std::size_t> best;
  std::vector<double> bestScores;
  std::vector<std::size_t> seq;
  std::vector<bool> used(d, false);
  auto evaluate = [&] {
    std::vector<double> steps;
    for (std::size_t k = 0; k < seq.size(); ++k) {
      double red = 0.0;
      for (std::size_t s = 0; s < k; ++s) red += pair[seq[k]][seq[s]];
      steps.push_back(k == 0 ? relevance[seq[k]] : relevance[seq[k]] - red / static_cast<double>(k));
    }
    // Sequences are visited in lexicographic index order, so only a strictly
    // better step vector replaces the incumbent.
    for (std::size_t k = 0; k < steps.size(); ++k) {
      if (best.empty() || steps[k] > bestScores[k] + 1e-12) {
        best = seq;
        bestScores = steps;
        return;
      }
      if (steps[k] < bestScores[k] - 1e-12) return;
    }
  };
  auto recurse = [&](auto&& self) -> void {
    if (seq.size() == count) {
      evaluate();
      return;
    }
    for (std::size_t j = 0; j < d; ++j) {
      if (used[j]) continue;
      used[j] = true;
      seq.push_back(j);
      self(self);
      seq.pop_back();
      used[j] = false;
    }
  };
  recurse(recurse);
  return best;
}

}  // namespace oracle
