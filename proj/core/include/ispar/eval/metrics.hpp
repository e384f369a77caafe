#pragma once

#include <cstddef>
#include <vector>

namespace ispar::eval {

// counts[t * K + p]: samples of true class t predicted as p.
struct Confusion {
  int classCount = 0;
  std::vector<std::size_t> counts;

  explicit Confusion(int k = 0) : classCount(k), counts(static_cast<std::size_t>(k * k), 0) {}
  static Confusion fromPredictions(const std::vector<int>& truth, const std::vector<int>& predicted, int k);

  std::size_t& at(int truth, int predicted);
  std::size_t at(int truth, int predicted) const;
  std::size_t total() const;
  std::size_t support(int c) const;  // true samples of class c

  // One-vs-rest counts for class c.
  std::size_t tp(int c) const;
  std::size_t fn(int c) const;
  std::size_t fp(int c) const;
  std::size_t tn(int c) const;

  Confusion& operator+=(const Confusion& o);
};

// Macro-averaged recall; for two classes this is (TP/(TP+FN) + TN/(TN+FP)) / 2.
// Every class needs at least one true sample.
double balancedAccuracy(const Confusion& c);
std::vector<double> perClassRecall(const Confusion& c);
double accuracy(const Confusion& c);

}  // namespace ispar::eval
