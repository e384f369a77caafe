#include "ispar/eval/metrics.hpp"

#include <numeric>
#include <string>

#include "ispar/common/error.hpp"

namespace ispar::eval {

Confusion Confusion::fromPredictions(const std::vector<int>& truth, const std::vector<int>& predicted, int k) {
  if (truth.size() != predicted.size()) throw InvalidInput("confusion: label vectors differ in length");
  Confusion c(k);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= k || predicted[i] < 0 || predicted[i] >= k) {
      throw InvalidInput("confusion: label out of range");
    }
    ++c.at(truth[i], predicted[i]);
  }
  return c;
}

std::size_t& Confusion::at(int t, int p) { return counts[static_cast<std::size_t>(t * classCount + p)]; }
std::size_t Confusion::at(int t, int p) const { return counts[static_cast<std::size_t>(t * classCount + p)]; }

std::size_t Confusion::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

std::size_t Confusion::support(int c) const {
  std::size_t s = 0;
  for (int p = 0; p < classCount; ++p) s += at(c, p);
  return s;
}

std::size_t Confusion::tp(int c) const { return at(c, c); }
std::size_t Confusion::fn(int c) const { return support(c) - tp(c); }

std::size_t Confusion::fp(int c) const {
  std::size_t s = 0;
  for (int t = 0; t < classCount; ++t) {
    if (t != c) s += at(t, c);
  }
  return s;
}

std::size_t Confusion::tn(int c) const { return total() - tp(c) - fn(c) - fp(c); }

Confusion& Confusion::operator+=(const Confusion& o) {
  if (o.classCount != classCount) throw InvalidInput("confusion: class counts differ");
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
  return *this;
}

std::vector<double> perClassRecall(const Confusion& c) {
  std::vector<double> r;
  for (int k = 0; k < c.classCount; ++k) {
    const auto s = c.support(k);
    if (s == 0) throw InvalidInput("balanced accuracy: class " + std::to_string(k) + " has no true samples");
    r.push_back(static_cast<double>(c.tp(k)) / static_cast<double>(s));
  }
  return r;
}

double balancedAccuracy(const Confusion& c) {
  if (c.classCount < 1) throw InvalidInput("balanced accuracy: empty confusion");
  const auto r = perClassRecall(c);
  return std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(r.size());
}

double accuracy(const Confusion& c) {
  const auto n = c.total();
  if (n == 0) throw InvalidInput("accuracy: empty confusion");
  std::size_t hit = 0;
  for (int k = 0; k < c.classCount; ++k) hit += c.tp(k);
  return static_cast<double>(hit) / static_cast<double>(n);
}

}  // namespace ispar::eval
