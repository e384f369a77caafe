#include "ispar/ml/random_forest.hpp"

#include <cmath>
#include <numeric>

#include "ispar/common/binary_io.hpp"
#include "ispar/common/error.hpp"
#include "ispar/common/hash.hpp"
#include "ispar/common/parallel.hpp"

namespace ispar::ml {

void RfParams::validate() const {
  if (nTrees < 1) throw InvalidInput("rf: nTrees must be >= 1");
  if (maxDepth < 0 || minLeaf < 1 || maxFeatures < 0) throw InvalidInput("rf: invalid tree parameters");
}

RandomForest RandomForest::fit(const Dataset& ds, const RfParams& params, std::uint64_t seed, int jobs) {
  ds.validate();
  params.validate();
  const auto d = static_cast<int>(ds.dimension());
  const int features = params.maxFeatures == 0
                           ? std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(d)))))
                           : std::min(params.maxFeatures, d);
  const std::size_t n = ds.size();
  RandomForest m;
  m.classCount_ = ds.classCount;
  m.trees_.resize(static_cast<std::size_t>(params.nTrees));
  std::vector<std::vector<double>> imps(m.trees_.size());
  parallelFor(m.trees_.size(), jobs, [&](std::size_t t) {
    std::mt19937_64 rng(deriveSeed(seed, t));
    std::vector<std::size_t> rows(n);
    if (params.bootstrap) {
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      for (auto& r : rows) r = pick(rng);
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    m.trees_[t] = fitClassificationTree(ds.X, ds.y, ds.classCount, rows,
                                        {params.maxDepth, params.minLeaf, features}, rng, &imps[t]);
  });
  m.importance_.assign(static_cast<std::size_t>(d), 0.0);
  for (const auto& imp : imps) {
    for (std::size_t j = 0; j < imp.size(); ++j) m.importance_[j] += imp[j];
  }
  for (auto& v : m.importance_) v /= static_cast<double>(params.nTrees);
  return m;
}

std::vector<double> RandomForest::proba(const Eigen::RowVectorXd& x) const {
  std::vector<double> votes(static_cast<std::size_t>(classCount_), 0.0);
  for (const auto& t : trees_) votes[static_cast<std::size_t>(argmax(t.leaf(x).value))] += 1.0;
  for (auto& v : votes) v /= static_cast<double>(trees_.size());
  return votes;
}

int RandomForest::predict(const Eigen::RowVectorXd& x) const { return argmax(proba(x)); }

std::vector<double> RandomForest::importance() const {
  const double total = std::accumulate(importance_.begin(), importance_.end(), 0.0);
  std::vector<double> out(importance_.size(), 0.0);
  if (total > 0.0) {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = importance_[j] / total;
  }
  return out;
}

void RandomForest::save(std::ostream& out) const {
  io::writeU32(out, static_cast<std::uint32_t>(classCount_));
  io::writeU64(out, importance_.size());
  io::writeF64s(out, importance_);
  io::writeU64(out, trees_.size());
  for (const auto& t : trees_) writeTree(out, t);
}

RandomForest RandomForest::load(std::istream& in) {
  RandomForest m;
  m.classCount_ = static_cast<int>(io::readU32(in));
  const auto d = io::readU64(in);
  if (d > (1ULL << 24)) throw FormatError("rf: bad importance size");
  m.importance_ = io::readF64s(in, d);
  const auto t = io::readU64(in);
  if (t == 0 || t > (1ULL << 24)) throw FormatError("rf: bad tree count");
  for (std::uint64_t i = 0; i < t; ++i) m.trees_.push_back(readTree(in));
  return m;
}

}  // namespace ispar::ml
