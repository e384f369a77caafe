#include "ispar/ml/decision_tree.hpp"

#include <numeric>

#include "ispar/common/binary_io.hpp"
#include "ispar/common/error.hpp"

namespace ispar::ml {

void DtParams::validate() const {
  if (maxDepth < 0) throw InvalidInput("dt: maxDepth must be >= 0");
  if (minLeaf < 1) throw InvalidInput("dt: minLeaf must be >= 1");
}

DecisionTree DecisionTree::fit(const Dataset& ds, const DtParams& params, std::uint64_t seed) {
  ds.validate();
  params.validate();
  std::vector<std::size_t> rows(ds.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  DecisionTree m;
  m.classCount_ = ds.classCount;
  m.tree_ = fitClassificationTree(ds.X, ds.y, ds.classCount, rows, {params.maxDepth, params.minLeaf, 0}, rng);
  return m;
}

std::vector<double> DecisionTree::proba(const Eigen::RowVectorXd& x) const { return tree_.leaf(x).value; }

int DecisionTree::predict(const Eigen::RowVectorXd& x) const { return argmax(tree_.leaf(x).value); }

void DecisionTree::save(std::ostream& out) const {
  io::writeU32(out, static_cast<std::uint32_t>(classCount_));
  writeTree(out, tree_);
}

DecisionTree DecisionTree::load(std::istream& in) {
  DecisionTree m;
  m.classCount_ = static_cast<int>(io::readU32(in));
  m.tree_ = readTree(in);
  return m;
}

}  // namespace ispar::ml
