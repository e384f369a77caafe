#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <vector>

#include "ispar/ml/cart.hpp"
#include "ispar/ml/dataset.hpp"

namespace ispar::ml {

struct DtParams {
  int maxDepth = 0;  // 0 = grow until pure
  int minLeaf = 1;

  void validate() const;
};

class DecisionTree {
 public:
  // All features are searched at every node, so the seed does not change the
  // result; it is kept for the uniform training contract.
  static DecisionTree fit(const Dataset& ds, const DtParams& params, std::uint64_t seed = 0);

  std::vector<double> proba(const Eigen::RowVectorXd& x) const;
  int predict(const Eigen::RowVectorXd& x) const;

  const Tree& tree() const { return tree_; }
  int classCount() const { return classCount_; }

  void save(std::ostream& out) const;
  static DecisionTree load(std::istream& in);

 private:
  Tree tree_;
  int classCount_ = 0;
};

}  // namespace ispar::ml
