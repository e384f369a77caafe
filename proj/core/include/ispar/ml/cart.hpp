#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <istream>
#include <ostream>
#include <random>
#include <vector>

namespace ispar::ml {

struct TreeParams {
  int maxDepth = 0;     // 0 = unlimited
  int minLeaf = 1;
  int maxFeatures = 0;  // features tried per node; 0 = all
};

// Internal nodes send x[feature] <= threshold left. Thresholds are training
// values (the lower side of each gap), so a strictly increasing transform of
// a column applied at train and test time leaves every prediction unchanged.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1, right = -1;
  std::vector<double> value;  // class distribution, or {leaf value} for regression
  std::size_t samples = 0;
};

struct Tree {
  std::vector<TreeNode> nodes;

  template <typename Row>
  const TreeNode& leaf(const Row& x) const {
    int i = 0;
    while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
      const auto& n = nodes[static_cast<std::size_t>(i)];
      i = x(n.feature) <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(i)];
  }
  int depth() const;
  std::size_t leafCount() const;
};

// Gini CART. `rows` may repeat indices (bootstrap). Among equally good
// splits the lower feature index wins, then the lower threshold. A node is
// split whenever it is impure and some split satisfies minLeaf, even at zero
// gain. When `importance` is given, (node rows / root rows) * gini decrease
// is added to importance[feature] for every split.
Tree fitClassificationTree(const Eigen::MatrixXd& X, const std::vector<int>& y, int classCount,
                           const std::vector<std::size_t>& rows, const TreeParams& params,
                           std::mt19937_64& rng, std::vector<double>* importance = nullptr);

using LeafValueFn = std::function<double(const std::vector<std::size_t>& leafRows)>;

// Least-squares regression tree on `target`; leaf values come from `leafValue`.
Tree fitRegressionTree(const Eigen::MatrixXd& X, const Eigen::VectorXd& target,
                       const std::vector<std::size_t>& rows, const TreeParams& params,
                       std::mt19937_64& rng, const LeafValueFn& leafValue);

void writeTree(std::ostream& out, const Tree& tree);
Tree readTree(std::istream& in);

// Index of the largest entry; ties go to the lowest index.
int argmax(const std::vector<double>& v);

}  // namespace ispar::ml
