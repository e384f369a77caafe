#include "ispar/ml/cart.hpp"

#include <algorithm>
#include <numeric>

#include "ispar/common/binary_io.hpp"
#include "ispar/common/error.hpp"

namespace ispar::ml {

namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double score = 0.0;
  double decrease = 0.0;
};

std::vector<int> candidateFeatures(Eigen::Index d, int maxFeatures, std::mt19937_64& rng) {
  std::vector<int> f(static_cast<std::size_t>(d));
  std::iota(f.begin(), f.end(), 0);
  if (maxFeatures <= 0 || maxFeatures >= d) return f;
  for (int i = 0; i < maxFeatures; ++i) {
    std::uniform_int_distribution<int> pick(i, static_cast<int>(d) - 1);
    std::swap(f[static_cast<std::size_t>(i)], f[static_cast<std::size_t>(pick(rng))]);
  }
  f.resize(static_cast<std::size_t>(maxFeatures));
  std::sort(f.begin(), f.end());
  return f;
}

// Rows ordered by column f; equal values keep their node order.
void sortByFeature(const Eigen::MatrixXd& X, int f, std::vector<std::size_t>& order) {
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return X(static_cast<Eigen::Index>(a), f) < X(static_cast<Eigen::Index>(b), f);
  });
}

class ClassificationBuilder {
 public:
  ClassificationBuilder(const Eigen::MatrixXd& X, const std::vector<int>& y, int k, const TreeParams& p,
                        std::mt19937_64& rng, std::vector<double>* imp, std::size_t rootSize)
      : X_(X), y_(y), k_(k), p_(p), rng_(rng), imp_(imp), root_(static_cast<double>(rootSize)) {}

  int build(std::vector<std::size_t> rows, int depth, Tree& tree) {
    const auto m = rows.size();
    std::vector<double> counts(static_cast<std::size_t>(k_), 0.0);
    for (auto r : rows) counts[static_cast<std::size_t>(y_[r])] += 1.0;
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    {
      auto& node = tree.nodes.back();
      node.samples = m;
      node.value.resize(counts.size());
      for (std::size_t c = 0; c < counts.size(); ++c) node.value[c] = counts[c] / static_cast<double>(m);
    }
    const bool pure = std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0.0; }) <= 1;
    if (pure || (p_.maxDepth > 0 && depth >= p_.maxDepth) || m < 2 * static_cast<std::size_t>(p_.minLeaf)) {
      return id;
    }
    const Split s = bestSplit(rows, counts);
    if (s.feature < 0) return id;
    if (imp_) (*imp_)[static_cast<std::size_t>(s.feature)] += static_cast<double>(m) / root_ * s.decrease;

    std::vector<std::size_t> left, right;
    for (auto r : rows) {
      (X_(static_cast<Eigen::Index>(r), s.feature) <= s.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = build(std::move(left), depth + 1, tree);
    const int r = build(std::move(right), depth + 1, tree);
    auto& node = tree.nodes[static_cast<std::size_t>(id)];
    node.feature = s.feature;
    node.threshold = s.threshold;
    node.left = l;
    node.right = r;
    return id;
  }

 private:
  Split bestSplit(const std::vector<std::size_t>& rows, const std::vector<double>& counts) {
    const auto m = static_cast<double>(rows.size());
    double totalSq = 0.0;
    for (double c : counts) totalSq += c * c;
    Split best;
    bool found = false;
    std::vector<std::size_t> order = rows;
    std::vector<double> left(counts.size());
    for (int f : candidateFeatures(X_.cols(), p_.maxFeatures, rng_)) {
      sortByFeature(X_, f, order);
      std::fill(left.begin(), left.end(), 0.0);
      double sqL = 0.0, sqR = totalSq;
      for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        const auto c = static_cast<std::size_t>(y_[order[i]]);
        const double cl = left[c], cr = counts[c] - cl;
        sqL += 2.0 * cl + 1.0;
        sqR -= 2.0 * cr - 1.0;
        left[c] = cl + 1.0;
        const double v = X_(static_cast<Eigen::Index>(order[i]), f);
        if (v == X_(static_cast<Eigen::Index>(order[i + 1]), f)) continue;
        const double nL = static_cast<double>(i + 1), nR = m - nL;
        if (nL < p_.minLeaf || nR < p_.minLeaf) continue;
        // Maximizing this minimizes the weighted child gini.
        const double score = sqL / nL + sqR / nR;
        if (!found || score > best.score) {
          found = true;
          best = {f, v, score, (score - totalSq / m) / m};
        }
      }
    }
    return best;
  }

  const Eigen::MatrixXd& X_;
  const std::vector<int>& y_;
  int k_;
  TreeParams p_;
  std::mt19937_64& rng_;
  std::vector<double>* imp_;
  double root_;
};

class RegressionBuilder {
 public:
  RegressionBuilder(const Eigen::MatrixXd& X, const Eigen::VectorXd& t, const TreeParams& p,
                    std::mt19937_64& rng, const LeafValueFn& leaf)
      : X_(X), t_(t), p_(p), rng_(rng), leaf_(leaf) {}

  int build(std::vector<std::size_t> rows, int depth, Tree& tree) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes.back().samples = rows.size();
    Split s;
    if (!(p_.maxDepth > 0 && depth >= p_.maxDepth) && rows.size() >= 2 * static_cast<std::size_t>(p_.minLeaf)) {
      s = bestSplit(rows);
    }
    if (s.feature < 0) {
      tree.nodes[static_cast<std::size_t>(id)].value = {leaf_(rows)};
      return id;
    }
    std::vector<std::size_t> left, right;
    for (auto r : rows) {
      (X_(static_cast<Eigen::Index>(r), s.feature) <= s.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = build(std::move(left), depth + 1, tree);
    const int r = build(std::move(right), depth + 1, tree);
    auto& node = tree.nodes[static_cast<std::size_t>(id)];
    node.feature = s.feature;
    node.threshold = s.threshold;
    node.left = l;
    node.right = r;
    return id;
  }

 private:
  Split bestSplit(const std::vector<std::size_t>& rows) {
    double total = 0.0, totalSq = 0.0;
    for (auto r : rows) {
      total += t_(static_cast<Eigen::Index>(r));
      totalSq += t_(static_cast<Eigen::Index>(r)) * t_(static_cast<Eigen::Index>(r));
    }
    const auto m = static_cast<double>(rows.size());
    // Constant targets cannot be improved on.
    if (totalSq - total * total / m <= 1e-300) return {};
    Split best;
    bool found = false;
    std::vector<std::size_t> order = rows;
    for (int f : candidateFeatures(X_.cols(), p_.maxFeatures, rng_)) {
      sortByFeature(X_, f, order);
      double sumL = 0.0;
      for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        sumL += t_(static_cast<Eigen::Index>(order[i]));
        const double v = X_(static_cast<Eigen::Index>(order[i]), f);
        if (v == X_(static_cast<Eigen::Index>(order[i + 1]), f)) continue;
        const double nL = static_cast<double>(i + 1), nR = m - nL;
        if (nL < p_.minLeaf || nR < p_.minLeaf) continue;
        const double sumR = total - sumL;
        const double score = sumL * sumL / nL + sumR * sumR / nR;
        if (!found || score > best.score) {
          found = true;
          best = {f, v, score, 0.0};
        }
      }
    }
    return best;
  }

  const Eigen::MatrixXd& X_;
  const Eigen::VectorXd& t_;
  TreeParams p_;
  std::mt19937_64& rng_;
  const LeafValueFn& leaf_;
};

void checkParams(const TreeParams& p) {
  if (p.maxDepth < 0 || p.minLeaf < 1 || p.maxFeatures < 0) throw InvalidInput("tree: invalid parameters");
}

}  // namespace

int Tree::depth() const {
  std::vector<int> d(nodes.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    best = std::max(best, d[i]);
    if (nodes[i].feature >= 0) {
      d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    }
  }
  return best;
}

std::size_t Tree::leafCount() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.feature < 0; }));
}

Tree fitClassificationTree(const Eigen::MatrixXd& X, const std::vector<int>& y, int classCount,
                           const std::vector<std::size_t>& rows, const TreeParams& params,
                           std::mt19937_64& rng, std::vector<double>* importance) {
  checkParams(params);
  if (rows.empty()) throw InvalidInput("tree: no training rows");
  if (importance) importance->assign(static_cast<std::size_t>(X.cols()), 0.0);
  Tree tree;
  ClassificationBuilder b(X, y, classCount, params, rng, importance, rows.size());
  b.build(rows, 0, tree);
  return tree;
}

Tree fitRegressionTree(const Eigen::MatrixXd& X, const Eigen::VectorXd& target,
                       const std::vector<std::size_t>& rows, const TreeParams& params,
                       std::mt19937_64& rng, const LeafValueFn& leafValue) {
  checkParams(params);
  if (rows.empty()) throw InvalidInput("tree: no training rows");
  Tree tree;
  RegressionBuilder b(X, target, params, rng, leafValue);
  b.build(rows, 0, tree);
  return tree;
}

void writeTree(std::ostream& out, const Tree& tree) {
  io::writeU64(out, tree.nodes.size());
  for (const auto& n : tree.nodes) {
    io::writeI64(out, n.feature);
    io::writeF64(out, n.threshold);
    io::writeI64(out, n.left);
    io::writeI64(out, n.right);
    io::writeU64(out, n.samples);
    io::writeU64(out, n.value.size());
    io::writeF64s(out, n.value);
  }
}

Tree readTree(std::istream& in) {
  Tree tree;
  const auto count = io::readU64(in);
  if (count == 0 || count > (1ULL << 32)) throw FormatError("tree: bad node count");
  tree.nodes.resize(count);
  for (auto& n : tree.nodes) {
    n.feature = static_cast<int>(io::readI64(in));
    n.threshold = io::readF64(in);
    n.left = static_cast<int>(io::readI64(in));
    n.right = static_cast<int>(io::readI64(in));
    n.samples = io::readU64(in);
    const auto v = io::readU64(in);
    if (v > (1ULL << 20)) throw FormatError("tree: bad value size");
    n.value = io::readF64s(in, v);
    const auto limit = static_cast<int>(count);
    if (n.feature >= 0 && (n.left <= 0 || n.left >= limit || n.right <= 0 || n.right >= limit)) {
      throw FormatError("tree: child index out of range");
    }
  }
  return tree;
}

int argmax(const std::vector<double>& v) {
  int best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  }
  return best;
}

}  // namespace ispar::ml
