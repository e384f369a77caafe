#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

namespace ispar::ml {

// Row-per-sample training data. Labels are 0 .. classCount-1.
struct Dataset {
  Eigen::MatrixXd X;
  std::vector<int> y;
  std::vector<std::string> schema;
  int classCount = 0;
  std::vector<std::string> classNames;  // optional, classCount entries when set

  static Dataset make(Eigen::MatrixXd X, std::vector<int> y, std::vector<std::string> schema = {},
                      std::vector<std::string> classNames = {});

  // n >= 2, finite X, labels in range, schema width matches when present.
  void validate() const;

  std::size_t size() const { return y.size(); }
  std::size_t dimension() const { return static_cast<std::size_t>(X.cols()); }
  std::vector<std::size_t> classCounts() const;

  // Rows in the given order; classCount and names are kept.
  Dataset rows(const std::vector<std::size_t>& idx) const;
  Dataset columns(const std::vector<std::size_t>& idx) const;
};

}  // namespace ispar::ml
