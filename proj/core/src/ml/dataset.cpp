#include "ispar/ml/dataset.hpp"

#include <algorithm>
#include <string>

#include "ispar/common/error.hpp"

namespace ispar::ml {

Dataset Dataset::make(Eigen::MatrixXd X, std::vector<int> y, std::vector<std::string> schema,
                      std::vector<std::string> classNames) {
  Dataset ds;
  ds.X = std::move(X);
  ds.y = std::move(y);
  ds.schema = std::move(schema);
  ds.classNames = std::move(classNames);
  ds.classCount = ds.y.empty() ? 0 : *std::max_element(ds.y.begin(), ds.y.end()) + 1;
  if (!ds.classNames.empty()) ds.classCount = std::max(ds.classCount, static_cast<int>(ds.classNames.size()));
  ds.validate();
  return ds;
}

void Dataset::validate() const {
  if (y.size() < 2) throw InvalidInput("dataset: need at least two samples");
  if (static_cast<std::size_t>(X.rows()) != y.size()) throw InvalidInput("dataset: X rows and labels differ");
  if (!schema.empty() && schema.size() != static_cast<std::size_t>(X.cols())) {
    throw InvalidInput("dataset: schema width differs from X");
  }
  if (!classNames.empty() && classNames.size() != static_cast<std::size_t>(classCount)) {
    throw InvalidInput("dataset: class name count differs from class count");
  }
  for (int label : y) {
    if (label < 0 || label >= classCount) throw InvalidInput("dataset: label out of range");
  }
  if (!X.allFinite()) throw InvalidInput("dataset: non-finite feature value");
}

std::vector<std::size_t> Dataset::classCounts() const {
  std::vector<std::size_t> c(static_cast<std::size_t>(classCount), 0);
  for (int label : y) ++c[static_cast<std::size_t>(label)];
  return c;
}

Dataset Dataset::rows(const std::vector<std::size_t>& idx) const {
  Dataset out;
  out.X.resize(static_cast<Eigen::Index>(idx.size()), X.cols());
  out.y.reserve(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= y.size()) throw InvalidInput("dataset: row index out of range");
    out.X.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(idx[i]));
    out.y.push_back(y[idx[i]]);
  }
  out.schema = schema;
  out.classCount = classCount;
  out.classNames = classNames;
  return out;
}

Dataset Dataset::columns(const std::vector<std::size_t>& idx) const {
  Dataset out;
  out.X.resize(X.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) {
    if (idx[j] >= static_cast<std::size_t>(X.cols())) throw InvalidInput("dataset: column index out of range");
    out.X.col(static_cast<Eigen::Index>(j)) = X.col(static_cast<Eigen::Index>(idx[j]));
    if (!schema.empty()) out.schema.push_back(schema[idx[j]]);
  }
  out.y = y;
  out.classCount = classCount;
  out.classNames = classNames;
  return out;
}

}  // namespace ispar::ml
