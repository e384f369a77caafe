#include "ispar/features/feature_io.hpp"

#include <cstdio>
#include <cstring>
#include <sstream>

#include "ispar/common/binary_io.hpp"
#include "ispar/common/error.hpp"

namespace ispar::features {

namespace {
constexpr char kMagic[8] = {'I', 'S', 'P', 'A', 'R', 'F', 'M', '1'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

std::string toCsv(const FeatureMatrix& fm) {
  std::string out = "row";
  for (const auto& s : fm.schema) out += "," + s;
  out += "\n";
  char buf[40];
  for (std::size_t r = 0; r < fm.rows(); ++r) {
    out += std::to_string(fm.kept[r]);
    for (std::size_t c = 0; c < fm.cols(); ++c) {
      std::snprintf(buf, sizeof buf, ",%.17g", fm.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
      out += buf;
    }
    out += "\n";
  }
  return out;
}

std::string encodeFeatureMatrix(const FeatureMatrix& fm) {
  if (fm.kept.size() != fm.rows() || fm.schema.size() != fm.cols()) {
    throw InvalidInput("feature matrix: schema or row index size mismatch");
  }
  std::ostringstream out(std::ios::binary);
  out.write(kMagic, sizeof kMagic);
  io::writeU32(out, kVersion);
  io::writeU32(out, 0);
  io::writeU64(out, fm.rows());
  io::writeU64(out, fm.cols());
  for (int i = 0; i < 4; ++i) io::writeU64(out, 0);
  for (const auto& s : fm.schema) io::writeString(out, s);
  for (auto k : fm.kept) io::writeU64(out, k);
  std::vector<double> row(fm.cols());
  for (std::size_t r = 0; r < fm.rows(); ++r) {
    for (std::size_t c = 0; c < fm.cols(); ++c) row[c] = fm.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    io::writeF64s(out, row);
  }
  return out.str();
}

FeatureMatrix decodeFeatureMatrix(std::string_view bytes) {
  if (bytes.size() < kFeatureHeaderBytes || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw FormatError("feature matrix: bad magic or truncated header");
  }
  std::istringstream in(std::string(bytes.substr(sizeof kMagic)), std::ios::binary);
  if (io::readU32(in) != kVersion) throw FormatError("feature matrix: unsupported version");
  io::readU32(in);
  const auto rows = io::readU64(in);
  const auto cols = io::readU64(in);
  for (int i = 0; i < 4; ++i) io::readU64(in);
  if (rows * cols * 8 > bytes.size()) throw FormatError("feature matrix: truncated data");
  FeatureMatrix fm;
  fm.schema.reserve(cols);
  for (std::uint64_t c = 0; c < cols; ++c) fm.schema.push_back(io::readString(in));
  for (std::uint64_t r = 0; r < rows; ++r) fm.kept.push_back(io::readU64(in));
  fm.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::uint64_t r = 0; r < rows; ++r) {
    const auto row = io::readF64s(in, cols);
    for (std::uint64_t c = 0; c < cols; ++c) fm.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
  }
  return fm;
}

void writeFeatureMatrix(const std::string& path, const FeatureMatrix& fm) {
  io::writeFileAtomic(path, encodeFeatureMatrix(fm));
}

FeatureMatrix readFeatureMatrix(const std::string& path) { return decodeFeatureMatrix(io::readFile(path)); }

}  // namespace ispar::features
