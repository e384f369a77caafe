#pragma once

#include <string>
#include <string_view>

#include "ispar/features/feature_matrix.hpp"

namespace ispar::features {

// Delimited text: a header row "row,<schema...>" then one line per row with
// the source window index first. Values use %.17g, so a round trip is exact.
std::string toCsv(const FeatureMatrix& fm);

// Binary layout, little-endian:
//
//   0  char[8] magic "ISPARFM1"     24 u64 columns
//   8  u32 version (1)              32 u64 reserved
//  12  u32 reserved                 40 u64 reserved
//  16  u64 rows                     48 u64 reserved, 56 u64 reserved
//
// followed by the schema (u32 length + bytes per name), the kept indices
// (u64 per row) and the row-major float64 values.
inline constexpr std::size_t kFeatureHeaderBytes = 64;
std::string encodeFeatureMatrix(const FeatureMatrix& fm);
FeatureMatrix decodeFeatureMatrix(std::string_view bytes);

void writeFeatureMatrix(const std::string& path, const FeatureMatrix& fm);
FeatureMatrix readFeatureMatrix(const std::string& path);

}  // namespace ispar::features
