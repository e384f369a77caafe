#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace ispar::io {

// Little-endian primitives. All on-disk binary formats in the project are
// little-endian regardless of host byte order.
void writeU32(std::ostream& out, std::uint32_t v);
void writeU64(std::ostream& out, std::uint64_t v);
void writeI64(std::ostream& out, std::int64_t v);
void writeF64(std::ostream& out, double v);
void writeF64s(std::ostream& out, std::span<const double> values);
void writeString(std::ostream& out, const std::string& s);

std::uint32_t readU32(std::istream& in);
std::uint64_t readU64(std::istream& in);
std::int64_t readI64(std::istream& in);
double readF64(std::istream& in);
std::vector<double> readF64s(std::istream& in, std::size_t count);
std::string readString(std::istream& in);

// Atomically replaces `path` with `bytes` (write to temp then rename).
void writeFileAtomic(const std::string& path, const std::string& bytes);
std::string readFile(const std::string& path);

}  // namespace ispar::io
