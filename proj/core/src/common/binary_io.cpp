#include "ispar/common/binary_io.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ispar/common/error.hpp"

namespace ispar::io {

namespace {

template <typename T>
void putLe(std::ostream& out, T v) {
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  }
  out.write(reinterpret_cast<const char*>(buf), sizeof buf);
}

template <typename T>
T getLe(std::istream& in) {
  unsigned char buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof buf)) {
    throw FormatError("unexpected end of binary stream");
  }
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

void writeU32(std::ostream& out, std::uint32_t v) { putLe(out, v); }
void writeU64(std::ostream& out, std::uint64_t v) { putLe(out, v); }
void writeI64(std::ostream& out, std::int64_t v) { putLe(out, static_cast<std::uint64_t>(v)); }
void writeF64(std::ostream& out, double v) { putLe(out, std::bit_cast<std::uint64_t>(v)); }

void writeF64s(std::ostream& out, std::span<const double> values) {
  for (double v : values) writeF64(out, v);
}

void writeString(std::ostream& out, const std::string& s) {
  writeU32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint32_t readU32(std::istream& in) { return getLe<std::uint32_t>(in); }
std::uint64_t readU64(std::istream& in) { return getLe<std::uint64_t>(in); }
std::int64_t readI64(std::istream& in) { return static_cast<std::int64_t>(getLe<std::uint64_t>(in)); }
double readF64(std::istream& in) { return std::bit_cast<double>(getLe<std::uint64_t>(in)); }

std::vector<double> readF64s(std::istream& in, std::size_t count) {
  std::vector<double> values(count);
  for (auto& v : values) v = readF64(in);
  return values;
}

std::string readString(std::istream& in) {
  const std::uint32_t n = readU32(in);
  std::string s(n, '\0');
  if (n > 0 && !in.read(s.data(), n)) throw FormatError("truncated string in binary stream");
  return s;
}

void writeFileAtomic(const std::string& path, const std::string& bytes) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace ispar::io
