#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ispar/common/binary_io.hpp"
#include "ispar/common/error.hpp"
#include "ispar/common/hash.hpp"
#include "ispar/common/parallel.hpp"

using namespace ispar;

TEST(Hash, Fnv1aKnownVectors) {
  // Published FNV-1a 64-bit test vectors.
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Hash, DerivedSeedsDifferPerStream) {
  EXPECT_NE(deriveSeed(1, 0), deriveSeed(1, 1));
  EXPECT_NE(deriveSeed(1, 0), deriveSeed(2, 0));
  EXPECT_EQ(deriveSeed(7, 3), deriveSeed(7, 3));
}

TEST(Hash, HexIsSixteenLowercaseDigits) {
  EXPECT_EQ(toHex(0), "0000000000000000");
  EXPECT_EQ(toHex(0xabcdef0123456789ULL), "abcdef0123456789");
}

TEST(BinaryIo, RoundTripsEveryType) {
  std::ostringstream out(std::ios::binary);
  io::writeU32(out, 0xdeadbeef);
  io::writeU64(out, 0x0123456789abcdefULL);
  io::writeI64(out, -42);
  io::writeF64(out, -0.0);
  const std::vector<double> v{1.5, std::numeric_limits<double>::denorm_min(), -3e300};
  io::writeF64s(out, v);
  io::writeString(out, "phaseA.db4.E3");
  std::istringstream in(out.str(), std::ios::binary);
  EXPECT_EQ(io::readU32(in), 0xdeadbeefU);
  EXPECT_EQ(io::readU64(in), 0x0123456789abcdefULL);
  EXPECT_EQ(io::readI64(in), -42);
  const double z = io::readF64(in);
  EXPECT_EQ(z, 0.0);
  EXPECT_TRUE(std::signbit(z));
  EXPECT_EQ(io::readF64s(in, 3), v);
  EXPECT_EQ(io::readString(in), "phaseA.db4.E3");
}

TEST(BinaryIo, LittleEndianLayout) {
  std::ostringstream out(std::ios::binary);
  io::writeU32(out, 0x04030201);
  EXPECT_EQ(out.str(), std::string("\x01\x02\x03\x04", 4));
}

TEST(BinaryIo, TruncatedInputThrows) {
  std::istringstream in(std::string("\x01\x02", 2), std::ios::binary);
  EXPECT_THROW(io::readU32(in), FormatError);
}

TEST(BinaryIo, AtomicWriteThenRead) {
  const auto dir = std::filesystem::temp_directory_path() / "ispar_common_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "blob.bin").string();
  io::writeFileAtomic(path, std::string("abc\0def", 7));
  EXPECT_EQ(io::readFile(path), std::string("abc\0def", 7));
  io::writeFileAtomic(path, "x");
  EXPECT_EQ(io::readFile(path), "x");
  std::filesystem::remove_all(dir);
}

TEST(Parallel, EveryIndexOnceForAnyJobs) {
  for (int jobs : {1, 2, 5}) {
    std::vector<std::atomic<int>> hits(97);
    parallelFor(hits.size(), jobs, [&](std::size_t i) { hits[i]++; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(Parallel, RethrowsTaskFailure) {
  EXPECT_THROW(parallelFor(10, 3,
                           [](std::size_t i) {
                             if (i == 4) throw std::runtime_error("boom");
                           }),
               std::runtime_error);
}
