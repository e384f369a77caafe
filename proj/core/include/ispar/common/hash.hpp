#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ispar {

// 64-bit FNV-1a. Stable across platforms; used for config hashes and
// deriving per-record seeds, never for security.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

// Mixes a base seed with a stream index (splitmix64 finalizer).
std::uint64_t deriveSeed(std::uint64_t base, std::uint64_t stream);

std::string toHex(std::uint64_t value);

}  // namespace ispar
