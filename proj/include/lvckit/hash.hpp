#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace lvc {

// 64-bit FNV-1a; used for feature-space ids and config hashes. The exact
// value is part of the artifact format, so this stays fixed.
constexpr std::uint64_t fnv1a64(std::string_view s,
                                std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string to_hex(std::uint64_t v);

}  // namespace lvc
