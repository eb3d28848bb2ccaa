#pragma once

#include <cstdint>
#include <string>

namespace airtdma {

inline constexpr const char* kVersion = "0.1.0";

inline std::string to_hex_u64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

}  // namespace airtdma
