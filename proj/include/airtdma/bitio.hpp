#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "airtdma/errors.hpp"

namespace airtdma {

// Fixed-layout bit string, MSB-first within each octet. Unused tail bits of
// the last octet are kept zero so equal contents compare byte-equal.
class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t bit_count)
      : bits_(bit_count), bytes_((bit_count + 7) / 8, 0) {}

  std::size_t bit_count() const { return bits_; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

  bool get(std::size_t i) const {
    return (bytes_[i >> 3] >> (7 - (i & 7))) & 1u;
  }
  void set(std::size_t i, bool v) {
    std::uint8_t mask = static_cast<std::uint8_t>(1u << (7 - (i & 7)));
    if (v)
      bytes_[i >> 3] |= mask;
    else
      bytes_[i >> 3] &= static_cast<std::uint8_t>(~mask);
  }

  // Appends `other`, returning a new string (payload composition).
  Bits concat(const Bits& other) const {
    Bits out(bits_ + other.bits_);
    for (std::size_t i = 0; i < bits_; ++i) out.set(i, get(i));
    for (std::size_t i = 0; i < other.bits_; ++i) out.set(bits_ + i, other.get(i));
    return out;
  }

  friend bool operator==(const Bits& a, const Bits& b) {
    return a.bits_ == b.bits_ && a.bytes_ == b.bytes_;
  }

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint8_t> bytes_;
};

// Writes unsigned fields MSB-first at increasing bit offsets.
class BitWriter {
 public:
  explicit BitWriter(std::size_t bit_count) : bits_(bit_count) {}

  void put(std::uint64_t value, int width) {
    if (width < 1 || width > 64) throw EncodeError("field width out of range");
    if (width < 64 && value >> width)
      throw EncodeError("value does not fit field width");
    for (int i = width - 1; i >= 0; --i) bits_.set(pos_++, (value >> i) & 1u);
  }

  const Bits& finish() const {
    if (pos_ != bits_.bit_count()) throw EncodeError("bit layout not fully written");
    return bits_;
  }

 private:
  Bits bits_;
  std::size_t pos_ = 0;
};

class BitReader {
 public:
  explicit BitReader(const Bits& bits) : bits_(bits) {}

  std::uint64_t get(int width) {
    if (pos_ + width > bits_.bit_count()) throw DecodeError("read past end of bit string");
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 1) | (bits_.get(pos_++) ? 1u : 0u);
    return v;
  }

 private:
  const Bits& bits_;
  std::size_t pos_ = 0;
};

inline std::string to_hex(const std::vector<std::uint8_t>& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xF]);
  }
  return out;
}

inline std::vector<std::uint8_t> from_hex(const std::string& hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (hex.size() % 2) throw DecodeError("hex string must have even length");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = nibble(hex[2 * i]), lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw DecodeError("invalid hex digit");
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

}  // namespace airtdma
