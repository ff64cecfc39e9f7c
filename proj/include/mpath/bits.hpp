#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mpath/rng.hpp"

namespace mpath {

/// Packed bit sequence. Bits past size() in the last word are kept zero.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t nbits) : size_(nbits), words_((nbits + 63) / 64, 0) {}

  static BitString random(std::size_t nbits, Rng& rng);
  /// Low `nbits` bits of `value`, bit k = (value >> k) & 1.
  static BitString from_uint(std::uint64_t value, std::size_t nbits);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool get(std::size_t k) const { return (words_[k / 64] >> (k % 64)) & 1U; }
  void set(std::size_t k, bool v);

  /// Bits [offset, offset + len). Throws std::out_of_range past the end.
  BitString slice(std::size_t offset, std::size_t len) const;
  void append(const BitString& o);
  /// Element-wise XOR; sizes must match.
  BitString& operator^=(const BitString& o);
  friend BitString operator^(BitString a, const BitString& b) { return a ^= b; }

  /// First min(size, 64) bits as an integer.
  std::uint64_t to_uint() const;
  std::string to_hex() const;

  bool operator==(const BitString&) const = default;

 private:
  void clear_tail();

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace mpath
