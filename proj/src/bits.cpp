#include "mpath/bits.hpp"

#include <stdexcept>

namespace mpath {

BitString BitString::random(std::size_t nbits, Rng& rng) {
  BitString b(nbits);
  for (auto& w : b.words_) w = rng.next();
  b.clear_tail();
  return b;
}

BitString BitString::from_uint(std::uint64_t value, std::size_t nbits) {
  BitString b(nbits);
  if (!b.words_.empty()) b.words_[0] = value;
  b.clear_tail();
  return b;
}

void BitString::set(std::size_t k, bool v) {
  const std::uint64_t mask = std::uint64_t{1} << (k % 64);
  if (v) {
    words_[k / 64] |= mask;
  } else {
    words_[k / 64] &= ~mask;
  }
}

void BitString::clear_tail() {
  if (size_ % 64 != 0) words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
}

BitString BitString::slice(std::size_t offset, std::size_t len) const {
  if (offset > size_ || len > size_ - offset) throw std::out_of_range("BitString::slice past the end");
  BitString out(len);
  const std::size_t shift = offset % 64;
  const std::size_t base = offset / 64;
  for (std::size_t w = 0; w < out.words_.size(); ++w) {
    std::uint64_t v = words_[base + w] >> shift;
    if (shift != 0 && base + w + 1 < words_.size()) v |= words_[base + w + 1] << (64 - shift);
    out.words_[w] = v;
  }
  out.clear_tail();
  return out;
}

void BitString::append(const BitString& o) {
  const std::size_t shift = size_ % 64;
  if (shift == 0) {
    words_.insert(words_.end(), o.words_.begin(), o.words_.end());
    size_ += o.size_;
    return;
  }
  const std::size_t new_size = size_ + o.size_;
  words_.resize((new_size + 63) / 64, 0);
  const std::size_t base = size_ / 64;
  for (std::size_t w = 0; w < o.words_.size(); ++w) {
    words_[base + w] |= o.words_[w] << shift;
    if (base + w + 1 < words_.size()) words_[base + w + 1] |= o.words_[w] >> (64 - shift);
  }
  size_ = new_size;
  clear_tail();
}

BitString& BitString::operator^=(const BitString& o) {
  if (o.size_ != size_) throw std::invalid_argument("XOR of bit strings of different length");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
  return *this;
}

std::uint64_t BitString::to_uint() const { return words_.empty() ? 0 : words_[0]; }

std::string BitString::to_hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s;
  for (std::size_t k = 0; k < size_; k += 4) {
    unsigned nibble = 0;
    for (std::size_t b = 0; b < 4 && k + b < size_; ++b) nibble |= static_cast<unsigned>(get(k + b)) << b;
    s += digits[nibble];
  }
  return s;
}

}  // namespace mpath
