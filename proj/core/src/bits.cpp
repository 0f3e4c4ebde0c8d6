#include "rowlearn/bits.hpp"

#include <bit>
#include <cstdio>

#include "rowlearn/errors.hpp"

namespace rowlearn {

namespace {
constexpr std::size_t kWordBits = 64;
}

BitVector::BitVector(std::size_t width)
    : width_(width), words_((width + kWordBits - 1) / kWordBits, 0) {}

BitVector::BitVector(std::size_t width, std::uint64_t low_word) : BitVector(width) {
  if (!words_.empty()) {
    words_[0] = low_word;
    mask_tail();
  }
}

bool BitVector::get(std::size_t bit) const {
  if (bit >= width_) throw ConfigError("bit index out of range");
  return (words_[bit / kWordBits] >> (bit % kWordBits)) & 1U;
}

void BitVector::set(std::size_t bit, bool value) {
  if (bit >= width_) throw ConfigError("bit index out of range");
  const std::uint64_t mask = std::uint64_t{1} << (bit % kWordBits);
  if (value)
    words_[bit / kWordBits] |= mask;
  else
    words_[bit / kWordBits] &= ~mask;
}

void BitVector::flip(std::size_t bit) {
  if (bit >= width_) throw ConfigError("bit index out of range");
  words_[bit / kWordBits] ^= std::uint64_t{1} << (bit % kWordBits);
}

std::uint64_t BitVector::extract(std::size_t offset, std::size_t count) const {
  if (count > kWordBits || offset + count > width_) throw ConfigError("bit range out of range");
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < count; ++i)
    if (get(offset + i)) out |= std::uint64_t{1} << i;
  return out;
}

void BitVector::deposit(std::size_t offset, std::size_t count, std::uint64_t value) {
  if (count > kWordBits || offset + count > width_) throw ConfigError("bit range out of range");
  for (std::size_t i = 0; i < count; ++i) set(offset + i, (value >> i) & 1U);
}

std::size_t BitVector::popcount() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::size_t BitVector::distance(const BitVector& other) const {
  if (other.width_ != width_) throw ConfigError("bit vector width mismatch");
  std::size_t n = 0;
  for (std::size_t i = 0; i < words_.size(); ++i)
    n += static_cast<std::size_t>(std::popcount(words_[i] ^ other.words_[i]));
  return n;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (other.width_ != width_) throw ConfigError("bit vector width mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

std::string BitVector::to_hex() const {
  std::string out;
  char buf[17];
  for (auto it = words_.rbegin(); it != words_.rend(); ++it) {
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(*it));
    out += buf;
  }
  return out;
}

void BitVector::mask_tail() noexcept {
  const std::size_t rem = width_ % kWordBits;
  if (rem != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << rem) - 1;
}

}  // namespace rowlearn
