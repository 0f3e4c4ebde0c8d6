#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace rowlearn {

/// Fixed-width bit vector used for row contents and ECC codewords.
/// Bit 0 is the lowest-order bit.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t width);
  BitVector(std::size_t width, std::uint64_t low_word);

  std::size_t width() const noexcept { return width_; }

  bool get(std::size_t bit) const;
  void set(std::size_t bit, bool value);
  void flip(std::size_t bit);

  /// Reads `count` (<= 64) bits starting at `offset`.
  std::uint64_t extract(std::size_t offset, std::size_t count) const;
  void deposit(std::size_t offset, std::size_t count, std::uint64_t value);

  std::size_t popcount() const noexcept;
  /// Number of positions where the two vectors differ. Widths must match.
  std::size_t distance(const BitVector& other) const;

  BitVector& operator^=(const BitVector& other);
  friend bool operator==(const BitVector&, const BitVector&) = default;

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  /// Hex string, most significant word first.
  std::string to_hex() const;

 private:
  void mask_tail() noexcept;

  std::size_t width_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace rowlearn
