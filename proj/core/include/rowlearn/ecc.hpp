#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rowlearn/bits.hpp"

namespace rowlearn {

enum class EccCode { Hamming84, ReedSolomon };

std::string_view to_string(EccCode code) noexcept;
/// Accepts "hamming84" and "reed-solomon" (alias "rs").
EccCode parse_ecc_code(std::string_view name);

struct EccConfig {
  bool enabled = true;
  EccCode code = EccCode::ReedSolomon;
  /// Reed-Solomon only.
  std::size_t symbol_bits = 8;
  std::size_t nsym = 8;

  void validate() const;
};

struct Decoded {
  BitVector data;
  std::size_t corrected_bits = 0;
};

/// Codec over one row. Physical bit layout of the codeword is codec-defined;
/// flips land in the lowest-order physical bits.
class EccCodec {
 public:
  virtual ~EccCodec() = default;
  virtual std::size_t data_width() const noexcept = 0;
  virtual std::size_t codeword_width() const noexcept = 0;
  /// Guaranteed number of correctable flipped bits under low-order placement.
  virtual std::size_t capability() const noexcept = 0;
  virtual BitVector encode(const BitVector& data) const = 0;
  /// std::nullopt means uncorrectable.
  virtual std::optional<Decoded> decode(const BitVector& codeword) const = 0;
};

/// Pass-through used when ECC is disabled.
class IdentityCodec final : public EccCodec {
 public:
  explicit IdentityCodec(std::size_t data_width) : width_(data_width) {}
  std::size_t data_width() const noexcept override { return width_; }
  std::size_t codeword_width() const noexcept override { return width_; }
  std::size_t capability() const noexcept override { return 0; }
  BitVector encode(const BitVector& data) const override;
  std::optional<Decoded> decode(const BitVector& codeword) const override;

 private:
  std::size_t width_;
};

/// Extended Hamming (8,4) SECDED, one 8-bit block per data nibble, blocks
/// stored contiguously. Block bit order: p1 p2 d1 p4 d2 d3 d4 p0.
class Hamming84Codec final : public EccCodec {
 public:
  explicit Hamming84Codec(std::size_t data_width);
  std::size_t data_width() const noexcept override { return width_; }
  std::size_t codeword_width() const noexcept override { return 2 * width_; }
  std::size_t capability() const noexcept override { return 1; }
  BitVector encode(const BitVector& data) const override;
  std::optional<Decoded> decode(const BitVector& codeword) const override;

  static std::uint8_t encode_nibble(std::uint8_t nibble) noexcept;
  /// Returns {nibble, corrected bits} or nullopt for a detected double error.
  static std::optional<std::pair<std::uint8_t, int>> decode_block(std::uint8_t block) noexcept;

 private:
  std::size_t width_;
};

/// Arithmetic in GF(2^m) for 3 <= m <= 8.
class GaloisField {
 public:
  explicit GaloisField(unsigned bits);
  unsigned bits() const noexcept { return bits_; }
  unsigned order() const noexcept { return (1U << bits_) - 1; }
  std::uint16_t mul(std::uint16_t a, std::uint16_t b) const noexcept;
  std::uint16_t div(std::uint16_t a, std::uint16_t b) const;
  std::uint16_t inv(std::uint16_t a) const { return div(1, a); }
  std::uint16_t pow_alpha(long long e) const noexcept;

 private:
  unsigned bits_;
  std::vector<std::uint16_t> exp_;
  std::vector<std::uint16_t> log_;
};

/// Systematic Reed-Solomon over GF(2^symbol_bits) with generator roots
/// alpha^0 .. alpha^(nsym-1). Codeword polynomial index = power of x; parity
/// occupies powers [0, nsym), data symbol t sits at power nsym + t.
///
/// Physical layout is bit-interleaved: physical bit i holds bit (i / n) of
/// symbol (i % n), so f contiguous low-order flips hit f distinct symbols
/// whenever f <= n. This makes the bit capability exactly floor(nsym / 2).
class ReedSolomonCodec final : public EccCodec {
 public:
  ReedSolomonCodec(std::size_t data_width, std::size_t symbol_bits, std::size_t nsym);
  std::size_t data_width() const noexcept override { return width_; }
  std::size_t codeword_width() const noexcept override { return n_ * gf_.bits(); }
  std::size_t capability() const noexcept override { return nsym_ / 2; }
  BitVector encode(const BitVector& data) const override;
  std::optional<Decoded> decode(const BitVector& codeword) const override;

  std::size_t data_symbols() const noexcept { return k_; }
  std::size_t total_symbols() const noexcept { return n_; }

  std::vector<std::uint16_t> encode_symbols(std::span<const std::uint16_t> data) const;
  /// Corrects `codeword` in place. Returns the number of symbols corrected,
  /// or nullopt when decoding fails.
  std::optional<std::size_t> correct_symbols(std::vector<std::uint16_t>& codeword) const;

 private:
  std::vector<std::uint16_t> syndromes(std::span<const std::uint16_t> codeword) const;
  std::vector<std::uint16_t> to_symbols(const BitVector& physical) const;
  BitVector to_physical(std::span<const std::uint16_t> symbols) const;

  GaloisField gf_;
  std::size_t width_;
  std::size_t nsym_;
  std::size_t k_;
  std::size_t n_;
  std::vector<std::uint16_t> generator_;
};

std::unique_ptr<EccCodec> make_codec(const EccConfig& config, std::size_t data_width);

/// Correctable bit flips under the low-order placement; 0 when disabled.
std::size_t ecc_capability(const EccConfig& config);

}  // namespace rowlearn
