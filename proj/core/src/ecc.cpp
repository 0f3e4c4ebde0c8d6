#include "rowlearn/ecc.hpp"

#include <string>

#include "rowlearn/errors.hpp"

namespace rowlearn {

std::string_view to_string(EccCode code) noexcept {
  switch (code) {
    case EccCode::Hamming84: return "hamming84";
    case EccCode::ReedSolomon: return "reed-solomon";
  }
  return "?";
}

EccCode parse_ecc_code(std::string_view name) {
  if (name == "hamming84" || name == "hamming") return EccCode::Hamming84;
  if (name == "reed-solomon" || name == "rs") return EccCode::ReedSolomon;
  throw ConfigError("unknown ECC code '" + std::string(name) + "'");
}

void EccConfig::validate() const {
  if (!enabled || code != EccCode::ReedSolomon) return;
  if (symbol_bits < 3 || symbol_bits > 8) throw ConfigError("Reed-Solomon symbol_bits must be in [3, 8]");
  if (nsym < 2) throw ConfigError("Reed-Solomon nsym must be >= 2");
}

// ---------------------------------------------------------------- identity

BitVector IdentityCodec::encode(const BitVector& data) const {
  if (data.width() != width_) throw ConfigError("data width mismatch");
  return data;
}

std::optional<Decoded> IdentityCodec::decode(const BitVector& codeword) const {
  if (codeword.width() != width_) throw ConfigError("codeword width mismatch");
  return Decoded{codeword, 0};
}

// ---------------------------------------------------------------- hamming

Hamming84Codec::Hamming84Codec(std::size_t data_width) : width_(data_width) {
  if (width_ == 0 || width_ % 4 != 0) throw ConfigError("Hamming(8,4) needs a data width that is a multiple of 4");
}

std::uint8_t Hamming84Codec::encode_nibble(std::uint8_t nibble) noexcept {
  const unsigned d1 = nibble & 1U, d2 = (nibble >> 1) & 1U, d3 = (nibble >> 2) & 1U, d4 = (nibble >> 3) & 1U;
  const unsigned p1 = d1 ^ d2 ^ d4;
  const unsigned p2 = d1 ^ d3 ^ d4;
  const unsigned p4 = d2 ^ d3 ^ d4;
  unsigned block = p1 | (p2 << 1) | (d1 << 2) | (p4 << 3) | (d2 << 4) | (d3 << 5) | (d4 << 6);
  const unsigned p0 = static_cast<unsigned>(__builtin_parity(block));
  return static_cast<std::uint8_t>(block | (p0 << 7));
}

std::optional<std::pair<std::uint8_t, int>> Hamming84Codec::decode_block(std::uint8_t block) noexcept {
  unsigned syndrome = 0;
  for (unsigned pos = 1; pos <= 7; ++pos)
    if ((block >> (pos - 1)) & 1U) syndrome ^= pos;
  const bool parity_error = __builtin_parity(block) != 0;
  int corrected = 0;
  if (parity_error) {
    // Single error: position `syndrome`, or the overall parity bit itself.
    block ^= static_cast<std::uint8_t>(syndrome == 0 ? 0x80 : 1U << (syndrome - 1));
    corrected = 1;
  } else if (syndrome != 0) {
    return std::nullopt;
  }
  const auto nibble = static_cast<std::uint8_t>(((block >> 2) & 1U) | (((block >> 4) & 1U) << 1) |
                                                (((block >> 5) & 1U) << 2) | (((block >> 6) & 1U) << 3));
  return std::pair{nibble, corrected};
}

BitVector Hamming84Codec::encode(const BitVector& data) const {
  if (data.width() != width_) throw ConfigError("data width mismatch");
  BitVector out(codeword_width());
  for (std::size_t b = 0; b < width_ / 4; ++b)
    out.deposit(8 * b, 8, encode_nibble(static_cast<std::uint8_t>(data.extract(4 * b, 4))));
  return out;
}

std::optional<Decoded> Hamming84Codec::decode(const BitVector& codeword) const {
  if (codeword.width() != codeword_width()) throw ConfigError("codeword width mismatch");
  Decoded out{BitVector(width_), 0};
  for (std::size_t b = 0; b < width_ / 4; ++b) {
    auto block = decode_block(static_cast<std::uint8_t>(codeword.extract(8 * b, 8)));
    if (!block) return std::nullopt;
    out.data.deposit(4 * b, 4, block->first);
    out.corrected_bits += static_cast<std::size_t>(block->second);
  }
  return out;
}

// ---------------------------------------------------------------- GF(2^m)

namespace {
constexpr unsigned kPrimitive[9] = {0, 0, 0, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D};
}

GaloisField::GaloisField(unsigned bits) : bits_(bits) {
  if (bits < 3 || bits > 8) throw ConfigError("GF(2^m) supports 3 <= m <= 8");
  const unsigned q1 = order();
  exp_.resize(2 * q1);
  log_.assign(q1 + 1, 0);
  unsigned x = 1;
  for (unsigned i = 0; i < q1; ++i) {
    exp_[i] = static_cast<std::uint16_t>(x);
    log_[x] = static_cast<std::uint16_t>(i);
    x <<= 1;
    if (x & (1U << bits_)) x ^= kPrimitive[bits_];
  }
  for (unsigned i = q1; i < 2 * q1; ++i) exp_[i] = exp_[i - q1];
}

std::uint16_t GaloisField::mul(std::uint16_t a, std::uint16_t b) const noexcept {
  if (a == 0 || b == 0) return 0;
  return exp_[log_[a] + log_[b]];
}

std::uint16_t GaloisField::div(std::uint16_t a, std::uint16_t b) const {
  if (b == 0) throw ConfigError("division by zero in GF(2^m)");
  if (a == 0) return 0;
  return exp_[(log_[a] + order() - log_[b]) % order()];
}

std::uint16_t GaloisField::pow_alpha(long long e) const noexcept {
  const long long q1 = order();
  return exp_[static_cast<std::size_t>(((e % q1) + q1) % q1)];
}

// ---------------------------------------------------------------- Reed-Solomon

namespace {

using Poly = std::vector<std::uint16_t>;  // index = power of x

std::uint16_t eval(const GaloisField& gf, const Poly& p, std::uint16_t x) {
  std::uint16_t y = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) y = static_cast<std::uint16_t>(gf.mul(y, x) ^ *it);
  return y;
}

Poly mul(const GaloisField& gf, const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] ^= gf.mul(a[i], b[j]);
  return out;
}

}  // namespace

ReedSolomonCodec::ReedSolomonCodec(std::size_t data_width, std::size_t symbol_bits, std::size_t nsym)
    : gf_(static_cast<unsigned>(symbol_bits)), width_(data_width), nsym_(nsym) {
  if (width_ == 0) throw ConfigError("data width must be >= 1");
  if (nsym_ < 2) throw ConfigError("Reed-Solomon nsym must be >= 2");
  k_ = (width_ + symbol_bits - 1) / symbol_bits;
  n_ = k_ + nsym_;
  if (n_ > gf_.order()) throw ConfigError("Reed-Solomon block longer than 2^m - 1 symbols");
  generator_ = {1};
  for (std::size_t i = 0; i < nsym_; ++i)
    generator_ = mul(gf_, generator_, Poly{gf_.pow_alpha(static_cast<long long>(i)), 1});
}

std::vector<std::uint16_t> ReedSolomonCodec::encode_symbols(std::span<const std::uint16_t> data) const {
  if (data.size() != k_) throw ConfigError("Reed-Solomon data symbol count mismatch");
  // Remainder of data(x) * x^nsym modulo the monic generator.
  Poly work(n_, 0);
  for (std::size_t t = 0; t < k_; ++t) work[nsym_ + t] = data[t];
  for (std::size_t deg = n_ - 1; deg >= nsym_; --deg) {
    const std::uint16_t coef = work[deg];
    if (coef != 0)
      for (std::size_t j = 0; j <= nsym_; ++j) work[deg - nsym_ + j] ^= gf_.mul(coef, generator_[j]);
    if (deg == nsym_) break;
  }
  Poly codeword(n_, 0);
  for (std::size_t i = 0; i < nsym_; ++i) codeword[i] = work[i];
  for (std::size_t t = 0; t < k_; ++t) codeword[nsym_ + t] = data[t];
  return codeword;
}

std::vector<std::uint16_t> ReedSolomonCodec::syndromes(std::span<const std::uint16_t> codeword) const {
  Poly c(codeword.begin(), codeword.end());
  std::vector<std::uint16_t> s(nsym_);
  for (std::size_t i = 0; i < nsym_; ++i) s[i] = eval(gf_, c, gf_.pow_alpha(static_cast<long long>(i)));
  return s;
}

std::optional<std::size_t> ReedSolomonCodec::correct_symbols(std::vector<std::uint16_t>& codeword) const {
  if (codeword.size() != n_) throw ConfigError("Reed-Solomon codeword length mismatch");
  const auto s = syndromes(codeword);
  bool clean = true;
  for (auto v : s) clean = clean && v == 0;
  if (clean) return 0;

  // Berlekamp-Massey.
  Poly lambda{1}, prev{1};
  std::size_t errors = 0, shift = 1;
  std::uint16_t prev_disc = 1;
  for (std::size_t n = 0; n < nsym_; ++n) {
    std::uint16_t d = s[n];
    for (std::size_t i = 1; i <= errors && i < lambda.size(); ++i) d ^= gf_.mul(lambda[i], s[n - i]);
    if (d == 0) {
      ++shift;
      continue;
    }
    const std::uint16_t scale = gf_.div(d, prev_disc);
    Poly next = lambda;
    if (next.size() < prev.size() + shift) next.resize(prev.size() + shift, 0);
    for (std::size_t i = 0; i < prev.size(); ++i) next[i + shift] ^= gf_.mul(scale, prev[i]);
    if (2 * errors <= n) {
      prev = lambda;
      errors = n + 1 - errors;
      prev_disc = d;
      shift = 1;
    } else {
      ++shift;
    }
    lambda = std::move(next);
  }
  while (lambda.size() > 1 && lambda.back() == 0) lambda.pop_back();
  if (lambda.size() - 1 != errors || 2 * errors > nsym_) return std::nullopt;

  // Chien search over the (possibly shortened) block.
  std::vector<std::size_t> positions;
  for (std::size_t j = 0; j < n_; ++j)
    if (eval(gf_, lambda, gf_.pow_alpha(-static_cast<long long>(j))) == 0) positions.push_back(j);
  if (positions.size() != errors) return std::nullopt;

  // Forney: e_j = X_j * Omega(X_j^-1) / Lambda'(X_j^-1).
  Poly syn(s.begin(), s.end());
  Poly omega = mul(gf_, syn, lambda);
  omega.resize(nsym_);
  Poly deriv(lambda.size() > 1 ? lambda.size() - 1 : 1, 0);
  for (std::size_t i = 1; i < lambda.size(); i += 2) deriv[i - 1] = lambda[i];

  for (std::size_t j : positions) {
    const std::uint16_t x = gf_.pow_alpha(static_cast<long long>(j));
    const std::uint16_t x_inv = gf_.inv(x);
    const std::uint16_t denom = eval(gf_, deriv, x_inv);
    if (denom == 0) return std::nullopt;
    codeword[j] ^= gf_.mul(x, gf_.div(eval(gf_, omega, x_inv), denom));
  }
  for (auto v : syndromes(codeword))
    if (v != 0) return std::nullopt;
  return positions.size();
}

std::vector<std::uint16_t> ReedSolomonCodec::to_symbols(const BitVector& physical) const {
  std::vector<std::uint16_t> sym(n_, 0);
  for (std::size_t i = 0; i < physical.width(); ++i)
    if (physical.get(i)) sym[i % n_] |= static_cast<std::uint16_t>(1U << (i / n_));
  return sym;
}

BitVector ReedSolomonCodec::to_physical(std::span<const std::uint16_t> symbols) const {
  BitVector out(codeword_width());
  for (std::size_t i = 0; i < out.width(); ++i)
    if ((symbols[i % n_] >> (i / n_)) & 1U) out.set(i, true);
  return out;
}

BitVector ReedSolomonCodec::encode(const BitVector& data) const {
  if (data.width() != width_) throw ConfigError("data width mismatch");
  const std::size_t m = gf_.bits();
  std::vector<std::uint16_t> sym(k_, 0);
  for (std::size_t t = 0; t < k_; ++t) {
    const std::size_t count = std::min(m, width_ - t * m);
    sym[t] = static_cast<std::uint16_t>(data.extract(t * m, count));
  }
  return to_physical(encode_symbols(sym));
}

std::optional<Decoded> ReedSolomonCodec::decode(const BitVector& codeword) const {
  if (codeword.width() != codeword_width()) throw ConfigError("codeword width mismatch");
  auto sym = to_symbols(codeword);
  if (!correct_symbols(sym)) return std::nullopt;
  const std::size_t m = gf_.bits();
  Decoded out{BitVector(width_), 0};
  for (std::size_t t = 0; t < k_; ++t) {
    const std::size_t count = std::min(m, width_ - t * m);
    if ((sym[nsym_ + t] >> count) != 0) return std::nullopt;  // padding bits must stay clear
    out.data.deposit(t * m, count, sym[nsym_ + t]);
  }
  out.corrected_bits = codeword.distance(to_physical(sym));
  return out;
}

// ---------------------------------------------------------------- factory

std::unique_ptr<EccCodec> make_codec(const EccConfig& config, std::size_t data_width) {
  config.validate();
  if (!config.enabled) return std::make_unique<IdentityCodec>(data_width);
  switch (config.code) {
    case EccCode::Hamming84: return std::make_unique<Hamming84Codec>(data_width);
    case EccCode::ReedSolomon:
      return std::make_unique<ReedSolomonCodec>(data_width, config.symbol_bits, config.nsym);
  }
  throw ConfigError("unknown ECC code");
}

std::size_t ecc_capability(const EccConfig& config) {
  if (!config.enabled) return 0;
  switch (config.code) {
    case EccCode::Hamming84: return 1;
    case EccCode::ReedSolomon: return config.nsym / 2;
  }
  return 0;
}

}  // namespace rowlearn
