#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rowlearn/machine.hpp"

namespace rowlearn {

/// Half-open interval (lower, upper] of access counts.
struct ThresholdInterval {
  std::uint64_t lower = 0;
  std::uint64_t upper = 0;

  bool contains(std::uint64_t value) const noexcept { return lower < value && value <= upper; }
  std::uint64_t width() const noexcept { return upper - lower; }
  friend bool operator==(const ThresholdInterval&, const ThresholdInterval&) = default;
};

std::string to_string(const ThresholdInterval& interval);

struct RowhammerThresholdResult {
  /// nullopt when the flip state is unreachable.
  std::optional<ThresholdInterval> interval;
  /// Cheapest word from q0 to the flip state.
  Word witness;
};

struct TrrThresholdResult {
  /// nullopt when no transition outputs TRR.
  std::optional<ThresholdInterval> interval;
  /// The cycle, starting right after its TRR transition and ending with it.
  Word cycle;
  /// q0 to the cycle's start, then the cycle: ends with a TRR output.
  Word witness;
};

struct TrrSizeResult {
  /// nullopt when the flip state is unreachable.
  std::optional<std::size_t> rows;
  Word witness;
};

struct EccThresholdResult {
  std::uint32_t max_corrected_flips = 0;
};

RowhammerThresholdResult infer_rowhammer_threshold(const RowhammerMachine& m);
TrrThresholdResult infer_trr_threshold(const RowhammerMachine& m);
/// Search over (state, rows used); exponential in the number of rows.
TrrSizeResult infer_trr_size(const RowhammerMachine& m);
EccThresholdResult infer_ecc_threshold(const RowhammerMachine& m);

struct InferenceReport {
  std::size_t states = 0;
  RowhammerThresholdResult rowhammer;
  TrrThresholdResult trr;
  TrrSizeResult trr_size;
  EccThresholdResult ecc;

  std::string to_json(const RowhammerMachine& m) const;
  std::string summary(const RowhammerMachine& m) const;
};

InferenceReport infer_all(const RowhammerMachine& m);

}  // namespace rowlearn
