#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rowlearn/adapter.hpp"
#include "rowlearn/dram.hpp"
#include "rowlearn/ecc.hpp"
#include "rowlearn/trr.hpp"

namespace rowlearn {

enum class EquivalenceStrategy { RandomWalk, WpMethod, RandomWalkThenWp };

const char* to_string(EquivalenceStrategy s) noexcept;
EquivalenceStrategy parse_equivalence(std::string_view text);

/// Everything one learning session needs. Defaults reproduce the reference
/// setup: 3 rows, 1 TRR counter, up to 6 intended flips, 1300 accesses per
/// symbol, TRR threshold 2500, Rowhammer threshold 3000, refresh every 6500.
struct RunConfig {
  SimConfig sim;
  TrrConfig trr;
  EccConfig ecc;

  std::uint64_t accesses_per_symbol = 1300;
  std::uint32_t max_flips = 6;
  bool zero_flip_symbols = false;
  /// Rows offered to the learner; empty means every row.
  std::vector<std::uint32_t> alphabet_rows;
  bool full_audit = false;

  EquivalenceStrategy equivalence = EquivalenceStrategy::RandomWalk;
  std::size_t rw_max_steps = 100;
  std::size_t rw_walks = 1000;
  std::uint64_t seed = 1;
  std::size_t wp_depth = 1;
  std::uint64_t query_budget = 10'000'000;

  std::vector<AccessSymbol> alphabet() const;
  AdapterConfig adapter_config() const;
  /// Throws ConfigError on inconsistent settings.
  void validate() const;

  /// Assigns a flat key such as "trr_threshold"; throws ConfigError.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;
  /// Every key accepted by set(), in documentation order.
  static const std::vector<std::string>& keys();
  /// "key = value" lines for every key.
  std::string dump() const;
};

/// One parameter varied over a list of values, everything else fixed.
struct SweepSpec {
  std::string parameter;
  std::vector<std::string> values;
  std::size_t repetitions = 3;

  void validate() const;
};

/// "1,2,3", "1..6" or "500..5000:500" (inclusive, with step).
std::vector<std::string> parse_value_list(std::string_view text);

}  // namespace rowlearn
