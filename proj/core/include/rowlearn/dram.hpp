#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "rowlearn/bits.hpp"

namespace rowlearn {

/// Row index in [0, memory_size). Internal and external addressing coincide.
struct RowAddr {
  std::uint32_t index = 0;

  constexpr RowAddr() = default;
  constexpr explicit RowAddr(std::uint32_t i) : index(i) {}
  friend constexpr auto operator<=>(RowAddr, RowAddr) = default;
};

/// Row metric: absolute index difference.
constexpr std::uint32_t dist(RowAddr a, RowAddr b) noexcept {
  return a.index > b.index ? a.index - b.index : b.index - a.index;
}

/// All valid rows r' != r with dist(r, r') <= radius, ascending.
std::vector<RowAddr> neighbors(RowAddr r, std::uint32_t radius, std::size_t memory_size);

struct SimConfig {
  std::size_t memory_size = 3;
  std::uint64_t rowhammer_threshold = 3000;
  /// Scheduled global refresh period, in single accesses.
  std::uint64_t refresh_interval = 6500;
  std::uint32_t blast_radius = 1;
  /// Data bits per row before ECC expansion.
  std::size_t value_width = 64;
  std::uint64_t initial_fill = 0;

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

enum class SimEventKind { TrrTriggered, FlipInjected, ScheduledRefresh, EccCorrected };

struct SimEvent {
  SimEventKind kind;
  std::uint64_t time = 0;
  /// FlipInjected / EccCorrected: the affected row.
  RowAddr row{};
  /// FlipInjected: bits flipped. EccCorrected: bits corrected.
  std::uint32_t bits = 0;
  /// TrrTriggered: rows refreshed by the policy.
  std::vector<RowAddr> rows;

  friend bool operator==(const SimEvent&, const SimEvent&) = default;
};

const char* to_string(SimEventKind kind) noexcept;

class TrrPolicy;

/// Row storage plus the environment's per-row bookkeeping.
struct MemoryState {
  std::vector<BitVector> contents;
  /// Accesses to rows within blast radius since the row's last refresh.
  std::vector<std::uint64_t> victim_count;
  std::vector<bool> flipped_this_epoch;
  std::uint64_t global_time = 0;

  MemoryState() = default;
  MemoryState(std::size_t memory_size, std::size_t stored_width, std::uint64_t fill);

  friend bool operator==(const MemoryState&, const MemoryState&) = default;
};

/// Deterministic synthetic DRAM with an optional TRR policy attached.
///
/// One call to access() is one time unit and runs the fixed pipeline:
/// count victims, let TRR react, inject at most one pending flip, then
/// apply the scheduled global refresh when the period elapses.
class Dram {
 public:
  /// `stored_width` is the physical row width (codeword width when ECC is on).
  Dram(SimConfig config, std::size_t stored_width, std::unique_ptr<TrrPolicy> trr = nullptr);
  Dram(const Dram& other);
  Dram& operator=(const Dram& other);
  Dram(Dram&&) noexcept;
  Dram& operator=(Dram&&) noexcept;
  ~Dram();

  const SimConfig& config() const noexcept { return config_; }
  const MemoryState& state() const noexcept { return state_; }
  const TrrPolicy* trr() const noexcept { return trr_.get(); }
  std::size_t stored_width() const noexcept { return stored_width_; }

  /// One hammering access to `row`. Appends any events to `events`.
  void access(RowAddr row, std::uint32_t intended_flips, std::vector<SimEvent>& events);

  const BitVector& read(RowAddr row) const;
  void write(RowAddr row, const BitVector& value);

  std::span<const RowAddr> victims_of(RowAddr row) const;

  /// Restores the power-on state: fill pattern, zero counters, time 0, TRR reset.
  void reset();

  /// Appends a canonical encoding of all behaviour-relevant state. Two Drams
  /// with equal fingerprints respond identically to every future access.
  void fingerprint(std::vector<std::uint64_t>& out) const;

 private:
  void check(RowAddr row) const;
  void refresh_row(RowAddr row);
  void refresh_all();

  SimConfig config_;
  std::size_t stored_width_;
  MemoryState state_;
  std::unique_ptr<TrrPolicy> trr_;
  std::vector<std::vector<RowAddr>> victims_;
  /// Rows at or above the threshold that have not flipped this epoch.
  std::vector<RowAddr> pending_;
  std::vector<RowAddr> trr_scratch_;
};

}  // namespace rowlearn
