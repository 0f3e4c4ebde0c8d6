#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rowlearn/dram.hpp"

namespace rowlearn {

enum class TrrPolicyKind { Fcfs, Static, Dynamic, ThresholdTimeout };

std::string_view to_string(TrrPolicyKind kind) noexcept;
/// Accepts "fcfs", "static", "dynamic", "timeout". Throws ConfigError otherwise.
TrrPolicyKind parse_trr_policy(std::string_view name);

struct TrrConfig {
  /// 0 disables TRR.
  std::size_t num_counters = 1;
  std::uint64_t trr_threshold = 2500;
  std::uint32_t trr_radius = 1;
  TrrPolicyKind policy = TrrPolicyKind::Fcfs;
  /// Idle accesses before a tracked row is released (timeout policy only).
  std::uint64_t inactivity_timeout = 0;
  /// Static policy pins. Empty means the lowest `num_counters` rows.
  std::vector<std::uint32_t> pinned_rows;

  void validate() const;
};

struct TrrCounter {
  std::optional<RowAddr> tracked_row;
  std::uint64_t count = 0;
  std::uint64_t last_access_time = 0;

  friend bool operator==(const TrrCounter&, const TrrCounter&) = default;
};

/// Interface for in-DRAM target row refresh. Implementations outside this
/// library can be attached to a Dram directly.
class TrrPolicy {
 public:
  virtual ~TrrPolicy() = default;

  /// Observes one access at `time`. Appends rows to refresh to `refresh` and
  /// returns true when TRR fired.
  virtual bool on_access(RowAddr row, std::uint64_t time, std::vector<RowAddr>& refresh) = 0;

  /// Scheduled refresh: all tracking state is cleared.
  virtual void reset() = 0;

  virtual std::vector<TrrCounter> counters() const = 0;
  virtual std::unique_ptr<TrrPolicy> clone() const = 0;

  /// Canonical state encoding relative to `now` (see Dram::fingerprint).
  virtual void fingerprint(std::uint64_t now, std::vector<std::uint64_t>& out) const;
};

/// Counter-based policies shared by all four built-in variants.
class CounterTrrPolicy : public TrrPolicy {
 public:
  CounterTrrPolicy(TrrConfig config, std::size_t memory_size);

  bool on_access(RowAddr row, std::uint64_t time, std::vector<RowAddr>& refresh) override;
  void reset() override;
  std::vector<TrrCounter> counters() const override { return counters_; }
  std::unique_ptr<TrrPolicy> clone() const override;
  void fingerprint(std::uint64_t now, std::vector<std::uint64_t>& out) const override;

  const TrrConfig& config() const noexcept { return config_; }

 private:
  void refresh_victims(RowAddr tracked, std::vector<RowAddr>& refresh) const;
  bool claims_rows() const noexcept;
  bool releases_on_fire() const noexcept;

  TrrConfig config_;
  std::size_t memory_size_;
  std::vector<TrrCounter> counters_;
};

std::unique_ptr<TrrPolicy> make_trr_policy(const TrrConfig& config, std::size_t memory_size);

}  // namespace rowlearn
