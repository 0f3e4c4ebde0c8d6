#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "rowlearn/dram.hpp"
#include "rowlearn/ecc.hpp"
#include "rowlearn/learner.hpp"
#include "rowlearn/machine.hpp"
#include "rowlearn/trr.hpp"

namespace rowlearn {

struct AdapterConfig {
  SimConfig sim;
  TrrConfig trr;
  EccConfig ecc;
  std::vector<AccessSymbol> alphabet;
  /// Read back every row after each step instead of the blast radius only.
  bool full_audit = false;
  /// Externally supplied policy, cloned per session; overrides `trr` when set.
  std::shared_ptr<const TrrPolicy> custom_trr;
};

/// Translates abstract access symbols into hammering on a synthetic DRAM and
/// maps what happened back to one observation per step.
class AdapterSession {
 public:
  explicit AdapterSession(AdapterConfig config);

  const AdapterConfig& config() const noexcept { return config_; }
  const std::vector<AccessSymbol>& alphabet() const noexcept { return config_.alphabet; }
  const Dram& dram() const noexcept { return dram_; }
  const EccCodec& codec() const noexcept { return *codec_; }
  bool sunk() const noexcept { return sunk_; }
  /// Events of the most recent step, including readback corrections.
  const std::vector<SimEvent>& last_events() const noexcept { return events_; }

  /// Power-on state with sentinels written to every row.
  void reset();
  /// Throws AlphabetError for symbols outside the configured alphabet.
  Observation step(const AccessSymbol& symbol);
  Observation step(std::uint32_t symbol_index);

  /// Decoded value of a row; nullopt when the decoder gives up.
  std::optional<Decoded> read_row(RowAddr row) const;
  /// Sentinel data written to `row` on reset.
  BitVector sentinel(RowAddr row) const;

  /// One line per step goes to `out` while set; nullptr disables tracing.
  void set_trace(std::ostream* out) noexcept { trace_ = out; }

  /// Appends the adapter's state: sink flag plus the simulator fingerprint.
  void fingerprint(std::vector<std::uint64_t>& out) const;

 private:
  /// Flipped bits the decoder failed to repair, 0 when clean or corrected.
  std::size_t uncorrected_flips(RowAddr row, std::size_t& corrected);
  void write_trace(const AccessSymbol& symbol, Observation obs);

  AdapterConfig config_;
  std::shared_ptr<const EccCodec> codec_;
  Dram dram_;
  Dram pristine_;
  std::vector<BitVector> sentinels_;
  std::vector<BitVector> sentinel_codes_;
  std::vector<BitVector> shadow_;
  std::vector<BitVector> shadow_code_;
  std::vector<SimEvent> events_;
  bool sunk_ = false;
  std::uint64_t steps_ = 0;
  std::ostream* trace_ = nullptr;
};

/// Membership oracle over an adapter: reset, then one step per symbol.
class AdapterOracle final : public MembershipOracle {
 public:
  explicit AdapterOracle(AdapterSession& session) : session_(session) {}
  std::size_t num_inputs() const override { return session_.alphabet().size(); }
  OutputWord answer(const Word& word) override;

 private:
  AdapterSession& session_;
};

/// Formats one event the way the step trace does, e.g. "flip@120:1x2".
std::string format_event(const SimEvent& event);

}  // namespace rowlearn
