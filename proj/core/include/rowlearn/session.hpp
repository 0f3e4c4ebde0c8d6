#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rowlearn/inference.hpp"
#include "rowlearn/learner.hpp"
#include "rowlearn/machine.hpp"
#include "rowlearn/run_config.hpp"

namespace rowlearn {

std::unique_ptr<EquivalenceOracle> make_equivalence_oracle(const RunConfig& config);

struct SessionResult {
  /// Learned machine; on budget exhaustion, the last hypothesis (if any).
  std::optional<RowhammerMachine> machine;
  LearnStats stats;
  bool budget_exhausted = false;
};

/// One full learning session against the configured synthetic DRAM.
SessionResult run_session(const RunConfig& config);

struct SweepRun {
  std::string parameter;
  std::string value;
  std::size_t repetition = 0;
  std::uint64_t seed = 0;
  /// "ok", "budget" or "error".
  std::string status;
  std::string error;
  LearnStats stats;
  std::optional<InferenceReport> report;
};

/// Runs every (value, repetition) pair; repetition i uses seed base.seed + i.
/// Runs execute on up to `jobs` threads; results come back in sweep order.
std::vector<SweepRun> run_sweep(const RunConfig& base, const SweepSpec& spec, std::size_t jobs = 1,
                                const std::function<void(const SweepRun&)>& progress = {});

/// One line per run. Column list in docs/formats.md.
std::string sweep_csv(const std::vector<SweepRun>& runs);
/// One line per swept value with medians over the successful repetitions.
std::string sweep_median_csv(const std::vector<SweepRun>& runs);

}  // namespace rowlearn
