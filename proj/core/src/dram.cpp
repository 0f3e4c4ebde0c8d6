#include "rowlearn/dram.hpp"

#include <algorithm>
#include <string>

#include "rowlearn/errors.hpp"
#include "rowlearn/trr.hpp"

namespace rowlearn {

std::vector<RowAddr> neighbors(RowAddr r, std::uint32_t radius, std::size_t memory_size) {
  std::vector<RowAddr> out;
  const std::uint64_t lo = r.index >= radius ? r.index - radius : 0;
  const std::uint64_t hi = std::min<std::uint64_t>(std::uint64_t{r.index} + radius, memory_size - 1);
  for (std::uint64_t i = lo; i <= hi && memory_size > 0; ++i)
    if (i != r.index) out.emplace_back(static_cast<std::uint32_t>(i));
  return out;
}

void SimConfig::validate() const {
  if (memory_size < 1) throw ConfigError("memory_size must be >= 1");
  if (rowhammer_threshold < 1) throw ConfigError("rowhammer_threshold must be >= 1");
  if (refresh_interval < 1) throw ConfigError("refresh_interval must be >= 1");
  if (blast_radius < 1) throw ConfigError("blast_radius must be >= 1");
  if (value_width < 1) throw ConfigError("value_width must be >= 1");
}

const char* to_string(SimEventKind kind) noexcept {
  switch (kind) {
    case SimEventKind::TrrTriggered: return "TrrTriggered";
    case SimEventKind::FlipInjected: return "FlipInjected";
    case SimEventKind::ScheduledRefresh: return "ScheduledRefresh";
    case SimEventKind::EccCorrected: return "EccCorrected";
  }
  return "?";
}

MemoryState::MemoryState(std::size_t memory_size, std::size_t stored_width, std::uint64_t fill)
    : contents(memory_size, BitVector(stored_width, fill)),
      victim_count(memory_size, 0),
      flipped_this_epoch(memory_size, false) {}

Dram::Dram(SimConfig config, std::size_t stored_width, std::unique_ptr<TrrPolicy> trr)
    : config_(config), stored_width_(stored_width), trr_(std::move(trr)) {
  config_.validate();
  if (stored_width_ < 1) throw ConfigError("stored row width must be >= 1");
  victims_.reserve(config_.memory_size);
  for (std::size_t r = 0; r < config_.memory_size; ++r)
    victims_.push_back(neighbors(RowAddr{static_cast<std::uint32_t>(r)}, config_.blast_radius,
                                 config_.memory_size));
  reset();
}

Dram::Dram(const Dram& other)
    : config_(other.config_),
      stored_width_(other.stored_width_),
      state_(other.state_),
      trr_(other.trr_ ? other.trr_->clone() : nullptr),
      victims_(other.victims_),
      pending_(other.pending_) {}

Dram& Dram::operator=(const Dram& other) {
  if (this != &other) {
    Dram copy(other);
    *this = std::move(copy);
  }
  return *this;
}

Dram::Dram(Dram&&) noexcept = default;
Dram& Dram::operator=(Dram&&) noexcept = default;
Dram::~Dram() = default;

void Dram::check(RowAddr row) const {
  if (row.index >= config_.memory_size)
    throw AddressError("row " + std::to_string(row.index) + " outside memory of " +
                       std::to_string(config_.memory_size) + " rows");
}

void Dram::reset() {
  state_ = MemoryState(config_.memory_size, stored_width_, config_.initial_fill);
  pending_.clear();
  if (trr_) trr_->reset();
}

std::span<const RowAddr> Dram::victims_of(RowAddr row) const {
  check(row);
  return victims_[row.index];
}

const BitVector& Dram::read(RowAddr row) const {
  check(row);
  return state_.contents[row.index];
}

void Dram::write(RowAddr row, const BitVector& value) {
  check(row);
  if (value.width() != stored_width_) throw ConfigError("row value width mismatch");
  state_.contents[row.index] = value;
}

void Dram::refresh_row(RowAddr row) {
  state_.victim_count[row.index] = 0;
  state_.flipped_this_epoch[row.index] = false;
  std::erase(pending_, row);
}

void Dram::refresh_all() {
  std::fill(state_.victim_count.begin(), state_.victim_count.end(), 0);
  std::fill(state_.flipped_this_epoch.begin(), state_.flipped_this_epoch.end(), false);
  pending_.clear();
  if (trr_) trr_->reset();
}

void Dram::access(RowAddr row, std::uint32_t intended_flips, std::vector<SimEvent>& events) {
  check(row);
  if (intended_flips > stored_width_) throw ConfigError("intended flips exceed row width");

  const std::uint64_t now = ++state_.global_time;

  for (RowAddr v : victims_[row.index]) {
    if (++state_.victim_count[v.index] == config_.rowhammer_threshold &&
        !state_.flipped_this_epoch[v.index])
      pending_.push_back(v);
  }

  if (trr_) {
    trr_scratch_.clear();
    if (trr_->on_access(row, now, trr_scratch_)) {
      for (RowAddr v : trr_scratch_) refresh_row(v);
      events.push_back(SimEvent{SimEventKind::TrrTriggered, now, row, 0, trr_scratch_});
    }
  }

  if (!pending_.empty()) {
    auto victim = std::min_element(pending_.begin(), pending_.end(), [row](RowAddr a, RowAddr b) {
      const auto da = dist(a, row), db = dist(b, row);
      return da != db ? da < db : a < b;
    });
    const RowAddr v = *victim;
    pending_.erase(victim);
    BitVector& cell = state_.contents[v.index];
    for (std::uint32_t bit = 0; bit < intended_flips; ++bit) cell.flip(bit);
    state_.flipped_this_epoch[v.index] = true;
    events.push_back(SimEvent{SimEventKind::FlipInjected, now, v, intended_flips, {}});
  }

  if (now % config_.refresh_interval == 0) {
    refresh_all();
    events.push_back(SimEvent{SimEventKind::ScheduledRefresh, now, {}, 0, {}});
  }
}

void Dram::fingerprint(std::vector<std::uint64_t>& out) const {
  out.push_back(state_.global_time % config_.refresh_interval);
  for (std::size_t r = 0; r < config_.memory_size; ++r) {
    out.push_back(state_.victim_count[r]);
    out.push_back(state_.flipped_this_epoch[r] ? 1 : 0);
    const auto& words = state_.contents[r].words();
    out.insert(out.end(), words.begin(), words.end());
  }
  if (trr_) trr_->fingerprint(state_.global_time, out);
}

}  // namespace rowlearn
