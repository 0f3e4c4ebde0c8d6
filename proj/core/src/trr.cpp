#include "rowlearn/trr.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "rowlearn/errors.hpp"

namespace rowlearn {

std::string_view to_string(TrrPolicyKind kind) noexcept {
  switch (kind) {
    case TrrPolicyKind::Fcfs: return "fcfs";
    case TrrPolicyKind::Static: return "static";
    case TrrPolicyKind::Dynamic: return "dynamic";
    case TrrPolicyKind::ThresholdTimeout: return "timeout";
  }
  return "?";
}

TrrPolicyKind parse_trr_policy(std::string_view name) {
  for (auto kind : {TrrPolicyKind::Fcfs, TrrPolicyKind::Static, TrrPolicyKind::Dynamic,
                    TrrPolicyKind::ThresholdTimeout})
    if (name == to_string(kind)) return kind;
  throw ConfigError("unknown TRR policy '" + std::string(name) + "'");
}

void TrrConfig::validate() const {
  if (num_counters == 0) return;
  if (trr_threshold < 1) throw ConfigError("trr_threshold must be >= 1");
  if (trr_radius < 1) throw ConfigError("trr_radius must be >= 1");
  if (policy == TrrPolicyKind::ThresholdTimeout && inactivity_timeout < 1)
    throw ConfigError("timeout policy needs inactivity_timeout >= 1");
  if (policy == TrrPolicyKind::Static && !pinned_rows.empty() && pinned_rows.size() != num_counters)
    throw ConfigError("static policy needs exactly num_counters pinned rows");
}

void TrrPolicy::fingerprint(std::uint64_t /*now*/, std::vector<std::uint64_t>& out) const {
  for (const auto& c : counters()) {
    out.push_back(c.tracked_row ? c.tracked_row->index + 1ULL : 0ULL);
    out.push_back(c.count);
  }
}

CounterTrrPolicy::CounterTrrPolicy(TrrConfig config, std::size_t memory_size)
    : config_(std::move(config)), memory_size_(memory_size) {
  config_.validate();
  if (config_.policy == TrrPolicyKind::Static && config_.pinned_rows.empty()) {
    for (std::size_t r = 0; r < std::min(config_.num_counters, memory_size_); ++r)
      config_.pinned_rows.push_back(static_cast<std::uint32_t>(r));
  }
  for (auto r : config_.pinned_rows)
    if (r >= memory_size_) throw ConfigError("pinned TRR row outside memory");
  reset();
}

bool CounterTrrPolicy::claims_rows() const noexcept { return config_.policy != TrrPolicyKind::Static; }

bool CounterTrrPolicy::releases_on_fire() const noexcept {
  return config_.policy == TrrPolicyKind::Fcfs || config_.policy == TrrPolicyKind::ThresholdTimeout;
}

void CounterTrrPolicy::reset() {
  counters_.assign(config_.num_counters, TrrCounter{});
  if (config_.policy == TrrPolicyKind::Static) {
    counters_.resize(config_.pinned_rows.size());
    for (std::size_t i = 0; i < counters_.size(); ++i)
      counters_[i].tracked_row = RowAddr{config_.pinned_rows[i]};
  }
}

void CounterTrrPolicy::refresh_victims(RowAddr tracked, std::vector<RowAddr>& refresh) const {
  for (RowAddr v : neighbors(tracked, config_.trr_radius, memory_size_))
    if (std::find(refresh.begin(), refresh.end(), v) == refresh.end()) refresh.push_back(v);
}

bool CounterTrrPolicy::on_access(RowAddr row, std::uint64_t time, std::vector<RowAddr>& refresh) {
  bool fired = false;

  if (config_.policy == TrrPolicyKind::ThresholdTimeout) {
    for (auto& c : counters_) {
      if (c.tracked_row && *c.tracked_row != row && time - c.last_access_time > config_.inactivity_timeout) {
        refresh_victims(*c.tracked_row, refresh);
        c = TrrCounter{};
        fired = true;
      }
    }
  }

  auto it = std::find_if(counters_.begin(), counters_.end(),
                         [row](const TrrCounter& c) { return c.tracked_row == row; });
  if (it == counters_.end() && claims_rows()) {
    it = std::find_if(counters_.begin(), counters_.end(),
                      [](const TrrCounter& c) { return !c.tracked_row; });
    if (it != counters_.end()) {
      it->tracked_row = row;
      it->count = 0;
    }
  }
  if (it == counters_.end()) return fired;

  ++it->count;
  it->last_access_time = time;
  if (it->count >= config_.trr_threshold) {
    refresh_victims(row, refresh);
    fired = true;
    if (releases_on_fire())
      *it = TrrCounter{};
    else
      it->count = 0;
  }
  return fired;
}

std::unique_ptr<TrrPolicy> CounterTrrPolicy::clone() const {
  return std::make_unique<CounterTrrPolicy>(*this);
}

void CounterTrrPolicy::fingerprint(std::uint64_t now, std::vector<std::uint64_t>& out) const {
  // Free slots are interchangeable, so the encoding is order-independent.
  std::vector<std::array<std::uint64_t, 3>> encoded;
  for (const auto& c : counters_) {
    std::uint64_t idle = 0;
    if (c.tracked_row && config_.policy == TrrPolicyKind::ThresholdTimeout)
      idle = std::min(now - c.last_access_time, config_.inactivity_timeout + 1);
    encoded.push_back({c.tracked_row ? c.tracked_row->index + 1ULL : 0ULL, c.count, idle});
  }
  std::sort(encoded.begin(), encoded.end());
  for (const auto& e : encoded) out.insert(out.end(), e.begin(), e.end());
}

std::unique_ptr<TrrPolicy> make_trr_policy(const TrrConfig& config, std::size_t memory_size) {
  if (config.num_counters == 0) return nullptr;
  return std::make_unique<CounterTrrPolicy>(config, memory_size);
}

}  // namespace rowlearn
