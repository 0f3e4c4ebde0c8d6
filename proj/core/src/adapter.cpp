#include "rowlearn/adapter.hpp"

#include <algorithm>
#include <ostream>
#include <random>

namespace rowlearn {

namespace {

std::unique_ptr<EccCodec> codec_for(const AdapterConfig& config) {
  config.sim.validate();
  config.trr.validate();
  if (config.ecc.enabled) config.ecc.validate();
  return make_codec(config.ecc, config.sim.value_width);
}

}  // namespace

AdapterSession::AdapterSession(AdapterConfig config)
    : config_(std::move(config)),
      codec_(codec_for(config_)),
      dram_(config_.sim, codec_->codeword_width(),
            config_.custom_trr ? config_.custom_trr->clone() : make_trr_policy(config_.trr, config_.sim.memory_size)),
      pristine_(dram_) {
  if (config_.alphabet.empty()) throw AlphabetError("alphabet is empty");
  for (const auto& sym : config_.alphabet) {
    if (sym.row.index >= config_.sim.memory_size)
      throw AlphabetError("alphabet symbol " + to_ascii(sym) + " addresses a row outside memory");
    if (sym.count == 0) throw AlphabetError("alphabet symbol " + to_ascii(sym) + " performs no accesses");
    if (sym.intended_flips > codec_->codeword_width())
      throw AlphabetError("alphabet symbol " + to_ascii(sym) + " intends more flips than a row holds");
  }
  for (std::size_t i = 0; i < config_.alphabet.size(); ++i)
    for (std::size_t j = i + 1; j < config_.alphabet.size(); ++j)
      if (config_.alphabet[i] == config_.alphabet[j])
        throw AlphabetError("duplicate alphabet symbol " + to_ascii(config_.alphabet[i]));

  for (std::uint32_t r = 0; r < config_.sim.memory_size; ++r) {
    sentinels_.push_back(sentinel(RowAddr{r}));
    sentinel_codes_.push_back(codec_->encode(sentinels_.back()));
    pristine_.write(RowAddr{r}, sentinel_codes_.back());
  }
  reset();
}

BitVector AdapterSession::sentinel(RowAddr row) const {
  std::mt19937_64 gen(0x5A5A0000ULL + row.index);
  BitVector value(config_.sim.value_width);
  for (std::size_t offset = 0; offset < value.width(); offset += 64)
    value.deposit(offset, std::min<std::size_t>(64, value.width() - offset), gen());
  return value;
}

void AdapterSession::reset() {
  dram_ = pristine_;
  shadow_ = sentinels_;
  shadow_code_ = sentinel_codes_;
  events_.clear();
  sunk_ = false;
  steps_ = 0;
}

std::optional<Decoded> AdapterSession::read_row(RowAddr row) const { return codec_->decode(dram_.read(row)); }

std::size_t AdapterSession::uncorrected_flips(RowAddr row, std::size_t& corrected) {
  corrected = 0;
  const BitVector& stored = dram_.read(row);
  if (stored == shadow_code_[row.index]) return 0;
  auto decoded = codec_->decode(stored);
  if (decoded && decoded->data == shadow_[row.index]) {
    corrected = decoded->corrected_bits;
    // Scrub: write the corrected codeword back.
    dram_.write(row, shadow_code_[row.index]);
    return 0;
  }
  return stored.distance(shadow_code_[row.index]);
}

Observation AdapterSession::step(std::uint32_t symbol_index) {
  if (symbol_index >= config_.alphabet.size())
    throw AlphabetError("symbol index " + std::to_string(symbol_index) + " outside alphabet");
  const AccessSymbol& symbol = config_.alphabet[symbol_index];
  events_.clear();
  ++steps_;
  if (sunk_) {
    write_trace(symbol, Observation::Flip);
    return Observation::Flip;
  }

  for (std::uint64_t i = 0; i < symbol.count; ++i) dram_.access(symbol.row, symbol.intended_flips, events_);
  const bool trr_fired = std::any_of(events_.begin(), events_.end(),
                                     [](const SimEvent& e) { return e.kind == SimEventKind::TrrTriggered; });

  std::vector<RowAddr> audit;
  if (config_.full_audit) {
    for (std::uint32_t r = 0; r < config_.sim.memory_size; ++r) audit.push_back(RowAddr{r});
  } else {
    const auto victims = dram_.victims_of(symbol.row);
    audit.assign(victims.begin(), victims.end());
  }

  bool matched = false;
  bool ecc = false;
  const std::uint64_t now = dram_.state().global_time;
  for (RowAddr row : audit) {
    std::size_t corrected = 0;
    const std::size_t flips = uncorrected_flips(row, corrected);
    if (corrected > 0) {
      ecc = true;
      events_.push_back(SimEvent{SimEventKind::EccCorrected, now, row, static_cast<std::uint32_t>(corrected), {}});
    }
    if (symbol.intended_flips > 0 && flips == symbol.intended_flips) matched = true;
  }

  Observation obs = Observation::Ok;
  if (matched) {
    obs = Observation::Flip;
    sunk_ = true;
    for (RowAddr row : audit) {
      shadow_code_[row.index] = dram_.read(row);
      if (auto decoded = codec_->decode(shadow_code_[row.index])) shadow_[row.index] = decoded->data;
    }
  } else if (ecc) {
    obs = Observation::Ecc;
  } else if (trr_fired) {
    obs = Observation::Trr;
  }
  write_trace(symbol, obs);
  return obs;
}

Observation AdapterSession::step(const AccessSymbol& symbol) {
  const auto it = std::find(config_.alphabet.begin(), config_.alphabet.end(), symbol);
  if (it == config_.alphabet.end()) throw AlphabetError("symbol " + to_ascii(symbol) + " is not in the alphabet");
  return step(static_cast<std::uint32_t>(it - config_.alphabet.begin()));
}

void AdapterSession::fingerprint(std::vector<std::uint64_t>& out) const {
  out.push_back(sunk_ ? 1 : 0);
  if (!sunk_) dram_.fingerprint(out);
}

std::string format_event(const SimEvent& event) {
  const std::string at = "@" + std::to_string(event.time);
  switch (event.kind) {
    case SimEventKind::TrrTriggered: {
      std::string s = "trr" + at + ":" + std::to_string(event.row.index) + "->";
      for (std::size_t i = 0; i < event.rows.size(); ++i)
        s += (i ? "/" : "") + std::to_string(event.rows[i].index);
      return s;
    }
    case SimEventKind::FlipInjected:
      return "flip" + at + ":" + std::to_string(event.row.index) + "x" + std::to_string(event.bits);
    case SimEventKind::ScheduledRefresh:
      return "refresh" + at;
    case SimEventKind::EccCorrected:
      return "ecc" + at + ":" + std::to_string(event.row.index) + "x" + std::to_string(event.bits);
  }
  return {};
}

void AdapterSession::write_trace(const AccessSymbol& symbol, Observation obs) {
  if (!trace_) return;
  *trace_ << steps_ << ' ' << to_ascii(symbol) << ' ' << to_string(obs) << ' ';
  if (events_.empty()) *trace_ << '-';
  for (std::size_t i = 0; i < events_.size(); ++i) *trace_ << (i ? "," : "") << format_event(events_[i]);
  *trace_ << '\n';
}

OutputWord AdapterOracle::answer(const Word& word) {
  session_.reset();
  OutputWord out;
  out.reserve(word.size());
  for (std::uint32_t a : word) out.push_back(static_cast<std::uint32_t>(session_.step(a)));
  return out;
}

}  // namespace rowlearn
