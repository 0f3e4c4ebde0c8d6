#include "rowlearn/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <numeric>
#include <sstream>

#include "rowlearn/errors.hpp"

namespace rowlearn {

const char* to_string(EquivalenceStrategy s) noexcept {
  switch (s) {
    case EquivalenceStrategy::RandomWalk: return "random-walk";
    case EquivalenceStrategy::WpMethod: return "wp";
    case EquivalenceStrategy::RandomWalkThenWp: return "random-walk+wp";
  }
  return "?";
}

EquivalenceStrategy parse_equivalence(std::string_view text) {
  if (text == "random-walk" || text == "rw") return EquivalenceStrategy::RandomWalk;
  if (text == "wp") return EquivalenceStrategy::WpMethod;
  if (text == "random-walk+wp" || text == "rw+wp") return EquivalenceStrategy::RandomWalkThenWp;
  throw ConfigError("unknown equivalence strategy '" + std::string(text) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '"')) s.remove_suffix(1);
  return s;
}

std::uint64_t to_u64(std::string_view key, std::string_view text) {
  text = trim(text);
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    text.remove_prefix(2);
    base = 16;
  }
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v, base);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" + std::string(text) + "'");
  return v;
}

bool to_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(std::string(key) + ": expected a boolean, got '" + std::string(text) + "'");
}

std::vector<std::uint32_t> to_rows(std::string_view key, std::string_view text) {
  std::vector<std::uint32_t> rows;
  text = trim(text);
  if (text.starts_with('[')) text.remove_prefix(1);
  if (text.ends_with(']')) text.remove_suffix(1);
  if (trim(text).empty()) return rows;
  for (const auto& v : parse_value_list(text)) rows.push_back(static_cast<std::uint32_t>(to_u64(key, v)));
  return rows;
}

std::string rows_string(const std::vector<std::uint32_t>& rows) {
  std::string s;
  for (std::size_t i = 0; i < rows.size(); ++i) s += (i ? "," : "") + std::to_string(rows[i]);
  return s;
}

struct Key {
  std::string name;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

template <typename T>
Key number(std::string name, T RunConfig::*outer) {
  return {name, [outer](const RunConfig& c) { return std::to_string(c.*outer); },
          [outer, name](RunConfig& c, std::string_view v) { c.*outer = static_cast<T>(to_u64(name, v)); }};
}

template <typename S, typename T>
Key number(std::string name, S RunConfig::*outer, T S::*inner) {
  return {name, [outer, inner](const RunConfig& c) { return std::to_string(c.*outer.*inner); },
          [outer, inner, name](RunConfig& c, std::string_view v) { c.*outer.*inner = static_cast<T>(to_u64(name, v)); }};
}

const std::vector<Key>& key_table() {
  static const std::vector<Key> table = {
      number("memory_size", &RunConfig::sim, &SimConfig::memory_size),
      number("trr_counters", &RunConfig::trr, &TrrConfig::num_counters),
      number("max_flips", &RunConfig::max_flips),
      number("accesses_per_symbol", &RunConfig::accesses_per_symbol),
      number("trr_threshold", &RunConfig::trr, &TrrConfig::trr_threshold),
      number("rowhammer_threshold", &RunConfig::sim, &SimConfig::rowhammer_threshold),
      number("refresh_interval", &RunConfig::sim, &SimConfig::refresh_interval),
      number("blast_radius", &RunConfig::sim, &SimConfig::blast_radius),
      number("trr_radius", &RunConfig::trr, &TrrConfig::trr_radius),
      number("rw_max_steps", &RunConfig::rw_max_steps),
      number("rw_walks", &RunConfig::rw_walks),
      number("seed", &RunConfig::seed),
      {"trr_policy", [](const RunConfig& c) { return std::string(to_string(c.trr.policy)); },
       [](RunConfig& c, std::string_view v) { c.trr.policy = parse_trr_policy(trim(v)); }},
      number("trr_timeout", &RunConfig::trr, &TrrConfig::inactivity_timeout),
      {"trr_pinned_rows", [](const RunConfig& c) { return rows_string(c.trr.pinned_rows); },
       [](RunConfig& c, std::string_view v) { c.trr.pinned_rows = to_rows("trr_pinned_rows", v); }},
      {"ecc", [](const RunConfig& c) { return c.ecc.enabled ? std::string(to_string(c.ecc.code)) : std::string("none"); },
       [](RunConfig& c, std::string_view v) {
         v = trim(v);
         c.ecc.enabled = !(v == "none" || v == "off");
         if (c.ecc.enabled) c.ecc.code = parse_ecc_code(v);
       }},
      number("ecc_symbol_bits", &RunConfig::ecc, &EccConfig::symbol_bits),
      number("ecc_nsym", &RunConfig::ecc, &EccConfig::nsym),
      number("value_width", &RunConfig::sim, &SimConfig::value_width),
      {"alphabet_rows", [](const RunConfig& c) { return rows_string(c.alphabet_rows); },
       [](RunConfig& c, std::string_view v) { c.alphabet_rows = to_rows("alphabet_rows", v); }},
      {"zero_flip_symbols", [](const RunConfig& c) { return std::string(c.zero_flip_symbols ? "true" : "false"); },
       [](RunConfig& c, std::string_view v) { c.zero_flip_symbols = to_bool("zero_flip_symbols", v); }},
      {"equivalence", [](const RunConfig& c) { return std::string(to_string(c.equivalence)); },
       [](RunConfig& c, std::string_view v) { c.equivalence = parse_equivalence(trim(v)); }},
      number("wp_depth", &RunConfig::wp_depth),
      number("query_budget", &RunConfig::query_budget),
      {"full_audit", [](const RunConfig& c) { return std::string(c.full_audit ? "true" : "false"); },
       [](RunConfig& c, std::string_view v) { c.full_audit = to_bool("full_audit", v); }},
  };
  return table;
}

const Key& find_key(std::string_view name) {
  const auto& table = key_table();
  const auto it = std::find_if(table.begin(), table.end(), [&](const Key& k) { return k.name == name; });
  if (it == table.end()) throw ConfigError("unknown configuration key '" + std::string(name) + "'");
  return *it;
}

}  // namespace

std::vector<AccessSymbol> RunConfig::alphabet() const {
  std::vector<std::uint32_t> rows = alphabet_rows;
  if (rows.empty()) {
    rows.resize(sim.memory_size);
    std::iota(rows.begin(), rows.end(), 0U);
  }
  std::vector<std::uint32_t> flips;
  for (std::uint32_t f = zero_flip_symbols ? 0 : 1; f <= max_flips; ++f) flips.push_back(f);
  return make_alphabet(accesses_per_symbol, rows, flips);
}

AdapterConfig RunConfig::adapter_config() const {
  return AdapterConfig{sim, trr, ecc, alphabet(), full_audit, nullptr};
}

void RunConfig::validate() const {
  sim.validate();
  trr.validate();
  if (ecc.enabled) ecc.validate();
  if (accesses_per_symbol == 0) throw ConfigError("accesses_per_symbol must be positive");
  if (max_flips == 0 && !zero_flip_symbols) throw ConfigError("max_flips is 0 and zero-flip symbols are off");
  for (auto r : alphabet_rows)
    if (r >= sim.memory_size) throw ConfigError("alphabet row " + std::to_string(r) + " outside memory");
  if (rw_max_steps == 0) throw ConfigError("rw_max_steps must be positive");
}

void RunConfig::set(std::string_view key, std::string_view value) { find_key(trim(key)).set(*this, value); }

std::string RunConfig::get(std::string_view key) const { return find_key(trim(key)).get(*this); }

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& k : key_table()) n.push_back(k.name);
    return n;
  }();
  return names;
}

std::string RunConfig::dump() const {
  std::ostringstream out;
  for (const auto& k : key_table()) out << k.name << " = " << k.get(*this) << '\n';
  return out.str();
}

void SweepSpec::validate() const {
  find_key(parameter);
  if (values.empty()) throw ConfigError("sweep has no values");
  if (repetitions == 0) throw ConfigError("sweep repetitions must be positive");
}

std::vector<std::string> parse_value_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string_view item = trim(text.substr(start, comma - start));
    start = comma + 1;
    if (item.empty()) continue;
    const auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      out.emplace_back(item);
      continue;
    }
    const auto colon = item.find(':', dots);
    const std::uint64_t lo = to_u64("range", item.substr(0, dots));
    const std::uint64_t hi = to_u64("range", item.substr(dots + 2, colon == std::string_view::npos ? std::string_view::npos
                                                                                                  : colon - dots - 2));
    const std::uint64_t step = colon == std::string_view::npos ? 1 : to_u64("range", item.substr(colon + 1));
    if (step == 0 || lo > hi) throw ConfigError("bad range '" + std::string(item) + "'");
    for (std::uint64_t v = lo; v <= hi; v += step) out.push_back(std::to_string(v));
  }
  return out;
}

}  // namespace rowlearn
