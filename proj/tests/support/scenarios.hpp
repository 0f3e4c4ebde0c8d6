#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rowlearn/machine.hpp"
#include "rowlearn/run_config.hpp"

namespace rowlearn::testing {

inline RunConfig configure(const std::vector<std::pair<std::string, std::string>>& settings) {
  RunConfig c;
  for (const auto& [k, v] : settings) c.set(k, v);
  c.validate();
  return c;
}

/// Two rows, 100 accesses per step, threshold 120, refresh every 200, no mitigation.
inline RunConfig two_row_flip() {
  return configure({{"memory_size", "2"},
                    {"accesses_per_symbol", "100"},
                    {"rowhammer_threshold", "120"},
                    {"refresh_interval", "200"},
                    {"trr_counters", "0"},
                    {"ecc", "none"},
                    {"max_flips", "1"}});
}

/// As two_row_flip behind Hamming(8,4), intending 1 or 2 flips.
inline RunConfig two_row_hamming() {
  auto c = two_row_flip();
  c.set("ecc", "hamming84");
  c.set("max_flips", "2");
  return c;
}

/// As two_row_flip with one TRR counter per row firing at 110.
inline RunConfig two_row_trr() {
  auto c = two_row_flip();
  c.set("trr_counters", "2");
  c.set("trr_threshold", "110");
  return c;
}

/// Four rows, one dynamic counter firing at 110, threshold 200.
inline RunConfig one_counter_bypass() {
  return configure({{"memory_size", "4"},
                    {"accesses_per_symbol", "100"},
                    {"rowhammer_threshold", "200"},
                    {"refresh_interval", "400"},
                    {"trr_policy", "dynamic"},
                    {"trr_counters", "1"},
                    {"trr_threshold", "110"},
                    {"ecc", "none"},
                    {"max_flips", "1"}});
}

/// Two counters pinned to 0x10 and 0x11; the learner hammers 0x10, 0x11, 0x14.
inline RunConfig static_policy() {
  return configure({{"memory_size", "22"},
                    {"alphabet_rows", "16,17,20"},
                    {"accesses_per_symbol", "100"},
                    {"rowhammer_threshold", "300"},
                    {"refresh_interval", "1000"},
                    {"trr_policy", "static"},
                    {"trr_counters", "2"},
                    {"trr_pinned_rows", "16,17"},
                    {"trr_threshold", "250"},
                    {"ecc", "none"},
                    {"max_flips", "1"}});
}

/// Two counters kept until refresh; the learner hammers 0x11, 0x13, 0x15.
inline RunConfig dynamic_policy() {
  return configure({{"memory_size", "23"},
                    {"alphabet_rows", "17,19,21"},
                    {"accesses_per_symbol", "100"},
                    {"rowhammer_threshold", "250"},
                    {"refresh_interval", "600"},
                    {"trr_policy", "dynamic"},
                    {"trr_counters", "2"},
                    {"trr_threshold", "120"},
                    {"ecc", "none"},
                    {"max_flips", "1"}});
}

/// Two counters with threshold k = Rowhammer threshold / 2 and an
/// inactivity timeout; the learner hammers 0x11 .. 0x19.
inline RunConfig timeout_policy() {
  return configure({{"memory_size", "27"},
                    {"alphabet_rows", "17,19,21,23,25"},
                    {"accesses_per_symbol", "100"},
                    {"rowhammer_threshold", "400"},
                    {"refresh_interval", "600"},
                    {"trr_policy", "timeout"},
                    {"trr_counters", "2"},
                    {"trr_threshold", "200"},
                    {"trr_timeout", "150"},
                    {"ecc", "none"},
                    {"max_flips", "1"}});
}

inline std::string read_data(const std::string& name) {
  std::ifstream in(std::string(ROWLEARN_TEST_DATA) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline RowhammerMachine load_machine(const std::string& name) { return parse_machine(read_data(name)); }

/// Lines "symbol observation" read from a .fragment file.
inline std::vector<std::pair<AccessSymbol, Observation>> load_fragment(const std::string& name) {
  std::vector<std::pair<AccessSymbol, Observation>> out;
  std::istringstream in(read_data(name));
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string sym, obs;
    fields >> sym >> obs;
    out.emplace_back(parse_symbol(sym), parse_observation(obs));
  }
  return out;
}

/// True when replaying the fragment's symbols yields its observations.
inline bool contains_fragment(const RowhammerMachine& m, const std::vector<std::pair<AccessSymbol, Observation>>& f) {
  std::vector<AccessSymbol> word;
  std::vector<Observation> expected;
  for (const auto& [sym, obs] : f) {
    word.push_back(sym);
    expected.push_back(obs);
  }
  return m.run(word) == expected;
}

}  // namespace rowlearn::testing
