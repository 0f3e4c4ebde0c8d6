#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rowlearn/dram.hpp"

namespace rowlearn {

using StateId = std::uint32_t;
/// Input word as indices into an alphabet.
using Word = std::vector<std::uint32_t>;
using OutputWord = std::vector<std::uint32_t>;

/// Complete deterministic Mealy machine over inputs [0, num_inputs) with
/// integer outputs.
class MealyMachine {
 public:
  MealyMachine() = default;
  MealyMachine(std::size_t num_states, std::size_t num_inputs, StateId initial = 0);

  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_inputs() const noexcept { return num_inputs_; }
  StateId initial() const noexcept { return initial_; }

  StateId add_state();
  void set_transition(StateId from, std::uint32_t input, std::uint32_t output, StateId to);
  StateId target(StateId from, std::uint32_t input) const;
  std::uint32_t output(StateId from, std::uint32_t input) const;
  /// True once every (state, input) pair has been assigned.
  bool complete() const noexcept;

  StateId state_after(const Word& word, StateId from) const;
  StateId state_after(const Word& word) const { return state_after(word, initial_); }
  OutputWord run(const Word& word, StateId from) const;
  OutputWord run(const Word& word) const { return run(word, initial_); }

  /// Reachable states in breadth-first order over ascending inputs.
  std::vector<StateId> reachable() const;
  /// Minimal equivalent machine, states renumbered breadth-first.
  MealyMachine minimized() const;

  friend bool operator==(const MealyMachine&, const MealyMachine&) = default;

 private:
  std::size_t index(StateId s, std::uint32_t a) const;

  std::size_t num_states_ = 0;
  std::size_t num_inputs_ = 0;
  StateId initial_ = 0;
  std::vector<StateId> targets_;
  std::vector<std::uint32_t> outputs_;
  std::vector<bool> defined_;
};

/// Shortest input word on which the machines' outputs differ, or nullopt.
/// Both machines must share the input alphabet.
std::optional<Word> distinguishing_word(const MealyMachine& a, const MealyMachine& b);

enum class Observation : std::uint32_t { Ok = 0, Flip = 1, Trr = 2, Ecc = 3 };

/// "OK", "Flip", "TRR", "ECC".
std::string_view to_string(Observation obs) noexcept;
/// Display glyph used in graph labels ("✓" for OK).
std::string_view to_glyph(Observation obs) noexcept;
Observation parse_observation(std::string_view text);

/// "a ↷ r ⇒ f": access row r, a times, intending f flips.
struct AccessSymbol {
  std::uint64_t count = 1;
  RowAddr row{};
  std::uint32_t intended_flips = 0;

  friend constexpr auto operator<=>(const AccessSymbol&, const AccessSymbol&) = default;
};

/// Display form "100↷1⇒2".
std::string to_string(const AccessSymbol& sym);
/// Plain ASCII form "100x1=>2", accepted by parse_symbol along with the display form.
std::string to_ascii(const AccessSymbol& sym);
AccessSymbol parse_symbol(std::string_view text);

std::string format_word(const std::vector<AccessSymbol>& word);

/// Cross product {count} x rows x flips, ordered by row then flips.
std::vector<AccessSymbol> make_alphabet(std::uint64_t count, const std::vector<std::uint32_t>& rows,
                                        const std::vector<std::uint32_t>& flips);

/// Mealy machine over an AccessSymbol alphabet with a distinguished sink flip
/// state. Invariants (checked on construction): every Flip transition targets
/// the sink, only Flip transitions target it, and the sink loops on Flip.
/// A machine that never outputs Flip has no sink.
class RowhammerMachine {
 public:
  /// Validates and canonicalises: unreachable states dropped, states numbered
  /// breadth-first from q0 with the sink last.
  RowhammerMachine(std::vector<AccessSymbol> alphabet, MealyMachine machine);

  /// Builds from an arbitrary (e.g. learned) Mealy machine whose outputs are
  /// Observations. The machine is minimised; a non-Flip transition into the
  /// flip sink is redirected into a single "doomed" state whose every input
  /// flips, so that the sink stays reachable only through Flip.
  static RowhammerMachine from_mealy(std::vector<AccessSymbol> alphabet, const MealyMachine& machine);

  const std::vector<AccessSymbol>& alphabet() const noexcept { return alphabet_; }
  const MealyMachine& mealy() const noexcept { return mealy_; }
  std::size_t num_states() const noexcept { return mealy_.num_states(); }
  StateId initial() const noexcept { return mealy_.initial(); }
  std::optional<StateId> flip_state() const noexcept { return flip_; }
  bool is_flip_state(StateId s) const noexcept { return flip_ && *flip_ == s; }

  Observation output(StateId s, std::uint32_t input) const {
    return static_cast<Observation>(mealy_.output(s, input));
  }
  StateId target(StateId s, std::uint32_t input) const { return mealy_.target(s, input); }

  /// Index of `sym` in the alphabet; throws AlphabetError when absent.
  std::uint32_t symbol_index(const AccessSymbol& sym) const;
  Word to_word(const std::vector<AccessSymbol>& symbols) const;
  std::vector<AccessSymbol> to_symbols(const Word& word) const;

  std::vector<Observation> run(const std::vector<AccessSymbol>& word) const;

  friend bool operator==(const RowhammerMachine&, const RowhammerMachine&) = default;

 private:
  std::vector<AccessSymbol> alphabet_;
  MealyMachine mealy_;
  std::optional<StateId> flip_;
};

struct EquivalenceResult {
  bool equal = true;
  /// Shortest distinguishing word when !equal.
  std::vector<AccessSymbol> counterexample;
};

/// Behavioural equivalence by breadth-first product search. Alphabets must
/// contain the same symbols (order may differ); otherwise AlphabetError.
EquivalenceResult equivalent(const RowhammerMachine& a, const RowhammerMachine& b);

/// Plain-text serialization; grammar in docs/formats.md.
std::string serialize(const RowhammerMachine& m);
RowhammerMachine parse_machine(std::string_view text);

/// Graph description (Graphviz DOT). Loops on the flip state are omitted.
std::string export_dot(const RowhammerMachine& m);
/// Reads graphs written by export_dot.
RowhammerMachine import_dot(std::string_view text);

}  // namespace rowlearn
