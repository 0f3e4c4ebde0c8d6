#include "rowlearn/machine.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <map>
#include <string>

#include "rowlearn/errors.hpp"

namespace rowlearn {

// ---------------------------------------------------------------- MealyMachine

MealyMachine::MealyMachine(std::size_t num_states, std::size_t num_inputs, StateId initial)
    : num_states_(num_states),
      num_inputs_(num_inputs),
      initial_(initial),
      targets_(num_states * num_inputs, 0),
      outputs_(num_states * num_inputs, 0),
      defined_(num_states * num_inputs, false) {
  if (num_states > 0 && initial >= num_states) throw ConfigError("initial state out of range");
}

std::size_t MealyMachine::index(StateId s, std::uint32_t a) const {
  if (s >= num_states_) throw ConfigError("state out of range");
  if (a >= num_inputs_) throw AlphabetError("input symbol " + std::to_string(a) + " outside alphabet");
  return static_cast<std::size_t>(s) * num_inputs_ + a;
}

StateId MealyMachine::add_state() {
  targets_.resize(targets_.size() + num_inputs_, 0);
  outputs_.resize(outputs_.size() + num_inputs_, 0);
  defined_.resize(defined_.size() + num_inputs_, false);
  return static_cast<StateId>(num_states_++);
}

void MealyMachine::set_transition(StateId from, std::uint32_t input, std::uint32_t output, StateId to) {
  if (to >= num_states_) throw ConfigError("transition target out of range");
  const auto i = index(from, input);
  targets_[i] = to;
  outputs_[i] = output;
  defined_[i] = true;
}

StateId MealyMachine::target(StateId from, std::uint32_t input) const { return targets_[index(from, input)]; }
std::uint32_t MealyMachine::output(StateId from, std::uint32_t input) const { return outputs_[index(from, input)]; }

bool MealyMachine::complete() const noexcept {
  return std::all_of(defined_.begin(), defined_.end(), [](bool b) { return b; });
}

StateId MealyMachine::state_after(const Word& word, StateId from) const {
  StateId s = from;
  for (auto a : word) s = target(s, a);
  return s;
}

OutputWord MealyMachine::run(const Word& word, StateId from) const {
  OutputWord out;
  out.reserve(word.size());
  StateId s = from;
  for (auto a : word) {
    const auto i = index(s, a);
    out.push_back(outputs_[i]);
    s = targets_[i];
  }
  return out;
}

std::vector<StateId> MealyMachine::reachable() const {
  std::vector<StateId> order;
  if (num_states_ == 0) return order;
  std::vector<bool> seen(num_states_, false);
  order.push_back(initial_);
  seen[initial_] = true;
  for (std::size_t head = 0; head < order.size(); ++head)
    for (std::uint32_t a = 0; a < num_inputs_; ++a) {
      const StateId t = target(order[head], a);
      if (!seen[t]) {
        seen[t] = true;
        order.push_back(t);
      }
    }
  return order;
}

MealyMachine MealyMachine::minimized() const {
  const auto states = reachable();
  if (states.empty()) return *this;

  // Moore partition refinement: start from output signatures, refine by
  // successor blocks until stable.
  std::vector<std::uint32_t> block(num_states_, 0);
  std::size_t num_blocks = 0;
  {
    std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
    for (StateId s : states) {
      std::vector<std::uint32_t> sig(outputs_.begin() + static_cast<long>(s * num_inputs_),
                                     outputs_.begin() + static_cast<long>((s + 1) * num_inputs_));
      block[s] = ids.try_emplace(std::move(sig), static_cast<std::uint32_t>(ids.size())).first->second;
    }
    num_blocks = ids.size();
  }
  for (;;) {
    std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
    std::vector<std::uint32_t> next(num_states_, 0);
    for (StateId s : states) {
      std::vector<std::uint32_t> sig{block[s]};
      for (std::uint32_t a = 0; a < num_inputs_; ++a) sig.push_back(block[target(s, a)]);
      next[s] = ids.try_emplace(std::move(sig), static_cast<std::uint32_t>(ids.size())).first->second;
    }
    block = std::move(next);
    if (ids.size() == num_blocks) break;
    num_blocks = ids.size();
  }

  // Renumber blocks breadth-first from the initial state.
  std::vector<std::int64_t> renum(num_blocks, -1);
  std::vector<StateId> rep;
  std::deque<StateId> queue{initial_};
  renum[block[initial_]] = 0;
  rep.push_back(initial_);
  while (!queue.empty()) {
    const StateId s = queue.front();
    queue.pop_front();
    for (std::uint32_t a = 0; a < num_inputs_; ++a) {
      const StateId t = target(s, a);
      if (renum[block[t]] < 0) {
        renum[block[t]] = static_cast<std::int64_t>(rep.size());
        rep.push_back(t);
        queue.push_back(t);
      }
    }
  }
  MealyMachine out(rep.size(), num_inputs_, 0);
  for (std::size_t i = 0; i < rep.size(); ++i)
    for (std::uint32_t a = 0; a < num_inputs_; ++a)
      out.set_transition(static_cast<StateId>(i), a, output(rep[i], a),
                         static_cast<StateId>(renum[block[target(rep[i], a)]]));
  return out;
}

std::optional<Word> distinguishing_word(const MealyMachine& a, const MealyMachine& b) {
  if (a.num_inputs() != b.num_inputs()) throw AlphabetError("machines have different input alphabets");
  if (a.num_states() == 0 || b.num_states() == 0) throw ConfigError("empty machine");
  struct Node {
    StateId x, y;
    std::int64_t parent;
    std::uint32_t input;
  };
  std::vector<Node> nodes{{a.initial(), b.initial(), -1, 0}};
  std::vector<bool> seen(a.num_states() * b.num_states(), false);
  seen[a.initial() * b.num_states() + b.initial()] = true;
  auto word_to = [&](std::int64_t n, std::uint32_t last) {
    Word w{last};
    for (; nodes[static_cast<std::size_t>(n)].parent >= 0; n = nodes[static_cast<std::size_t>(n)].parent)
      w.push_back(nodes[static_cast<std::size_t>(n)].input);
    std::reverse(w.begin(), w.end());
    return w;
  };
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    const Node cur = nodes[head];
    for (std::uint32_t i = 0; i < a.num_inputs(); ++i) {
      if (a.output(cur.x, i) != b.output(cur.y, i)) return word_to(static_cast<std::int64_t>(head), i);
      const StateId tx = a.target(cur.x, i), ty = b.target(cur.y, i);
      const std::size_t key = tx * b.num_states() + ty;
      if (!seen[key]) {
        seen[key] = true;
        nodes.push_back({tx, ty, static_cast<std::int64_t>(head), i});
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- symbols

std::string_view to_string(Observation obs) noexcept {
  switch (obs) {
    case Observation::Ok: return "OK";
    case Observation::Flip: return "Flip";
    case Observation::Trr: return "TRR";
    case Observation::Ecc: return "ECC";
  }
  return "?";
}

std::string_view to_glyph(Observation obs) noexcept {
  return obs == Observation::Ok ? std::string_view{"✓"} : to_string(obs);
}

Observation parse_observation(std::string_view text) {
  if (text == "OK" || text == "✓") return Observation::Ok;
  if (text == "Flip") return Observation::Flip;
  if (text == "TRR") return Observation::Trr;
  if (text == "ECC") return Observation::Ecc;
  throw FormatError("unknown observation '" + std::string(text) + "'");
}

std::string to_string(const AccessSymbol& sym) {
  return std::to_string(sym.count) + "↷" + std::to_string(sym.row.index) + "⇒" +
         std::to_string(sym.intended_flips);
}

std::string to_ascii(const AccessSymbol& sym) {
  return std::to_string(sym.count) + "x" + std::to_string(sym.row.index) + "=>" +
         std::to_string(sym.intended_flips);
}

namespace {

template <typename T>
T parse_number(std::string_view text, const char* what) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw FormatError(std::string("bad ") + what + " '" + std::string(text) + "'");
  return value;
}

}  // namespace

AccessSymbol parse_symbol(std::string_view text) {
  auto split = [&](std::initializer_list<std::string_view> seps) -> std::pair<std::string_view, std::string_view> {
    for (auto sep : seps) {
      const auto pos = text.find(sep);
      if (pos != std::string_view::npos) return {text.substr(0, pos), text.substr(pos + sep.size())};
    }
    throw FormatError("malformed access symbol '" + std::string(text) + "'");
  };
  const auto [count, rest] = split({"↷", "x"});
  text = rest;
  const auto [row, flips] = split({"⇒", "=>"});
  AccessSymbol sym;
  sym.count = parse_number<std::uint64_t>(count, "access count");
  sym.row = RowAddr{parse_number<std::uint32_t>(row, "row")};
  sym.intended_flips = parse_number<std::uint32_t>(flips, "flip count");
  if (sym.count < 1) throw FormatError("access count must be >= 1");
  return sym;
}

std::string format_word(const std::vector<AccessSymbol>& word) {
  std::string out = "[";
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out += ", ";
    out += to_string(word[i]);
  }
  return out + "]";
}

std::vector<AccessSymbol> make_alphabet(std::uint64_t count, const std::vector<std::uint32_t>& rows,
                                        const std::vector<std::uint32_t>& flips) {
  std::vector<AccessSymbol> out;
  for (auto r : rows)
    for (auto f : flips) out.push_back(AccessSymbol{count, RowAddr{r}, f});
  return out;
}

// ---------------------------------------------------------------- RowhammerMachine

namespace {

constexpr auto kFlip = static_cast<std::uint32_t>(Observation::Flip);

bool is_sink(const MealyMachine& m, StateId s) {
  for (std::uint32_t a = 0; a < m.num_inputs(); ++a)
    if (m.output(s, a) != kFlip || m.target(s, a) != s) return false;
  return m.num_inputs() > 0;
}

}  // namespace

RowhammerMachine::RowhammerMachine(std::vector<AccessSymbol> alphabet, MealyMachine machine)
    : alphabet_(std::move(alphabet)) {
  if (alphabet_.empty()) throw AlphabetError("empty alphabet");
  if (machine.num_inputs() != alphabet_.size()) throw AlphabetError("alphabet size does not match machine");
  if (!machine.complete()) throw ConfigError("transition function is not total");
  {
    auto sorted = alphabet_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw AlphabetError("duplicate symbol in alphabet");
  }

  const auto order = machine.reachable();
  std::optional<StateId> sink;
  for (StateId s : order)
    for (std::uint32_t a = 0; a < machine.num_inputs(); ++a) {
      if (machine.output(s, a) > 3) throw ConfigError("output is not an observation");
      if (machine.output(s, a) != kFlip) continue;
      const StateId t = machine.target(s, a);
      if (sink && *sink != t) throw ConfigError("Flip transitions must all target the flip state");
      sink = t;
    }
  if (sink) {
    if (*sink == machine.initial()) throw ConfigError("initial state cannot be the flip state");
    if (!is_sink(machine, *sink)) throw ConfigError("flip state must loop on Flip for every input");
    for (StateId s : order)
      for (std::uint32_t a = 0; a < machine.num_inputs(); ++a)
        if (machine.target(s, a) == *sink && machine.output(s, a) != kFlip)
          throw ConfigError("only Flip transitions may enter the flip state");
  }

  // Canonical numbering: breadth-first, flip state last.
  std::vector<std::int64_t> renum(machine.num_states(), -1);
  std::vector<StateId> rep;
  for (StateId s : order)
    if (!sink || s != *sink) {
      renum[s] = static_cast<std::int64_t>(rep.size());
      rep.push_back(s);
    }
  if (sink) {
    renum[*sink] = static_cast<std::int64_t>(rep.size());
    rep.push_back(*sink);
    flip_ = static_cast<StateId>(rep.size() - 1);
  }
  mealy_ = MealyMachine(rep.size(), alphabet_.size(), 0);
  for (std::size_t i = 0; i < rep.size(); ++i)
    for (std::uint32_t a = 0; a < alphabet_.size(); ++a)
      mealy_.set_transition(static_cast<StateId>(i), a, machine.output(rep[i], a),
                            static_cast<StateId>(renum[machine.target(rep[i], a)]));
}

RowhammerMachine RowhammerMachine::from_mealy(std::vector<AccessSymbol> alphabet, const MealyMachine& machine) {
  MealyMachine m = machine.minimized();
  std::optional<StateId> sink;
  for (StateId s = 0; s < m.num_states(); ++s)
    if (is_sink(m, s)) sink = s;
  if (sink && *sink == m.initial()) {
    // Everything flips at once: q0 must stay distinct from the sink.
    const StateId fresh = m.add_state();
    for (std::uint32_t a = 0; a < m.num_inputs(); ++a) {
      m.set_transition(fresh, a, kFlip, fresh);
      m.set_transition(*sink, a, kFlip, fresh);
    }
    sink = fresh;
  }
  if (sink) {
    std::optional<StateId> doomed;
    const std::size_t original = m.num_states();
    for (StateId s = 0; s < original; ++s)
      for (std::uint32_t a = 0; a < m.num_inputs(); ++a)
        if (m.target(s, a) == *sink && m.output(s, a) != kFlip) {
          if (!doomed) {
            doomed = m.add_state();
            for (std::uint32_t b = 0; b < m.num_inputs(); ++b) m.set_transition(*doomed, b, kFlip, *sink);
          }
          m.set_transition(s, a, m.output(s, a), *doomed);
        }
  }
  return RowhammerMachine(std::move(alphabet), m);
}

std::uint32_t RowhammerMachine::symbol_index(const AccessSymbol& sym) const {
  const auto it = std::find(alphabet_.begin(), alphabet_.end(), sym);
  if (it == alphabet_.end()) throw AlphabetError("symbol " + to_string(sym) + " is not in the alphabet");
  return static_cast<std::uint32_t>(it - alphabet_.begin());
}

Word RowhammerMachine::to_word(const std::vector<AccessSymbol>& symbols) const {
  Word w;
  w.reserve(symbols.size());
  for (const auto& s : symbols) w.push_back(symbol_index(s));
  return w;
}

std::vector<AccessSymbol> RowhammerMachine::to_symbols(const Word& word) const {
  std::vector<AccessSymbol> out;
  out.reserve(word.size());
  for (auto i : word) {
    if (i >= alphabet_.size()) throw AlphabetError("symbol index outside alphabet");
    out.push_back(alphabet_[i]);
  }
  return out;
}

std::vector<Observation> RowhammerMachine::run(const std::vector<AccessSymbol>& word) const {
  const auto raw = mealy_.run(to_word(word));
  std::vector<Observation> out;
  out.reserve(raw.size());
  for (auto o : raw) out.push_back(static_cast<Observation>(o));
  return out;
}

EquivalenceResult equivalent(const RowhammerMachine& a, const RowhammerMachine& b) {
  if (a.alphabet().size() != b.alphabet().size()) throw AlphabetError("alphabet mismatch");
  // Re-index b's inputs to follow a's alphabet order.
  MealyMachine bb(b.num_states(), a.alphabet().size(), b.initial());
  for (std::uint32_t i = 0; i < a.alphabet().size(); ++i) {
    const auto j = [&] {
      try {
        return b.symbol_index(a.alphabet()[i]);
      } catch (const AlphabetError&) {
        throw AlphabetError("alphabet mismatch: " + to_string(a.alphabet()[i]));
      }
    }();
    for (StateId s = 0; s < b.num_states(); ++s)
      bb.set_transition(s, i, b.mealy().output(s, j), b.mealy().target(s, j));
  }
  const auto w = distinguishing_word(a.mealy(), bb);
  if (!w) return {};
  return {false, a.to_symbols(*w)};
}

}  // namespace rowlearn
