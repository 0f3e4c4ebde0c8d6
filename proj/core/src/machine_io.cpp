#include <map>
#include <regex>
#include <sstream>
#include <string>

#include "rowlearn/errors.hpp"
#include "rowlearn/machine.hpp"

namespace rowlearn {

namespace {

constexpr std::string_view kMagic = "rowhammer-machine 1";

/// Splits into non-empty, non-comment lines with surrounding blanks trimmed.
std::vector<std::string> content_lines(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(first, last - first + 1));
  }
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string f; in >> f;) out.push_back(f);
  return out;
}

std::uint64_t to_u64(const std::string& s) {
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(s, &pos);
    if (pos != s.size()) throw FormatError("bad number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw FormatError("bad number '" + s + "'");
  }
}

}  // namespace

std::string serialize(const RowhammerMachine& m) {
  std::ostringstream out;
  out << kMagic << '\n';
  out << "alphabet " << m.alphabet().size() << '\n';
  for (const auto& sym : m.alphabet()) out << to_ascii(sym) << '\n';
  out << "states " << m.num_states() << '\n';
  out << "initial " << m.initial() << '\n';
  out << "flip ";
  if (m.flip_state())
    out << *m.flip_state();
  else
    out << '-';
  out << '\n' << "transitions\n";
  for (StateId s = 0; s < m.num_states(); ++s)
    for (std::uint32_t a = 0; a < m.alphabet().size(); ++a)
      out << s << ' ' << a << ' ' << to_string(m.output(s, a)) << ' ' << m.target(s, a) << '\n';
  out << "end\n";
  return out.str();
}

RowhammerMachine parse_machine(std::string_view text) {
  const auto lines = content_lines(text);
  std::size_t i = 0;
  auto next = [&]() -> const std::string& {
    if (i >= lines.size()) throw FormatError("unexpected end of machine file");
    return lines[i++];
  };
  auto keyed = [&](std::string_view key) {
    const auto f = fields(next());
    if (f.size() != 2 || f[0] != key) throw FormatError("expected '" + std::string(key) + " <value>'");
    return f[1];
  };

  if (next() != kMagic) throw FormatError("missing 'rowhammer-machine 1' header");
  const auto num_symbols = to_u64(keyed("alphabet"));
  std::vector<AccessSymbol> alphabet;
  for (std::uint64_t k = 0; k < num_symbols; ++k) alphabet.push_back(parse_symbol(next()));
  const auto num_states = to_u64(keyed("states"));
  const auto initial = to_u64(keyed("initial"));
  const auto flip = keyed("flip");
  if (next() != "transitions") throw FormatError("expected 'transitions'");
  if (num_states == 0 || initial >= num_states) throw FormatError("bad state count or initial state");

  MealyMachine mealy(num_states, alphabet.size(), static_cast<StateId>(initial));
  for (;;) {
    const auto& line = next();
    if (line == "end") break;
    const auto f = fields(line);
    if (f.size() != 4) throw FormatError("transition lines need 4 fields: '" + line + "'");
    const auto from = to_u64(f[0]), sym = to_u64(f[1]), to = to_u64(f[3]);
    if (from >= num_states || to >= num_states || sym >= alphabet.size())
      throw FormatError("transition out of range: '" + line + "'");
    mealy.set_transition(static_cast<StateId>(from), static_cast<std::uint32_t>(sym),
                         static_cast<std::uint32_t>(parse_observation(f[2])), static_cast<StateId>(to));
  }
  if (!mealy.complete()) throw FormatError("transition table is incomplete");
  try {
    RowhammerMachine m(std::move(alphabet), mealy);
    if ((flip == "-") != !m.flip_state()) throw FormatError("declared flip state does not match transitions");
    if (m.flip_state()) {
      const auto declared = to_u64(flip);
      for (StateId s = 0; s < num_states; ++s)
        for (std::uint32_t a = 0; a < mealy.num_inputs(); ++a)
          if (mealy.output(s, a) == static_cast<std::uint32_t>(Observation::Flip) && mealy.target(s, a) != declared)
            throw FormatError("Flip transition does not enter the declared flip state");
    }
    return m;
  } catch (const ConfigError& e) {
    throw FormatError(std::string("invalid machine: ") + e.what());
  }
}

std::string export_dot(const RowhammerMachine& m) {
  auto name = [&](StateId s) { return m.is_flip_state(s) ? std::string("bot") : "q" + std::to_string(s); };
  std::ostringstream out;
  out << "digraph rowhammer {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=circle];\n";
  out << "  start [shape=point];\n";
  for (StateId s = 0; s < m.num_states(); ++s) {
    if (m.is_flip_state(s))
      out << "  bot [label=\"⊥\", shape=doublecircle, style=filled, fillcolor=lightcoral];\n";
    else
      out << "  " << name(s) << " [label=\"q" << s << "\"];\n";
  }
  out << "  start -> q0;\n";
  for (StateId s = 0; s < m.num_states(); ++s) {
    if (m.is_flip_state(s)) continue;  // loops over the flip state are omitted
    for (std::uint32_t a = 0; a < m.alphabet().size(); ++a)
      out << "  " << name(s) << " -> " << name(m.target(s, a)) << " [label=\"" << to_string(m.alphabet()[a])
          << " / " << to_glyph(m.output(s, a)) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

RowhammerMachine import_dot(std::string_view text) {
  static const std::regex node_re(R"(^\s*(q\d+|bot)\s*\[)");
  static const std::regex edge_re(R"re(^\s*(q\d+|bot)\s*->\s*(q\d+|bot)\s*\[label="([^"]*)\s/\s([^"]*)"\];?\s*$)re");

  std::map<std::string, StateId> ids;
  auto id = [&](const std::string& n) {
    if (n == "bot") return ids.try_emplace(n, 0).first->second;
    return ids.try_emplace(n, static_cast<StateId>(std::stoul(n.substr(1)))).first->second;
  };
  struct Edge {
    std::string from, to;
    AccessSymbol sym;
    Observation obs;
  };
  std::vector<Edge> edges;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    std::smatch m;
    if (std::regex_match(line, m, edge_re)) {
      edges.push_back({m[1], m[2], parse_symbol(m[3].str()), parse_observation(m[4].str())});
    } else if (std::regex_search(line, m, node_re)) {
      id(m[1]);
    }
  }
  if (!ids.count("q0")) throw FormatError("graph has no initial state q0");

  // Alphabet in first-seen order from q0 (q0 has every symbol).
  std::vector<AccessSymbol> alphabet;
  for (const auto& e : edges)
    if (e.from == "q0" && std::find(alphabet.begin(), alphabet.end(), e.sym) == alphabet.end())
      alphabet.push_back(e.sym);
  if (alphabet.empty()) throw FormatError("graph has no transitions from q0");

  StateId max_q = 0;
  for (const auto& [n, v] : ids)
    if (n != "bot") max_q = std::max(max_q, v);
  const bool has_bot = ids.count("bot") > 0;
  const StateId bot = max_q + 1;
  MealyMachine mealy(max_q + 1 + (has_bot ? 1 : 0), alphabet.size(), 0);
  auto state = [&](const std::string& n) { return n == "bot" ? bot : static_cast<StateId>(std::stoul(n.substr(1))); };
  for (const auto& e : edges) {
    const auto it = std::find(alphabet.begin(), alphabet.end(), e.sym);
    if (it == alphabet.end()) throw FormatError("symbol " + to_string(e.sym) + " missing from q0");
    mealy.set_transition(state(e.from), static_cast<std::uint32_t>(it - alphabet.begin()),
                         static_cast<std::uint32_t>(e.obs), state(e.to));
  }
  if (has_bot)
    for (std::uint32_t a = 0; a < alphabet.size(); ++a)
      mealy.set_transition(bot, a, static_cast<std::uint32_t>(Observation::Flip), bot);
  if (!mealy.complete()) throw FormatError("graph transition relation is not total");
  try {
    return RowhammerMachine(std::move(alphabet), mealy);
  } catch (const ConfigError& e) {
    throw FormatError(std::string("invalid machine: ") + e.what());
  }
}

}  // namespace rowlearn
