#include "rowlearn/inference.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "rowlearn/errors.hpp"

namespace rowlearn {

std::string to_string(const ThresholdInterval& interval) {
  return "(" + std::to_string(interval.lower) + ", " + std::to_string(interval.upper) + "]";
}

namespace {

constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();

struct Edge {
  StateId from;
  std::uint32_t input;
};

/// Dijkstra by access count from `source`. Parents break ties toward the
/// lowest (state, input) so results are reproducible.
struct ShortestPaths {
  std::vector<std::uint64_t> dist;
  std::vector<std::optional<Edge>> parent;

  Word path_to(StateId target) const {
    Word w;
    for (StateId s = target; parent[s]; s = parent[s]->from) w.push_back(parent[s]->input);
    std::reverse(w.begin(), w.end());
    return w;
  }
};

ShortestPaths dijkstra(const RowhammerMachine& m, StateId source) {
  const std::size_t n = m.num_states();
  ShortestPaths sp{std::vector<std::uint64_t>(n, kInf), std::vector<std::optional<Edge>>(n)};
  using Item = std::pair<std::uint64_t, StateId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  sp.dist[source] = 0;
  queue.emplace(0, source);
  while (!queue.empty()) {
    const auto [d, s] = queue.top();
    queue.pop();
    if (d != sp.dist[s]) continue;
    for (std::uint32_t a = 0; a < m.alphabet().size(); ++a) {
      const StateId t = m.target(s, a);
      const std::uint64_t nd = d + m.alphabet()[a].count;
      if (nd < sp.dist[t]) {
        sp.dist[t] = nd;
        sp.parent[t] = Edge{s, a};
        queue.emplace(nd, t);
      }
    }
  }
  return sp;
}

Word concat(Word a, const Word& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

RowhammerThresholdResult infer_rowhammer_threshold(const RowhammerMachine& m) {
  RowhammerThresholdResult result;
  const auto sink = m.flip_state();
  if (!sink) return result;
  const auto sp = dijkstra(m, m.initial());
  if (sp.dist[*sink] == kInf) return result;
  result.witness = sp.path_to(*sink);
  const std::uint64_t last = m.alphabet()[result.witness.back()].count;
  result.interval = ThresholdInterval{sp.dist[*sink] - last, sp.dist[*sink]};
  return result;
}

TrrThresholdResult infer_trr_threshold(const RowhammerMachine& m) {
  TrrThresholdResult result;
  const auto from_initial = dijkstra(m, m.initial());
  std::uint64_t best = kInf;
  std::map<StateId, ShortestPaths> memo;
  for (StateId s = 0; s < m.num_states(); ++s) {
    for (std::uint32_t a = 0; a < m.alphabet().size(); ++a) {
      if (m.output(s, a) != Observation::Trr) continue;
      const StateId t = m.target(s, a);
      auto it = memo.find(t);
      if (it == memo.end()) it = memo.emplace(t, dijkstra(m, t)).first;
      const auto& back = it->second;
      if (back.dist[s] == kInf) continue;
      const std::uint64_t count = m.alphabet()[a].count;
      const std::uint64_t total = back.dist[s] + count;
      if (total >= best) continue;
      best = total;
      result.interval = ThresholdInterval{back.dist[s], total};
      result.cycle = back.path_to(s);
      result.cycle.push_back(a);
      result.witness = concat(from_initial.path_to(t), result.cycle);
    }
  }
  return result;
}

TrrSizeResult infer_trr_size(const RowhammerMachine& m) {
  TrrSizeResult result;
  const auto sink = m.flip_state();
  if (!sink) return result;

  std::vector<std::uint32_t> rows;
  for (const auto& sym : m.alphabet()) rows.push_back(sym.row.index);
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  if (rows.size() > 64) throw Error("row-set search supports at most 64 distinct rows");
  std::vector<std::uint64_t> bit(m.alphabet().size());
  for (std::size_t a = 0; a < bit.size(); ++a)
    bit[a] = 1ULL << (std::lower_bound(rows.begin(), rows.end(), m.alphabet()[a].row.index) - rows.begin());

  // 0-1 breadth-first search: adding a fresh row costs 1, a known row 0.
  using Node = std::pair<StateId, std::uint64_t>;
  std::map<Node, std::optional<std::pair<Node, std::uint32_t>>> parent;
  std::map<Node, std::size_t> cost;
  std::deque<Node> queue;
  const Node start{m.initial(), 0};
  cost[start] = 0;
  parent[start] = std::nullopt;
  queue.push_back(start);
  std::optional<Node> goal;
  while (!queue.empty()) {
    const Node node = queue.front();
    queue.pop_front();
    const std::size_t c = cost[node];
    if (node.first == *sink) {
      goal = node;
      break;
    }
    for (std::uint32_t a = 0; a < m.alphabet().size(); ++a) {
      const Node next{m.target(node.first, a), node.second | bit[a]};
      const std::size_t nc = c + (next.second != node.second ? 1 : 0);
      auto it = cost.find(next);
      if (it != cost.end() && it->second <= nc) continue;
      cost[next] = nc;
      parent[next] = std::make_pair(node, a);
      if (nc == c)
        queue.push_front(next);
      else
        queue.push_back(next);
    }
  }
  if (!goal) return result;
  result.rows = cost[*goal];
  for (Node n = *goal; parent[n]; n = parent[n]->first) result.witness.push_back(parent[n]->second);
  std::reverse(result.witness.begin(), result.witness.end());
  return result;
}

EccThresholdResult infer_ecc_threshold(const RowhammerMachine& m) {
  EccThresholdResult result;
  for (StateId s = 0; s < m.num_states(); ++s)
    for (std::uint32_t a = 0; a < m.alphabet().size(); ++a)
      if (m.output(s, a) == Observation::Ecc)
        result.max_corrected_flips = std::max(result.max_corrected_flips, m.alphabet()[a].intended_flips);
  return result;
}

InferenceReport infer_all(const RowhammerMachine& m) {
  return InferenceReport{m.num_states(), infer_rowhammer_threshold(m), infer_trr_threshold(m), infer_trr_size(m),
                         infer_ecc_threshold(m)};
}

namespace {

nlohmann::ordered_json word_json(const RowhammerMachine& m, const Word& w) {
  auto j = nlohmann::ordered_json::array();
  for (auto a : w) j.push_back(to_ascii(m.alphabet()[a]));
  return j;
}

nlohmann::ordered_json interval_json(const ThresholdInterval& i) {
  return {{"lower", i.lower}, {"upper", i.upper}};
}

}  // namespace

std::string InferenceReport::to_json(const RowhammerMachine& m) const {
  nlohmann::ordered_json j;
  j["states"] = states;
  if (rowhammer.interval) {
    j["rowhammer_threshold"] = interval_json(*rowhammer.interval);
    j["attack_trace"] = word_json(m, rowhammer.witness);
  } else {
    j["rowhammer_threshold"] = "unbounded";
    j["attack_trace"] = nullptr;
  }
  if (trr.interval) {
    j["trr_threshold"] = interval_json(*trr.interval);
    j["trr_cycle"] = word_json(m, trr.cycle);
    j["trr_witness"] = word_json(m, trr.witness);
  } else {
    j["trr_threshold"] = "absent";
    j["trr_cycle"] = nullptr;
    j["trr_witness"] = nullptr;
  }
  if (trr_size.rows) {
    j["trr_size"] = *trr_size.rows;
    j["trr_size_witness"] = word_json(m, trr_size.witness);
  } else {
    j["trr_size"] = "infinite";
    j["trr_size_witness"] = nullptr;
  }
  j["ecc_threshold"] = ecc.max_corrected_flips;
  return j.dump(2);
}

std::string InferenceReport::summary(const RowhammerMachine& m) const {
  std::ostringstream out;
  auto word = [&](const Word& w) { return format_word(m.to_symbols(w)); };
  out << "states:              " << states << '\n';
  out << "rowhammer threshold: " << (rowhammer.interval ? to_string(*rowhammer.interval) : "unbounded") << '\n';
  if (rowhammer.interval) out << "  attack trace:      " << word(rowhammer.witness) << '\n';
  out << "TRR threshold:       " << (trr.interval ? to_string(*trr.interval) : "absent") << '\n';
  if (trr.interval) out << "  TRR cycle:         " << word(trr.cycle) << '\n';
  out << "TRR size:            " << (trr_size.rows ? std::to_string(*trr_size.rows) : "infinite") << '\n';
  if (trr_size.rows) out << "  bypass trace:      " << word(trr_size.witness) << '\n';
  out << "ECC threshold:       " << ecc.max_corrected_flips << '\n';
  return out.str();
}

}  // namespace rowlearn
