#include "rowlearn/learner.hpp"

#include <algorithm>
#include <chrono>
#include <map>

#include "json.hpp"

namespace rowlearn {

std::string LearnStats::to_json() const {
  nlohmann::ordered_json j;
  j["membership_queries"] = membership_queries;
  j["cache_hits"] = cache_hits;
  j["sul_queries"] = sul_queries;
  j["sul_symbols"] = sul_symbols;
  j["equivalence_rounds"] = equivalence_rounds;
  j["hypothesis_states"] = hypothesis_states;
  j["wall_time_ms"] = wall_time_ms;
  j["budget_exhausted"] = budget_exhausted;
  return j.dump(2);
}

// ---------------------------------------------------------------- cache

QueryCache::QueryCache(MembershipOracle& sul, std::uint64_t symbol_budget)
    : sul_(sul), budget_(symbol_budget), nodes_(1) {}

std::optional<std::uint32_t> QueryCache::child(std::uint32_t node, std::uint32_t input) const {
  for (const auto& [a, n] : nodes_[node].children)
    if (a == input) return n;
  return std::nullopt;
}

OutputWord QueryCache::answer(const Word& word) {
  ++stats_.membership_queries;
  OutputWord out;
  out.reserve(word.size());
  std::uint32_t node = 0;
  std::size_t depth = 0;
  for (; depth < word.size(); ++depth) {
    auto next = child(node, word[depth]);
    if (!next) break;
    node = *next;
    out.push_back(nodes_[node].output);
  }
  if (depth == word.size()) {
    ++stats_.cache_hits;
    return out;
  }

  if (stats_.sul_symbols + word.size() > budget_)
    throw BudgetExceeded("query budget of " + std::to_string(budget_) + " symbols exhausted", std::nullopt, stats_);
  ++stats_.sul_queries;
  stats_.sul_symbols += word.size();
  OutputWord fresh = sul_.answer(word);
  if (fresh.size() != word.size()) throw Error("system returned an output word of the wrong length");
  if (!std::equal(out.begin(), out.end(), fresh.begin()))
    throw Error("system is not deterministic: answer contradicts an earlier query");
  for (; depth < word.size(); ++depth) {
    nodes_[node].children.emplace_back(word[depth], static_cast<std::uint32_t>(nodes_.size()));
    node = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(Node{{}, fresh[depth]});
  }
  return fresh;
}

// ---------------------------------------------------------------- observation table

namespace {

Word concat(const Word& a, const Word& b) {
  Word w(a);
  w.insert(w.end(), b.begin(), b.end());
  return w;
}

Word concat(const Word& a, std::uint32_t x) {
  Word w(a);
  w.push_back(x);
  return w;
}

class ObservationTable {
 public:
  ObservationTable(MembershipOracle& mq, std::size_t num_inputs) : mq_(mq), m_(num_inputs) {
    for (std::uint32_t a = 0; a < m_; ++a) suffixes_.push_back(Word{a});
    add_prefix(Word{});
  }

  /// Adds rows for S.A until every one matches a row of S.
  void close() {
    for (std::size_t i = 0; i < prefixes_.size(); ++i) {
      for (std::uint32_t a = 0; a < m_; ++a) {
        const Word w = concat(prefixes_[i], a);
        const auto& r = row(w);
        if (!state_of_.count(r)) add_prefix(w);
      }
    }
  }

  MealyMachine hypothesis() {
    MealyMachine h(prefixes_.size(), m_, 0);
    for (std::size_t i = 0; i < prefixes_.size(); ++i)
      for (std::uint32_t a = 0; a < m_; ++a) {
        const auto& r = row(concat(prefixes_[i], a));
        h.set_transition(static_cast<StateId>(i), a, rows_.at(prefixes_[i])[a],
                         static_cast<StateId>(state_of_.at(r)));
      }
    return h;
  }

  /// Rivest-Schapire: binary search for the index where swapping the
  /// hypothesis' access sequence flips the verdict, then add the suffix.
  void process_counterexample(const Word& ce, const MealyMachine& h) {
    auto verdict = [&](std::size_t i) {
      const Word u(ce.begin(), ce.begin() + static_cast<long>(i));
      const Word rest(ce.begin() + static_cast<long>(i), ce.end());
      const StateId q = h.state_after(u);
      const Word& access = prefixes_[q];
      const auto out = mq_.answer(concat(access, rest));
      return std::equal(out.begin() + static_cast<long>(access.size()), out.end(), h.run(rest, q).begin());
    };
    std::size_t lo = 0, hi = ce.size();
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      (verdict(mid) ? hi : lo) = mid;
    }
    const Word v(ce.begin() + static_cast<long>(lo) + 1, ce.end());
    if (!v.empty() && std::find(suffixes_.begin(), suffixes_.end(), v) == suffixes_.end()) {
      add_suffix(v);
      return;
    }
    // Fallback: every suffix of the counterexample.
    for (std::size_t i = 1; i < ce.size(); ++i) {
      const Word s(ce.begin() + static_cast<long>(i), ce.end());
      if (std::find(suffixes_.begin(), suffixes_.end(), s) == suffixes_.end()) add_suffix(s);
    }
  }

  std::size_t size() const noexcept { return prefixes_.size(); }

 private:
  const std::vector<std::uint32_t>& row(const Word& w) {
    auto it = rows_.find(w);
    if (it != rows_.end()) return it->second;
    std::vector<std::uint32_t> r;
    for (const auto& e : suffixes_) append_cell(w, e, r);
    return rows_.emplace(w, std::move(r)).first->second;
  }

  void append_cell(const Word& prefix, const Word& suffix, std::vector<std::uint32_t>& r) {
    const auto out = mq_.answer(concat(prefix, suffix));
    r.insert(r.end(), out.end() - static_cast<long>(suffix.size()), out.end());
  }

  void add_prefix(const Word& w) {
    const auto r = row(w);
    state_of_.emplace(r, prefixes_.size());
    prefixes_.push_back(w);
  }

  void add_suffix(const Word& v) {
    suffixes_.push_back(v);
    for (auto& [w, r] : rows_) append_cell(w, v, r);
    state_of_.clear();
    for (std::size_t i = 0; i < prefixes_.size(); ++i) state_of_.emplace(rows_.at(prefixes_[i]), i);
  }

  MembershipOracle& mq_;
  std::size_t m_;
  std::vector<Word> prefixes_;
  std::vector<Word> suffixes_;
  std::map<Word, std::vector<std::uint32_t>> rows_;
  std::map<std::vector<std::uint32_t>, std::size_t> state_of_;
};

}  // namespace

LearnResult learn(MembershipOracle& mq, EquivalenceOracle& eq, const LearnOptions& options) {
  if (mq.num_inputs() == 0) throw AlphabetError("cannot learn over an empty alphabet");
  const auto start = std::chrono::steady_clock::now();
  QueryCache cache(mq, options.symbol_budget);
  std::optional<MealyMachine> latest;
  auto elapsed = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };

  try {
    ObservationTable table(cache, mq.num_inputs());
    for (;;) {
      table.close();
      MealyMachine h = table.hypothesis();
      latest = h;
      ++cache.stats().equivalence_rounds;
      const auto ce = eq.find_counterexample(h, cache);
      if (!ce) break;
      while (disagreement(h, cache, *ce)) {
        table.process_counterexample(*ce, h);
        table.close();
        h = table.hypothesis();
        latest = h;
      }
    }
  } catch (const BudgetExceeded& e) {
    LearnStats stats = cache.stats();
    stats.budget_exhausted = true;
    stats.hypothesis_states = latest ? latest->num_states() : 0;
    stats.wall_time_ms = elapsed();
    throw BudgetExceeded(e.what(), latest, stats);
  }

  LearnStats stats = cache.stats();
  stats.hypothesis_states = latest->num_states();
  stats.wall_time_ms = elapsed();
  return {std::move(*latest), stats};
}

}  // namespace rowlearn
