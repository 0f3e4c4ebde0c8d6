#include <algorithm>
#include <deque>
#include <set>

#include "rowlearn/learner.hpp"

namespace rowlearn {

std::optional<Word> disagreement(const MealyMachine& hypothesis, MembershipOracle& mq, const Word& word) {
  const auto actual = mq.answer(word);
  const auto predicted = hypothesis.run(word);
  const auto [it, _] = std::mismatch(actual.begin(), actual.end(), predicted.begin());
  if (it == actual.end()) return std::nullopt;
  return Word(word.begin(), word.begin() + (it - actual.begin()) + 1);
}

RandomWalkOracle::RandomWalkOracle(std::size_t max_steps, std::size_t num_walks, std::uint64_t seed)
    : max_steps_(max_steps), num_walks_(num_walks), rng_(seed) {
  if (max_steps_ == 0) throw ConfigError("random walk length must be positive");
}

std::optional<Word> RandomWalkOracle::find_counterexample(const MealyMachine& hypothesis, MembershipOracle& mq) {
  std::uniform_int_distribution<std::size_t> length(1, max_steps_);
  std::uniform_int_distribution<std::uint32_t> letter(0, static_cast<std::uint32_t>(hypothesis.num_inputs() - 1));
  for (std::size_t walk = 0; walk < num_walks_; ++walk) {
    Word w(length(rng_));
    for (auto& a : w) a = letter(rng_);
    if (auto ce = disagreement(hypothesis, mq, w)) return ce;
  }
  return std::nullopt;
}

namespace {

/// Shortest access sequence for each reachable state.
std::vector<std::optional<Word>> access_sequences(const MealyMachine& m) {
  std::vector<std::optional<Word>> access(m.num_states());
  access[m.initial()] = Word{};
  std::deque<StateId> queue{m.initial()};
  while (!queue.empty()) {
    const StateId q = queue.front();
    queue.pop_front();
    for (std::uint32_t a = 0; a < m.num_inputs(); ++a) {
      const StateId t = m.target(q, a);
      if (access[t]) continue;
      access[t] = *access[q];
      access[t]->push_back(a);
      queue.push_back(t);
    }
  }
  return access;
}

/// Shortest separating word for every pair of states (empty if equivalent).
class SeparatingTable {
 public:
  explicit SeparatingTable(const MealyMachine& m) : n_(m.num_states()), first_(n_ * n_, kNone), next_(n_ * n_) {
    std::vector<std::size_t> frontier;
    std::size_t level = 0;
    std::vector<std::size_t> found_at(n_ * n_, kNone);
    for (StateId p = 0; p < n_; ++p)
      for (StateId q = p + 1; q < n_; ++q)
        for (std::uint32_t a = 0; a < m.num_inputs(); ++a)
          if (m.output(p, a) != m.output(q, a)) {
            set(p, q, a, kNone);
            found_at[idx(p, q)] = 0;
            frontier.push_back(idx(p, q));
            break;
          }
    while (!frontier.empty()) {
      ++level;
      std::vector<std::size_t> found;
      for (StateId p = 0; p < n_; ++p)
        for (StateId q = p + 1; q < n_; ++q) {
          if (found_at[idx(p, q)] != kNone) continue;
          for (std::uint32_t a = 0; a < m.num_inputs(); ++a) {
            const StateId sp = m.target(p, a), sq = m.target(q, a);
            if (sp == sq) continue;
            const std::size_t succ = idx(sp, sq);
            if (found_at[succ] < level) {
              set(p, q, a, succ);
              found_at[idx(p, q)] = level;
              found.push_back(idx(p, q));
              break;
            }
          }
        }
      frontier = std::move(found);
    }
  }

  std::optional<Word> word(StateId p, StateId q) const {
    if (p == q || first_[idx(p, q)] == kNone) return std::nullopt;
    Word w;
    for (std::size_t k = idx(p, q); k != kNone; k = next_[k]) w.push_back(first_[k]);
    return w;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::size_t idx(StateId p, StateId q) const { return p < q ? p * n_ + q : q * n_ + p; }
  void set(StateId p, StateId q, std::uint32_t a, std::size_t succ) {
    first_[idx(p, q)] = a;
    next_[idx(p, q)] = succ;
  }

  std::size_t n_;
  std::vector<std::size_t> first_;
  std::vector<std::size_t> next_;
};

/// Calls f on every word over `m` letters with length in [lo, hi].
template <typename F>
bool for_each_word(std::size_t m, std::size_t lo, std::size_t hi, F&& f) {
  for (std::size_t len = lo; len <= hi; ++len) {
    Word w(len, 0);
    for (;;) {
      if (f(w)) return true;
      std::size_t i = len;
      while (i > 0 && ++w[i - 1] == m) w[--i] = 0;
      if (i == 0) break;
    }
  }
  return false;
}

Word join(const Word& a, const Word& b, const Word& c) {
  Word w(a);
  w.insert(w.end(), b.begin(), b.end());
  w.insert(w.end(), c.begin(), c.end());
  return w;
}

}  // namespace

std::optional<Word> WpMethodOracle::find_counterexample(const MealyMachine& hypothesis, MembershipOracle& mq) {
  const std::size_t n = hypothesis.num_states();
  const std::size_t m = hypothesis.num_inputs();
  const auto access = access_sequences(hypothesis);
  const SeparatingTable separating(hypothesis);

  std::vector<std::vector<Word>> local(n);
  std::set<Word> global;
  for (StateId p = 0; p < n; ++p) {
    std::set<Word> ws;
    for (std::uint32_t a = 0; a < m; ++a) ws.insert(Word{a});
    for (StateId q = 0; q < n; ++q)
      if (auto w = separating.word(p, q)) ws.insert(*w);
    global.insert(ws.begin(), ws.end());
    local[p].assign(ws.begin(), ws.end());
  }

  std::optional<Word> found;
  auto check = [&](const Word& w) {
    found = disagreement(hypothesis, mq, w);
    return found.has_value();
  };

  for (StateId s = 0; s < n; ++s) {
    if (!access[s]) continue;
    const bool hit = for_each_word(m, 0, depth_, [&](const Word& mid) {
      return std::any_of(global.begin(), global.end(), [&](const Word& w) { return check(join(*access[s], mid, w)); });
    });
    if (hit) return found;
  }
  for (StateId s = 0; s < n; ++s) {
    if (!access[s]) continue;
    const bool hit = for_each_word(m, 1, depth_ + 1, [&](const Word& mid) {
      const StateId q = hypothesis.state_after(mid, s);
      return std::any_of(local[q].begin(), local[q].end(), [&](const Word& w) { return check(join(*access[s], mid, w)); });
    });
    if (hit) return found;
  }
  return std::nullopt;
}

std::optional<Word> ExactOracle::find_counterexample(const MealyMachine& hypothesis, MembershipOracle& mq) {
  auto w = distinguishing_word(hypothesis, target_);
  if (!w) return std::nullopt;
  auto ce = disagreement(hypothesis, mq, *w);
  if (!ce) throw Error("reference machine disagrees with the system under learning");
  return ce;
}

std::optional<Word> ChainOracle::find_counterexample(const MealyMachine& hypothesis, MembershipOracle& mq) {
  for (auto& oracle : chain_)
    if (auto ce = oracle->find_counterexample(hypothesis, mq)) return ce;
  return std::nullopt;
}

}  // namespace rowlearn
