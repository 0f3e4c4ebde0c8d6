#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rowlearn/errors.hpp"
#include "rowlearn/machine.hpp"

namespace rowlearn {

/// System under learning. Every answer starts from the initial configuration.
class MembershipOracle {
 public:
  virtual ~MembershipOracle() = default;
  virtual std::size_t num_inputs() const = 0;
  virtual OutputWord answer(const Word& word) = 0;
};

/// Answers membership queries from a known machine (tests, replay).
class MachineOracle final : public MembershipOracle {
 public:
  explicit MachineOracle(MealyMachine machine) : machine_(std::move(machine)) {}
  std::size_t num_inputs() const override { return machine_.num_inputs(); }
  OutputWord answer(const Word& word) override { return machine_.run(word); }

 private:
  MealyMachine machine_;
};

struct LearnStats {
  /// Queries posed by the learner and the equivalence strategy.
  std::uint64_t membership_queries = 0;
  std::uint64_t cache_hits = 0;
  /// Queries that reached the system, and the symbols they executed.
  std::uint64_t sul_queries = 0;
  std::uint64_t sul_symbols = 0;
  std::uint64_t equivalence_rounds = 0;
  std::uint64_t hypothesis_states = 0;
  double wall_time_ms = 0.0;
  bool budget_exhausted = false;

  std::string to_json() const;
};

/// Raised when the symbol budget runs out. Carries the latest hypothesis.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::optional<MealyMachine> partial, LearnStats stats)
      : Error(what), partial_(std::move(partial)), stats_(stats) {}
  const std::optional<MealyMachine>& partial() const noexcept { return partial_; }
  const LearnStats& stats() const noexcept { return stats_; }

 private:
  std::optional<MealyMachine> partial_;
  LearnStats stats_;
};

/// Prefix-tree cache in front of a system. Identical or prefix queries never
/// reach the system twice.
class QueryCache final : public MembershipOracle {
 public:
  QueryCache(MembershipOracle& sul, std::uint64_t symbol_budget);

  std::size_t num_inputs() const override { return sul_.num_inputs(); }
  /// Throws BudgetExceeded (without a hypothesis) when the budget is spent,
  /// and Error when the system contradicts an earlier answer.
  OutputWord answer(const Word& word) override;

  const LearnStats& stats() const noexcept { return stats_; }
  LearnStats& stats() noexcept { return stats_; }

 private:
  struct Node {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> children;  // input -> node
    std::uint32_t output = 0;
  };
  std::optional<std::uint32_t> child(std::uint32_t node, std::uint32_t input) const;

  MembershipOracle& sul_;
  std::uint64_t budget_;
  std::vector<Node> nodes_;
  LearnStats stats_;
};

/// Approximate (or exact) equivalence query strategy.
class EquivalenceOracle {
 public:
  virtual ~EquivalenceOracle() = default;
  /// A word on which `hypothesis` disagrees with `mq`, or nullopt.
  virtual std::optional<Word> find_counterexample(const MealyMachine& hypothesis, MembershipOracle& mq) = 0;
};

/// Uniformly random words with lengths uniform in [1, max_steps].
class RandomWalkOracle final : public EquivalenceOracle {
 public:
  RandomWalkOracle(std::size_t max_steps, std::size_t num_walks, std::uint64_t seed);
  std::optional<Word> find_counterexample(const MealyMachine& hypothesis, MembershipOracle& mq) override;

 private:
  std::size_t max_steps_;
  std::size_t num_walks_;
  std::mt19937_64 rng_;
};

/// Wp-method conformance suite; complete for systems with at most
/// |hypothesis| + depth states.
class WpMethodOracle final : public EquivalenceOracle {
 public:
  explicit WpMethodOracle(std::size_t depth) : depth_(depth) {}
  std::optional<Word> find_counterexample(const MealyMachine& hypothesis, MembershipOracle& mq) override;

 private:
  std::size_t depth_;
};

/// Exact equivalence against a known machine, via product search.
class ExactOracle final : public EquivalenceOracle {
 public:
  explicit ExactOracle(MealyMachine target) : target_(std::move(target)) {}
  std::optional<Word> find_counterexample(const MealyMachine& hypothesis, MembershipOracle& mq) override;

 private:
  MealyMachine target_;
};

/// Tries each strategy in order; the first counterexample wins.
class ChainOracle final : public EquivalenceOracle {
 public:
  void add(std::unique_ptr<EquivalenceOracle> oracle) { chain_.push_back(std::move(oracle)); }
  std::optional<Word> find_counterexample(const MealyMachine& hypothesis, MembershipOracle& mq) override;

 private:
  std::vector<std::unique_ptr<EquivalenceOracle>> chain_;
};

/// Shortest prefix of `word` on which the hypothesis and `mq` disagree.
std::optional<Word> disagreement(const MealyMachine& hypothesis, MembershipOracle& mq, const Word& word);

struct LearnOptions {
  /// SUL symbol executions allowed per session.
  std::uint64_t symbol_budget = 10'000'000;
};

struct LearnResult {
  MealyMachine hypothesis;
  LearnStats stats;
};

/// Observation-table Mealy learner with Rivest-Schapire counterexample
/// analysis. Throws BudgetExceeded carrying the latest hypothesis.
LearnResult learn(MembershipOracle& mq, EquivalenceOracle& eq, const LearnOptions& options = {});

}  // namespace rowlearn
