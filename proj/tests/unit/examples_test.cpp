#include <gtest/gtest.h>

#include "explorer.hpp"
#include "rowlearn/inference.hpp"
#include "rowlearn/session.hpp"
#include "scenarios.hpp"

using namespace rowlearn;
using namespace rowlearn::testing;

namespace {

RowhammerMachine learned(const RunConfig& config) {
  auto result = run_session(config);
  EXPECT_FALSE(result.budget_exhausted);
  return *result.machine;
}

}  // namespace

TEST(Golden, TwoRowFlip) {
  const auto m = learned(two_row_flip());
  EXPECT_EQ(m.num_states(), 4u);
  const auto diff = equivalent(m, load_machine("two_row_flip.machine"));
  EXPECT_TRUE(diff.equal) << format_word(diff.counterexample);
}

TEST(Golden, TwoRowHamming) {
  const auto diff = equivalent(learned(two_row_hamming()), load_machine("two_row_hamming.machine"));
  EXPECT_TRUE(diff.equal) << format_word(diff.counterexample);
}

TEST(Golden, TwoRowTrr) {
  const auto m = learned(two_row_trr());
  EXPECT_FALSE(m.flip_state());
  const auto diff = equivalent(m, load_machine("two_row_trr.machine"));
  EXPECT_TRUE(diff.equal) << format_word(diff.counterexample);
}

TEST(Golden, OneCounterBypass) {
  const auto config = one_counter_bypass();
  const auto m = learned(config);
  EXPECT_TRUE(contains_fragment(m, load_fragment("one_counter_bypass.fragment")));
  EXPECT_TRUE(equivalent(m, explore(config.adapter_config())).equal);
  EXPECT_EQ(infer_trr_size(m).rows, std::optional<std::size_t>(2));
}

TEST(Golden, LearnedMachineMatchesExplorer) {
  for (const auto& config : {two_row_flip(), two_row_hamming(), two_row_trr(), one_counter_bypass()}) {
    const auto diff = equivalent(learned(config), explore(config.adapter_config()));
    EXPECT_TRUE(diff.equal) << format_word(diff.counterexample);
  }
}

TEST(Golden, DefaultSetupThresholds) {
  const auto config = RunConfig{};
  const auto m = learned(config);
  const auto report = infer_all(m);
  ASSERT_TRUE(report.rowhammer.interval);
  EXPECT_EQ(*report.rowhammer.interval, (ThresholdInterval{2600, 3900}));
  EXPECT_EQ(report.ecc.max_corrected_flips, 4u);
}
