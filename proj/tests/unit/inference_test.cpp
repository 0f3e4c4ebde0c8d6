#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "scenarios.hpp"
#include "rowlearn/inference.hpp"
#include "rowlearn/machine.hpp"

using namespace rowlearn;

namespace {

constexpr auto kOk = static_cast<std::uint32_t>(Observation::Ok);
constexpr auto kFlip = static_cast<std::uint32_t>(Observation::Flip);
constexpr auto kTrr = static_cast<std::uint32_t>(Observation::Trr);
constexpr auto kEcc = static_cast<std::uint32_t>(Observation::Ecc);

using rowlearn::testing::load_machine;

/// A chain of `steps` transitions of `count` accesses ending in the flip state.
RowhammerMachine chain(std::size_t steps, std::uint64_t count) {
  MealyMachine m(steps + 1, 1, 0);
  for (StateId s = 0; s + 1 < steps; ++s) m.set_transition(s, 0, kOk, s + 1);
  m.set_transition(static_cast<StateId>(steps - 1), 0, kFlip, static_cast<StateId>(steps));
  m.set_transition(static_cast<StateId>(steps), 0, kFlip, static_cast<StateId>(steps));
  return RowhammerMachine({AccessSymbol{count, RowAddr{0}, 1}}, m);
}

}  // namespace

TEST(RowhammerThreshold, PathLengthWithSingleAccesses) {
  const auto r = infer_rowhammer_threshold(chain(5, 1));
  ASSERT_TRUE(r.interval);
  EXPECT_EQ(*r.interval, (ThresholdInterval{4, 5}));
  EXPECT_EQ(r.witness.size(), 5u);
}

TEST(RowhammerThreshold, CoarserWithLargerSteps) {
  // Threshold 5 hammered 3 accesses at a time flips on the second step.
  const auto r = infer_rowhammer_threshold(chain(2, 3));
  ASSERT_TRUE(r.interval);
  EXPECT_EQ(to_string(*r.interval), "(3, 6]");
  EXPECT_TRUE(r.interval->contains(5));
}

TEST(RowhammerThreshold, SingleFlipTransition) {
  EXPECT_EQ(*infer_rowhammer_threshold(chain(1, 1)).interval, (ThresholdInterval{0, 1}));
}

TEST(RowhammerThreshold, UnboundedWithoutFlipState) {
  const auto m = load_machine("two_row_trr.machine");
  EXPECT_FALSE(infer_rowhammer_threshold(m).interval);
  EXPECT_FALSE(infer_trr_size(m).rows);
}

TEST(RowhammerThreshold, TwoRowMachine) {
  const auto m = load_machine("two_row_flip.machine");
  const auto r = infer_rowhammer_threshold(m);
  EXPECT_EQ(*r.interval, (ThresholdInterval{100, 200}));
  EXPECT_TRUE(r.interval->contains(120));
}

TEST(TrrThreshold, CheapestCycleThroughTrr) {
  // Cycle of 7 + 7 + 5 accesses closing with TRR; estimate (14, 19].
  const std::vector<AccessSymbol> alphabet{{7, RowAddr{0}, 1}, {5, RowAddr{1}, 1}};
  MealyMachine m(4, 2, 0);
  m.set_transition(0, 0, kOk, 1);
  m.set_transition(0, 1, kOk, 0);
  m.set_transition(1, 0, kOk, 2);
  m.set_transition(1, 1, kOk, 0);
  m.set_transition(2, 0, kFlip, 3);
  m.set_transition(2, 1, kTrr, 0);
  m.set_transition(3, 0, kFlip, 3);
  m.set_transition(3, 1, kFlip, 3);
  const RowhammerMachine rm(alphabet, m);
  const auto r = infer_trr_threshold(rm);
  ASSERT_TRUE(r.interval);
  EXPECT_EQ(*r.interval, (ThresholdInterval{14, 19}));
  EXPECT_EQ(r.cycle, (Word{0, 0, 1}));
  EXPECT_EQ(rm.run(rm.to_symbols(r.witness)).back(), Observation::Trr);
}

TEST(TrrThreshold, OneCounterPerRow) {
  const auto r = infer_trr_threshold(load_machine("two_row_trr.machine"));
  ASSERT_TRUE(r.interval);
  EXPECT_EQ(*r.interval, (ThresholdInterval{100, 200}));
  EXPECT_EQ(r.cycle.size(), 2u);
}

TEST(TrrThreshold, AbsentWithoutTrrOutputs) {
  EXPECT_FALSE(infer_trr_threshold(load_machine("two_row_flip.machine")).interval);
}

TEST(TrrSize, BypassPathMentionsTwoRows) {
  const auto m = load_machine("one_counter_bypass.machine");
  const auto r = infer_trr_size(m);
  ASSERT_TRUE(r.rows);
  EXPECT_EQ(*r.rows, 2u);
  EXPECT_EQ(format_word(m.to_symbols(r.witness)), "[100↷0⇒1, 100↷3⇒1, 100↷3⇒1]");
}

TEST(TrrSize, NoMitigationNeedsOneRow) {
  EXPECT_EQ(infer_trr_size(load_machine("two_row_flip.machine")).rows, std::optional<std::size_t>(1));
}

TEST(EccThreshold, MaxCorrectedFlips) {
  EXPECT_EQ(infer_ecc_threshold(load_machine("two_row_hamming.machine")).max_corrected_flips, 1u);
  EXPECT_EQ(infer_ecc_threshold(load_machine("two_row_flip.machine")).max_corrected_flips, 0u);
  MealyMachine m(1, 2, 0);
  m.set_transition(0, 0, kEcc, 0);
  m.set_transition(0, 1, kEcc, 0);
  const RowhammerMachine rm({{1, RowAddr{0}, 4}, {1, RowAddr{0}, 2}}, m);
  EXPECT_EQ(infer_ecc_threshold(rm).max_corrected_flips, 4u);
}

TEST(Inference, AgreesWithBruteForceOnRandomMachines) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i) {
    const auto m = rowlearn::testing::random_rowhammer_machine(rng);
    EXPECT_EQ(rowlearn::testing::check_inference(m), "") << serialize(m);
  }
}

TEST(Report, JsonAndSummary) {
  const auto m = load_machine("two_row_hamming.machine");
  const auto report = infer_all(m);
  const auto json = report.to_json(m);
  EXPECT_NE(json.find("\"states\": 4"), std::string::npos);
  EXPECT_NE(json.find("\"lower\": 100"), std::string::npos);
  EXPECT_NE(json.find("\"trr_threshold\": \"absent\""), std::string::npos);
  EXPECT_NE(json.find("\"ecc_threshold\": 1"), std::string::npos);
  EXPECT_NE(json.find("\"attack_trace\": ["), std::string::npos);
  const auto text = report.summary(m);
  EXPECT_NE(text.find("(100, 200]"), std::string::npos);

  const auto safe = load_machine("two_row_trr.machine");
  const auto safe_json = infer_all(safe).to_json(safe);
  EXPECT_NE(safe_json.find("\"rowhammer_threshold\": \"unbounded\""), std::string::npos);
  EXPECT_NE(safe_json.find("\"trr_size\": \"infinite\""), std::string::npos);
}
