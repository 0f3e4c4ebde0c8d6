#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "rowlearn/errors.hpp"
#include "rowlearn/machine.hpp"

using namespace rowlearn;

namespace {

constexpr auto kOk = static_cast<std::uint32_t>(Observation::Ok);
constexpr auto kFlip = static_cast<std::uint32_t>(Observation::Flip);
constexpr auto kTrr = static_cast<std::uint32_t>(Observation::Trr);

/// Two rows, 100 accesses per symbol: any two steps flip (q0, q1, q2, sink).
RowhammerMachine two_step_flip() {
  MealyMachine m(4, 2, 0);
  m.set_transition(0, 0, kOk, 1);
  m.set_transition(0, 1, kOk, 2);
  m.set_transition(1, 0, kFlip, 3);
  m.set_transition(1, 1, kOk, 0);
  m.set_transition(2, 0, kOk, 0);
  m.set_transition(2, 1, kFlip, 3);
  m.set_transition(3, 0, kFlip, 3);
  m.set_transition(3, 1, kFlip, 3);
  return RowhammerMachine(make_alphabet(100, {0, 1}, {1}), m);
}

}  // namespace

TEST(AccessSymbol, FormatsAndParses) {
  const AccessSymbol s{1300, RowAddr{2}, 6};
  EXPECT_EQ(to_string(s), "1300↷2⇒6");
  EXPECT_EQ(to_ascii(s), "1300x2=>6");
  EXPECT_EQ(parse_symbol("1300↷2⇒6"), s);
  EXPECT_EQ(parse_symbol("1300x2=>6"), s);
  EXPECT_THROW(parse_symbol("1300-2-6"), FormatError);
  EXPECT_THROW(parse_symbol("0x2=>6"), FormatError);
  EXPECT_THROW(parse_symbol("ax2=>6"), FormatError);
  EXPECT_EQ(format_word({s, s}), "[1300↷2⇒6, 1300↷2⇒6]");
}

TEST(AccessSymbol, AlphabetGroupedByRowThenFlips) {
  const auto a = make_alphabet(10, {1, 0}, {1, 2});
  ASSERT_EQ(a.size(), 4u);
  EXPECT_EQ(a[0], (AccessSymbol{10, RowAddr{1}, 1}));
  EXPECT_EQ(a[1], (AccessSymbol{10, RowAddr{1}, 2}));
  EXPECT_EQ(a[3], (AccessSymbol{10, RowAddr{0}, 2}));
}

TEST(Observation, RoundTrip) {
  for (auto obs : {Observation::Ok, Observation::Flip, Observation::Trr, Observation::Ecc})
    EXPECT_EQ(parse_observation(to_string(obs)), obs);
  EXPECT_EQ(parse_observation("✓"), Observation::Ok);
  EXPECT_THROW(parse_observation("BOOM"), FormatError);
}

TEST(MealyMachine, RunAndMinimize) {
  // Two copies of a 2-state toggle.
  MealyMachine m(4, 1, 0);
  m.set_transition(0, 0, 0, 1);
  m.set_transition(1, 0, 1, 2);
  m.set_transition(2, 0, 0, 3);
  m.set_transition(3, 0, 1, 0);
  EXPECT_EQ(m.run({0, 0, 0}), (OutputWord{0, 1, 0}));
  const auto min = m.minimized();
  EXPECT_EQ(min.num_states(), 2u);
  EXPECT_FALSE(distinguishing_word(m, min));
}

TEST(MealyMachine, IncompleteAndRangeErrors) {
  MealyMachine m(2, 2, 0);
  EXPECT_FALSE(m.complete());
  EXPECT_THROW(m.set_transition(0, 2, 0, 0), AlphabetError);
  EXPECT_THROW(m.set_transition(0, 0, 0, 5), ConfigError);
}

TEST(MealyMachine, DistinguishingWordIsShortest) {
  MealyMachine a(3, 1, 0), b(3, 1, 0);
  a.set_transition(0, 0, 0, 1);
  a.set_transition(1, 0, 0, 2);
  a.set_transition(2, 0, 1, 2);
  b.set_transition(0, 0, 0, 1);
  b.set_transition(1, 0, 0, 2);
  b.set_transition(2, 0, 0, 2);
  const auto w = distinguishing_word(a, b);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->size(), 3u);
}

TEST(MealyMachine, MinimizedMatchesBruteForceOnRandomMachines) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto m = rowlearn::testing::random_mealy(rng, 1 + rng() % 10, 1 + rng() % 3, 2);
    const auto min = m.minimized();
    EXPECT_FALSE(distinguishing_word(m, min));
    EXPECT_EQ(min.minimized().num_states(), min.num_states());
    // Every pair of minimised states is distinguishable.
    for (StateId s = 0; s < min.num_states(); ++s)
      for (StateId t = s + 1; t < min.num_states(); ++t) {
        MealyMachine from_s(min.num_states(), min.num_inputs(), s);
        MealyMachine from_t(min.num_states(), min.num_inputs(), t);
        for (StateId q = 0; q < min.num_states(); ++q)
          for (std::uint32_t a = 0; a < min.num_inputs(); ++a) {
            from_s.set_transition(q, a, min.output(q, a), min.target(q, a));
            from_t.set_transition(q, a, min.output(q, a), min.target(q, a));
          }
        EXPECT_TRUE(distinguishing_word(from_s, from_t)) << s << " ~ " << t;
      }
  }
}

TEST(RowhammerMachine, CanonicalFormHasSinkLast) {
  const auto m = two_step_flip();
  EXPECT_EQ(m.num_states(), 4u);
  ASSERT_TRUE(m.flip_state());
  EXPECT_EQ(*m.flip_state(), 3u);
  EXPECT_EQ(m.run({m.alphabet()[0], m.alphabet()[0]}),
            (std::vector<Observation>{Observation::Ok, Observation::Flip}));
}

TEST(RowhammerMachine, RejectsBrokenInvariants) {
  const auto alphabet = make_alphabet(1, {0}, {1});
  MealyMachine flip_elsewhere(3, 1, 0);
  flip_elsewhere.set_transition(0, 0, kFlip, 1);
  flip_elsewhere.set_transition(1, 0, kFlip, 2);
  flip_elsewhere.set_transition(2, 0, kFlip, 2);
  EXPECT_THROW(RowhammerMachine(alphabet, flip_elsewhere), ConfigError);

  MealyMachine ok_into_sink(2, 1, 0);
  ok_into_sink.set_transition(0, 0, kOk, 1);
  ok_into_sink.set_transition(1, 0, kFlip, 1);
  EXPECT_THROW(RowhammerMachine(alphabet, ok_into_sink), ConfigError);

  MealyMachine fine(1, 1, 0);
  fine.set_transition(0, 0, kTrr, 0);
  EXPECT_THROW(RowhammerMachine(make_alphabet(1, {0, 1}, {1}), fine), AlphabetError);
  EXPECT_NO_THROW(RowhammerMachine(alphabet, fine));
}

TEST(RowhammerMachine, FromMealyRedirectsNonFlipEntryIntoSink) {
  const auto alphabet = make_alphabet(1, {0}, {1});
  MealyMachine m(2, 1, 0);
  m.set_transition(0, 0, kOk, 1);
  m.set_transition(1, 0, kFlip, 1);
  const auto rm = RowhammerMachine::from_mealy(alphabet, m);
  EXPECT_EQ(rm.num_states(), 3u);
  EXPECT_EQ(rm.run({alphabet[0], alphabet[0], alphabet[0]}),
            (std::vector<Observation>{Observation::Ok, Observation::Flip, Observation::Flip}));
}

TEST(RowhammerMachine, FromMealyWhenEverythingFlips) {
  const auto alphabet = make_alphabet(1, {0}, {1});
  MealyMachine m(1, 1, 0);
  m.set_transition(0, 0, kFlip, 0);
  const auto rm = RowhammerMachine::from_mealy(alphabet, m);
  EXPECT_EQ(rm.num_states(), 2u);
  EXPECT_NE(rm.initial(), *rm.flip_state());
}

TEST(Equivalence, IgnoresAlphabetOrder) {
  const auto m = two_step_flip();
  std::vector<AccessSymbol> swapped{m.alphabet()[1], m.alphabet()[0]};
  MealyMachine s(m.num_states(), 2, 0);
  for (StateId q = 0; q < m.num_states(); ++q)
    for (std::uint32_t a = 0; a < 2; ++a)
      s.set_transition(q, 1 - a, static_cast<std::uint32_t>(m.output(q, a)), m.target(q, a));
  EXPECT_TRUE(equivalent(m, RowhammerMachine(swapped, s)).equal);
}

TEST(Equivalence, ReportsShortestCounterexample) {
  const auto a = two_step_flip();
  MealyMachine m(2, 2, 0);
  m.set_transition(0, 0, kOk, 0);
  m.set_transition(0, 1, kOk, 0);
  m.set_transition(1, 0, kFlip, 1);
  m.set_transition(1, 1, kFlip, 1);
  const RowhammerMachine never(a.alphabet(), m);
  const auto r = equivalent(a, never);
  EXPECT_FALSE(r.equal);
  EXPECT_EQ(r.counterexample.size(), 2u);
  EXPECT_THROW((void)equivalent(a, RowhammerMachine(make_alphabet(100, {0, 2}, {1}), m)), AlphabetError);
}

TEST(MachineFile, RoundTripsRandomMachines) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 30; ++i) {
    const auto m = rowlearn::testing::random_rowhammer_machine(rng);
    const auto text = serialize(m);
    EXPECT_EQ(parse_machine(text), m);
    EXPECT_EQ(serialize(parse_machine(text)), text);
  }
}

TEST(MachineFile, RejectsMalformedInput) {
  const auto good = serialize(two_step_flip());
  EXPECT_THROW(parse_machine("rowhammer-machine 2\n"), FormatError);
  EXPECT_THROW(parse_machine(good.substr(0, good.size() / 2)), FormatError);
  std::string bad = good;
  bad.replace(bad.find("0 0 OK 1"), 8, "0 0 OK 9");
  EXPECT_THROW(parse_machine(bad), FormatError);
  bad = good;
  bad.replace(bad.find("flip 3"), 6, "flip -");
  EXPECT_THROW(parse_machine(bad), FormatError);
  // Comments and blank lines are ignored.
  EXPECT_EQ(parse_machine("# header\n\n" + good), two_step_flip());
}

TEST(DotFile, RoundTripsRandomMachines) {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 30; ++i) {
    const auto m = rowlearn::testing::random_rowhammer_machine(rng);
    const auto dot = export_dot(m);
    EXPECT_EQ(dot.rfind("digraph", 0), 0u);
    EXPECT_TRUE(equivalent(m, import_dot(dot)).equal);
  }
}

TEST(DotFile, LabelsUseDisplayGlyphs) {
  const auto dot = export_dot(two_step_flip());
  EXPECT_NE(dot.find("100↷0⇒1 / ✓"), std::string::npos);
  EXPECT_NE(dot.find("q1 -> bot [label=\"100↷0⇒1 / Flip\"]"), std::string::npos);
  EXPECT_THROW(import_dot("digraph g {}"), FormatError);
}
