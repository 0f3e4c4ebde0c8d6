#include <gtest/gtest.h>

#include "rowlearn/errors.hpp"
#include "rowlearn/run_config.hpp"

using namespace rowlearn;

TEST(RunConfig, DefaultsMatchReferenceSetup) {
  const RunConfig c;
  EXPECT_EQ(c.get("memory_size"), "3");
  EXPECT_EQ(c.get("trr_counters"), "1");
  EXPECT_EQ(c.get("max_flips"), "6");
  EXPECT_EQ(c.get("accesses_per_symbol"), "1300");
  EXPECT_EQ(c.get("trr_threshold"), "2500");
  EXPECT_EQ(c.get("rowhammer_threshold"), "3000");
  EXPECT_EQ(c.get("refresh_interval"), "6500");
  EXPECT_EQ(c.get("rw_max_steps"), "100");
  EXPECT_EQ(c.get("trr_policy"), "fcfs");
  EXPECT_EQ(c.get("ecc"), "reed-solomon");
  EXPECT_EQ(c.get("equivalence"), "random-walk");
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.alphabet().size(), 18u);
}

TEST(RunConfig, SetGetRoundTripsEveryKey) {
  const RunConfig base;
  RunConfig copy;
  copy.set("memory_size", "7");
  for (const auto& key : RunConfig::keys()) copy.set(key, base.get(key));
  EXPECT_EQ(copy.dump(), base.dump());
}

TEST(RunConfig, ParsesValueForms) {
  RunConfig c;
  c.set("rowhammer_threshold", "0x10");
  EXPECT_EQ(c.sim.rowhammer_threshold, 16u);
  c.set(" alphabet_rows ", "[0, 2]");
  EXPECT_EQ(c.alphabet_rows, (std::vector<std::uint32_t>{0, 2}));
  c.set("trr_pinned_rows", "1..2");
  EXPECT_EQ(c.trr.pinned_rows, (std::vector<std::uint32_t>{1, 2}));
  c.set("ecc", "\"hamming84\"");
  EXPECT_EQ(c.ecc.code, EccCode::Hamming84);
  c.set("ecc", "off");
  EXPECT_FALSE(c.ecc.enabled);
  c.set("full_audit", "yes");
  EXPECT_TRUE(c.full_audit);
  c.set("equivalence", "random-walk+wp");
  EXPECT_EQ(c.equivalence, EquivalenceStrategy::RandomWalkThenWp);
}

TEST(RunConfig, RejectsBadInput) {
  RunConfig c;
  EXPECT_THROW(c.set("no_such_key", "1"), ConfigError);
  EXPECT_THROW(c.set("memory_size", "-1"), ConfigError);
  EXPECT_THROW(c.set("memory_size", "3 rows"), ConfigError);
  EXPECT_THROW(c.set("full_audit", "maybe"), ConfigError);
  EXPECT_THROW(c.set("trr_policy", "vendor-a"), ConfigError);
  EXPECT_THROW(c.set("equivalence", "w"), ConfigError);
  c.set("alphabet_rows", "5");
  EXPECT_THROW(c.validate(), ConfigError);
  RunConfig d;
  d.set("accesses_per_symbol", "0");
  EXPECT_THROW(d.validate(), ConfigError);
}

TEST(RunConfig, AlphabetFollowsRowsAndFlips) {
  RunConfig c;
  c.set("alphabet_rows", "2");
  c.set("max_flips", "2");
  c.set("zero_flip_symbols", "true");
  const auto a = c.alphabet();
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a[0], (AccessSymbol{1300, RowAddr{2}, 0}));
  EXPECT_EQ(a[2], (AccessSymbol{1300, RowAddr{2}, 2}));
}

TEST(ValueList, RangesAndLists) {
  EXPECT_EQ(parse_value_list("1,2, 3"), (std::vector<std::string>{"1", "2", "3"}));
  EXPECT_EQ(parse_value_list("1..4"), (std::vector<std::string>{"1", "2", "3", "4"}));
  EXPECT_EQ(parse_value_list("500..1500:500"), (std::vector<std::string>{"500", "1000", "1500"}));
  EXPECT_EQ(parse_value_list("fcfs,static"), (std::vector<std::string>{"fcfs", "static"}));
  EXPECT_THROW(parse_value_list("5..1"), ConfigError);
  EXPECT_THROW(parse_value_list("1..5:0"), ConfigError);
}

TEST(SweepSpec, Validation) {
  SweepSpec s{"trr_counters", {"1", "2"}, 3};
  EXPECT_NO_THROW(s.validate());
  s.parameter = "bogus";
  EXPECT_THROW(s.validate(), ConfigError);
  s = SweepSpec{"trr_counters", {}, 3};
  EXPECT_THROW(s.validate(), ConfigError);
}
