#include <gtest/gtest.h>

#include "rowlearn/dram.hpp"
#include "rowlearn/errors.hpp"
#include "rowlearn/trr.hpp"

using namespace rowlearn;

namespace {

SimConfig small(std::size_t rows, std::uint64_t rh, std::uint64_t refresh) {
  SimConfig c;
  c.memory_size = rows;
  c.rowhammer_threshold = rh;
  c.refresh_interval = refresh;
  c.value_width = 8;
  return c;
}

std::size_t count(const std::vector<SimEvent>& events, SimEventKind kind) {
  std::size_t n = 0;
  for (const auto& e : events) n += e.kind == kind;
  return n;
}

}  // namespace

TEST(Neighbors, ClippedAtEdges) {
  auto n = neighbors(RowAddr{0}, 1, 4);
  ASSERT_EQ(n.size(), 1u);
  EXPECT_EQ(n[0], RowAddr{1});
  n = neighbors(RowAddr{2}, 2, 4);
  EXPECT_EQ(n, (std::vector<RowAddr>{RowAddr{0}, RowAddr{1}, RowAddr{3}}));
  EXPECT_TRUE(neighbors(RowAddr{0}, 1, 1).empty());
}

TEST(SimConfig, RejectsZeroes) {
  for (auto field : {0, 1, 2, 3, 4}) {
    SimConfig c;
    if (field == 0) c.memory_size = 0;
    if (field == 1) c.rowhammer_threshold = 0;
    if (field == 2) c.refresh_interval = 0;
    if (field == 3) c.blast_radius = 0;
    if (field == 4) c.value_width = 0;
    EXPECT_THROW(c.validate(), ConfigError) << field;
  }
}

TEST(Dram, FlipsExactlyAtThreshold) {
  Dram d(small(2, 5, 1000), 8);
  std::vector<SimEvent> ev;
  for (int i = 0; i < 4; ++i) d.access(RowAddr{0}, 2, ev);
  EXPECT_TRUE(ev.empty());
  EXPECT_EQ(d.state().victim_count[1], 4u);
  d.access(RowAddr{0}, 2, ev);
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].kind, SimEventKind::FlipInjected);
  EXPECT_EQ(ev[0].time, 5u);
  EXPECT_EQ(ev[0].row, RowAddr{1});
  EXPECT_EQ(d.read(RowAddr{1}), BitVector(8, 0b11));
  // One flip per row per epoch.
  ev.clear();
  for (int i = 0; i < 20; ++i) d.access(RowAddr{0}, 2, ev);
  EXPECT_TRUE(ev.empty());
  EXPECT_EQ(d.read(RowAddr{0}), BitVector(8));
}

TEST(Dram, ScheduledRefreshResetsCountsButKeepsFlips) {
  Dram d(small(2, 3, 4), 8);
  std::vector<SimEvent> ev;
  for (int i = 0; i < 4; ++i) d.access(RowAddr{0}, 1, ev);
  EXPECT_EQ(count(ev, SimEventKind::FlipInjected), 1u);
  ASSERT_EQ(count(ev, SimEventKind::ScheduledRefresh), 1u);
  EXPECT_EQ(ev.back().time, 4u);
  EXPECT_EQ(d.state().victim_count[1], 0u);
  EXPECT_EQ(d.read(RowAddr{1}), BitVector(8, 1));
  ev.clear();
  for (int i = 0; i < 3; ++i) d.access(RowAddr{0}, 1, ev);
  ASSERT_EQ(count(ev, SimEventKind::FlipInjected), 1u);
  EXPECT_EQ(d.read(RowAddr{1}), BitVector(8, 0));  // flipped back by the second epoch
}

TEST(Dram, NearestVictimFlipsFirstLowerOnTie) {
  SimConfig c = small(5, 2, 1000);
  c.blast_radius = 2;
  Dram d(c, 8);
  std::vector<SimEvent> ev;
  d.access(RowAddr{2}, 1, ev);
  d.access(RowAddr{2}, 1, ev);
  // Rows 0, 1, 3, 4 all reach the threshold on access 2; one flip per access.
  std::vector<RowAddr> order;
  for (int i = 0; i < 4; ++i) d.access(RowAddr{2}, 1, ev);
  for (const auto& e : ev)
    if (e.kind == SimEventKind::FlipInjected) order.push_back(e.row);
  EXPECT_EQ(order, (std::vector<RowAddr>{RowAddr{1}, RowAddr{3}, RowAddr{0}, RowAddr{4}}));
}

TEST(Dram, TrrPreemptsFlipOnSameAccess) {
  TrrConfig t;
  t.num_counters = 1;
  t.trr_threshold = 3;
  Dram d(small(2, 3, 1000), 8, make_trr_policy(t, 2));
  std::vector<SimEvent> ev;
  for (int i = 0; i < 3; ++i) d.access(RowAddr{0}, 1, ev);
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].kind, SimEventKind::TrrTriggered);
  EXPECT_EQ(ev[0].rows, std::vector<RowAddr>{RowAddr{1}});
  EXPECT_EQ(d.state().victim_count[1], 0u);
  EXPECT_EQ(d.read(RowAddr{1}), BitVector(8));
}

TEST(Dram, AddressAndWidthChecks) {
  Dram d(small(2, 3, 10), 8);
  std::vector<SimEvent> ev;
  EXPECT_THROW(d.access(RowAddr{2}, 1, ev), AddressError);
  EXPECT_THROW(d.access(RowAddr{0}, 9, ev), ConfigError);
  EXPECT_THROW((void)d.read(RowAddr{5}), AddressError);
  EXPECT_THROW(d.write(RowAddr{0}, BitVector(7)), ConfigError);
}

TEST(Dram, ResetAndCopyAreIndependent) {
  TrrConfig t;
  t.trr_threshold = 100;
  Dram d(small(3, 50, 1000), 8, make_trr_policy(t, 3));
  std::vector<SimEvent> ev;
  d.access(RowAddr{1}, 1, ev);
  Dram copy = d;
  copy.access(RowAddr{1}, 1, ev);
  EXPECT_EQ(d.state().global_time, 1u);
  EXPECT_EQ(copy.state().global_time, 2u);
  EXPECT_EQ(d.trr()->counters()[0].count, 1u);
  EXPECT_EQ(copy.trr()->counters()[0].count, 2u);
  d.reset();
  EXPECT_EQ(d.state(), MemoryState(3, 8, 0));
  EXPECT_FALSE(d.trr()->counters()[0].tracked_row);
}

TEST(Dram, FingerprintIdentifiesEquivalentStates) {
  Dram a(small(2, 50, 4), 8), b(small(2, 50, 4), 8);
  std::vector<SimEvent> ev;
  // Both end right after a scheduled refresh with identical contents.
  for (int i = 0; i < 4; ++i) a.access(RowAddr{0}, 1, ev);
  for (int i = 0; i < 8; ++i) b.access(RowAddr{1}, 1, ev);
  std::vector<std::uint64_t> fa, fb;
  a.fingerprint(fa);
  b.fingerprint(fb);
  EXPECT_EQ(fa, fb);
  a.access(RowAddr{0}, 1, ev);
  fa.clear();
  a.fingerprint(fa);
  EXPECT_NE(fa, fb);
}
