#include "vrtsim/memory.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace vrtsim;

TEST(MainMemory, UntouchedReadsZero) {
  MainMemory m(1024);
  EXPECT_EQ(m.read_byte(0x1234), 0);
  EXPECT_EQ(m.read_word(0x1000), 0u);
  EXPECT_EQ(m.touched_bytes(), 0u);
}

TEST(MainMemory, BigEndianWords) {
  MainMemory m(1024);
  m.write_word(0x100, 0x8FC2002C);
  EXPECT_EQ(m.read_byte(0x100), 0x8F);
  EXPECT_EQ(m.read_byte(0x103), 0x2C);
  EXPECT_EQ(m.read_word(0x100), 0x8FC2002Cu);
}

TEST(MainMemory, BudgetEnforced) {
  MainMemory m(4);
  m.write_word(0x100, 1);
  EXPECT_THROW(m.write_byte(0x200, 1), MemoryBudgetExceeded);
  m.write_byte(0x101, 9);  // rewriting a touched byte is free
}

TEST(Cache, IndexBitSlice) {
  Cache c(2048, 32);
  auto r = c.access(0x7FFF60, false, 4);
  // (0x7FFF60 >> 5) mod 64
  EXPECT_EQ(r.line_index, (0x7FFF60u >> 5) % 64);
  EXPECT_EQ(r.line_index, 59u);
  EXPECT_FALSE(r.hit);
}

TEST(Cache, SecondAccessSameLineHits) {
  Cache c(2048, 32, 1, 10);
  EXPECT_FALSE(c.access(0x7FFF60, false, 4).hit);
  auto r = c.access(0x7FFF64, false, 4);
  EXPECT_TRUE(r.hit);
  EXPECT_EQ(r.latency, 1u);
}

TEST(Cache, ConflictAt2KBStride) {
  Cache c(2048, 32);
  EXPECT_FALSE(c.access(0x10000, false, 4).hit);
  auto r = c.access(0x10000 + 2048, false, 4);
  EXPECT_EQ(r.line_index, (0x10000u >> 5) % 64);
  EXPECT_FALSE(r.hit);
  EXPECT_EQ(c.stats().evictions, 1u);
  EXPECT_FALSE(c.access(0x10000, false, 4).hit);  // first line got evicted
}

TEST(Cache, MissLatency) {
  Cache c(2048, 32, 1, 10);
  EXPECT_EQ(c.access(0x500, false, 4).latency, 10u);
  EXPECT_EQ(c.access(0x500, true, 4).latency, 1u);
}

TEST(Cache, UnalignedWordAccess) {
  Cache c(2048, 32);
  EXPECT_THROW(c.access(0x501, false, 4), UnalignedAccess);
  c.access(0x501, false, 1);  // bytes have no alignment requirement
}

TEST(Cache, FlushInvalidatesEverything) {
  Cache c(2048, 32);
  c.access(0x100, false, 4);
  c.access(0x200, false, 4);
  c.flush();
  EXPECT_FALSE(c.access(0x100, false, 4).hit);
  EXPECT_FALSE(c.access(0x200, false, 4).hit);
  c.flush();
  c.flush();  // idempotent
  EXPECT_FALSE(c.access(0x100, false, 4).hit);
}

TEST(Cache, FlushRerunEquivalence) {
  // hit pattern after a flush equals a cold cache replaying the trace
  std::mt19937 rng(5);
  std::vector<uint32_t> trace;
  for (int i = 0; i < 2000; ++i) trace.push_back((rng() % 0x4000) & ~3u);

  Cache warm(2048, 32);
  for (uint32_t a : trace) warm.access(a, false, 4);
  warm.flush();
  std::vector<bool> after_flush;
  for (uint32_t a : trace) after_flush.push_back(warm.access(a, false, 4).hit);

  Cache cold(2048, 32);
  std::vector<bool> cold_run;
  for (uint32_t a : trace) cold_run.push_back(cold.access(a, false, 4).hit);

  EXPECT_EQ(after_flush, cold_run);
}

TEST(CacheOracle, BruteForceAgreement) {
  std::mt19937 rng(123);
  struct Shape { uint32_t total, line; } shapes[] = {{2048, 32}, {1024, 64}, {4096, 16}};
  for (auto [total, line] : shapes) {
    Cache c(total, line);
    oracle::BruteCache brute(total, line);
    for (int i = 0; i < 10000; ++i) {
      uint32_t addr = (rng() % 0x20000) & ~3u;
      bool hit = c.access(addr, rng() % 2, 4).hit;
      EXPECT_EQ(hit, brute.access(addr));
    }
  }
}

TEST(Cache, LatencyPureFunctionOfHit) {
  Cache c(2048, 32, 2, 13);
  std::mt19937 rng(9);
  for (int i = 0; i < 5000; ++i) {
    auto r = c.access((rng() % 0x8000) & ~3u, false, 4);
    EXPECT_EQ(r.latency, r.hit ? 2u : 13u);
  }
}

TEST(Cache, GeometryValidated) {
  EXPECT_THROW(Cache(2048, 24), std::invalid_argument);
  EXPECT_THROW(Cache(1536, 32), std::invalid_argument);
}
