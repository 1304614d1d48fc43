#include "vrtsim/vrt.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace vrtsim;

namespace {

// Table rows used across tests; the two preceding-function rows first, then
// the active-function rows (the 4-byte pair spaced apart so records stay
// disjoint within the frame).
struct TwoFrameTable {
  Vrt vrt{512};
  uint32_t caller_frame = 0;
  uint32_t active_frame = 0;
  size_t caller_buf = 0, caller_ctx = 0;
  size_t a_buf = 0;

  TwoFrameTable() {
    caller_frame = vrt.open_frame();
    caller_buf = *vrt.record(0x7FFE70, 24);
    caller_ctx = *vrt.record(0x7FFE60, 16);
    active_frame = vrt.open_frame();
    a_buf = *vrt.record(0x7FFF60, 24);
    vrt.record(0x7FFF3C, 4);
    vrt.record(0x7FFF38, 4);
    vrt.record(0x7FFF34, 4);
    vrt.record(0x3FFF30, 24);
    vrt.record(0x3FFE28, 256);
  }
};

}  // namespace

TEST(VrtFrames, FirstFrameAssociates) {
  Vrt v(16);
  uint32_t f = v.open_frame();
  EXPECT_EQ(f, 1u);
  auto idx = v.record(0x7FFF60, 24);
  ASSERT_TRUE(idx.has_value());
  EXPECT_TRUE(v.associated(*idx));
}

TEST(VrtFrames, PriorFrameEntriesDeassociate) {
  Vrt v(16);
  v.open_frame();
  auto idx = v.record(0x7FFE70, 24);
  v.open_frame();
  EXPECT_FALSE(v.associated(*idx));
  EXPECT_TRUE(v.entry(*idx).valid);
}

TEST(VrtFrames, FrameIdsStrictlyIncrease) {
  Vrt v(4);
  uint32_t prev = 0;
  for (int i = 0; i < 100; ++i) {
    uint32_t f = v.open_frame();
    EXPECT_GT(f, prev);
    prev = f;
  }
}

TEST(VrtRecord, TableRowIntervals) {
  Vrt v(8);
  v.open_frame();
  auto idx = v.record(0x7FFF60, 24);
  ASSERT_TRUE(idx);
  const VrtEntry& e = v.entry(*idx);
  EXPECT_TRUE(e.contains(0x7FFF60));
  EXPECT_TRUE(e.contains(0x7FFF77));
  EXPECT_FALSE(e.contains(0x7FFF78));
  EXPECT_EQ(e.size(), 24u);
}

TEST(VrtRecord, BoundCode256) {
  Vrt v(8);
  v.open_frame();
  auto idx = v.record(0x3FFE28, 256);
  ASSERT_TRUE(idx);
  EXPECT_EQ(v.entry(*idx).bound_code, 255);
  EXPECT_EQ(v.entry(*idx).size(), 256u);
  EXPECT_TRUE(v.entry(*idx).contains(0x3FFE28 + 255));
  EXPECT_FALSE(v.entry(*idx).contains(0x3FFE28 + 256));
}

TEST(VrtRecord, CapacityExceeded) {
  Vrt v(512);
  v.open_frame();
  for (uint32_t i = 0; i < 512; ++i)
    ASSERT_TRUE(v.record(0x1000 + i * 8, 4).has_value());
  EXPECT_FALSE(v.record(0x100000, 4).has_value());
  EXPECT_EQ(v.high_water(), 512u);
}

TEST(VrtRecord, SizeRangeAndFrameRequired) {
  Vrt v(8);
  EXPECT_THROW(v.record(0x1000, 4), std::logic_error);
  v.open_frame();
  EXPECT_THROW(v.record(0x1000, 0), std::invalid_argument);
  EXPECT_THROW(v.record(0x1000, 257), std::invalid_argument);
}

TEST(VrtRecord, SameFrameOverlapRejected) {
  Vrt v(8);
  v.open_frame();
  v.record(0x7FFF38, 4);
  EXPECT_THROW(v.record(0x7FFF3B, 4), std::logic_error);
}

TEST(VrtLookup, AssociatedHit) {
  TwoFrameTable t;
  auto idx = t.vrt.lookup(0x7FFF6C, Scope::AssociatedOnly);
  ASSERT_TRUE(idx);
  EXPECT_EQ(*idx, t.a_buf);
}

TEST(VrtLookup, HalfOpenUpperBoundary) {
  TwoFrameTable t;
  EXPECT_FALSE(t.vrt.lookup(0x7FFF78, Scope::AnyValid).has_value());
}

TEST(VrtLookup, NonAssociatedEntryInvisibleInAssociatedScope) {
  TwoFrameTable t;
  EXPECT_FALSE(t.vrt.lookup(0x7FFE75, Scope::AssociatedOnly).has_value());
  EXPECT_TRUE(t.vrt.lookup(0x7FFE75, Scope::AnyValid).has_value());
}

TEST(VrtSpatial, LastInBoundsByte) {
  TwoFrameTable t;
  EXPECT_EQ(t.vrt.check_spatial(0x7FFF77, t.a_buf), SpatialVerdict::Ok);
}

TEST(VrtSpatial, OnePastTheEnd) {
  TwoFrameTable t;
  EXPECT_EQ(t.vrt.check_spatial(0x7FFF78, t.a_buf), SpatialVerdict::Violation);
}

TEST(VrtSpatial, AdjacentEntryIsStillAViolation) {
  // provenance (0x7FFF3B,4); the address lands inside a different record
  Vrt v(8);
  v.open_frame();
  v.record(0x7FFF38, 4);
  v.open_frame();
  auto prov = v.record(0x7FFF3B, 4);
  ASSERT_TRUE(prov);
  EXPECT_EQ(v.check_spatial(0x7FFF38, *prov), SpatialVerdict::Violation);
  EXPECT_EQ(v.check_spatial(0x7FFF3B, *prov), SpatialVerdict::Ok);
}

TEST(VrtSpatial, MissingProvenanceIsViolation) {
  TwoFrameTable t;
  EXPECT_EQ(t.vrt.check_spatial(0x7FFF60, std::nullopt), SpatialVerdict::Violation);
}

TEST(VrtSpatial, AgreesWithAssociatedLookup) {
  TwoFrameTable t;
  std::mt19937 rng(99);
  for (int n = 0; n < 20000; ++n) {
    uint32_t addr = (n % 2) ? 0x7FFE50 + rng() % 0x40
                            : (rng() % 2 ? 0x7FFF30 + rng() % 0x60 : 0x3FFE20 + rng() % 0x130);
    for (size_t e = 0; e < 8; ++e) {
      bool ok = t.vrt.check_spatial(addr, e) == SpatialVerdict::Ok;
      auto hit = t.vrt.lookup(addr, Scope::AssociatedOnly);
      EXPECT_EQ(ok, hit.has_value() && *hit == e);
    }
  }
}

TEST(VrtClose, CalleeEntriesInvalidated) {
  TwoFrameTable t;
  EXPECT_TRUE(t.vrt.close_frame());
  EXPECT_FALSE(t.vrt.lookup(0x7FFF6C, Scope::AnyValid).has_value());
}

TEST(VrtClose, CallerRegainsAssociation) {
  TwoFrameTable t;
  EXPECT_FALSE(t.vrt.associated(t.caller_ctx));
  t.vrt.close_frame();
  EXPECT_TRUE(t.vrt.associated(t.caller_ctx));
  EXPECT_TRUE(t.vrt.lookup(0x7FFE68, Scope::AssociatedOnly).has_value());
}

TEST(VrtClose, UnderflowReported) {
  Vrt v(4);
  EXPECT_FALSE(v.close_frame());
  v.open_frame();
  EXPECT_TRUE(v.close_frame());
  EXPECT_FALSE(v.close_frame());
}

TEST(VrtDirty, MarkAndIdempotence) {
  TwoFrameTable t;
  t.vrt.mark_dirty(t.a_buf);
  EXPECT_TRUE(t.vrt.entry(t.a_buf).dirty);
  t.vrt.mark_dirty(t.a_buf);
  EXPECT_TRUE(t.vrt.entry(t.a_buf).dirty);
}

TEST(VrtDirty, MarksAcrossFrames) {
  TwoFrameTable t;
  std::vector<size_t> idx{t.caller_buf, t.a_buf};
  t.vrt.mark_dirty(idx);
  // shadow-set comparison over all entries
  for (size_t i = 0; i < 8; ++i) {
    bool expect = i == t.caller_buf || i == t.a_buf;
    EXPECT_EQ(t.vrt.entry(i).dirty, expect);
  }
}

TEST(VrtSweep, ThresholdMet) {
  TwoFrameTable t;
  t.vrt.mark_dirty(t.a_buf);
  uint64_t last = t.vrt.sweep_dirty(100, 0, 50);
  EXPECT_EQ(last, 100u);
  EXPECT_FALSE(t.vrt.entry(t.a_buf).dirty);
}

TEST(VrtSweep, ThresholdUnmet) {
  TwoFrameTable t;
  t.vrt.mark_dirty(t.a_buf);
  uint64_t last = t.vrt.sweep_dirty(30, 0, 50);
  EXPECT_EQ(last, 0u);
  EXPECT_TRUE(t.vrt.entry(t.a_buf).dirty);
}

TEST(VrtSweep, PeriodicSchedule) {
  TwoFrameTable t;
  uint64_t last = 0;
  std::vector<uint64_t> clear_cycles;
  for (uint64_t now = 1; now <= 40; ++now) {
    t.vrt.mark_dirty(t.a_buf);
    uint64_t next = t.vrt.sweep_dirty(now, last, 8);
    if (next != last) clear_cycles.push_back(now);
    last = next;
  }
  std::vector<uint64_t> expected{8, 16, 24, 32, 40};
  EXPECT_EQ(clear_cycles, expected);
}

TEST(VrtSizing, MemoryBits) {
  EXPECT_EQ(memory_bits(395, 41), 16195u);
  EXPECT_EQ(memory_bits(512, 49), 25088u);
  EXPECT_EQ(memory_bits(0, 41), 0u);
}

TEST(VrtDump, TwoFrameGoldenShape) {
  TwoFrameTable t;
  EXPECT_EQ(t.vrt.dump(),
            "0,0x7FFE70,24,0\n"
            "0,0x7FFE60,16,0\n"
            "1,0x7FFF60,24,0\n"
            "1,0x7FFF3C,4,0\n"
            "1,0x7FFF38,4,0\n"
            "1,0x7FFF34,4,0\n"
            "1,0x3FFF30,24,0\n"
            "1,0x3FFE28,256,0\n");
}

// Oracle equivalence: lookup against a brute-force linear scan on
// randomized tables up to capacity.
TEST(VrtOracle, LookupMatchesLinearScan) {
  std::mt19937 rng(0xC0FFEE);
  for (int table = 0; table < 1000; ++table) {
    const uint32_t capacity = 1 + rng() % 512;
    Vrt v(capacity);
    std::vector<oracle::RawEntry> shadow(capacity, {false, 0, 0, 0});

    const int frames = 1 + rng() % 4;
    uint32_t filled = 0;
    uint32_t next_base = 0x7F0000 + rng() % 64;
    uint32_t current_frame = 0;
    for (int f = 0; f < frames; ++f) {
      current_frame = v.open_frame();
      const uint32_t want = rng() % (capacity / frames + 1);
      for (uint32_t k = 0; k < want && filled < capacity; ++k) {
        uint32_t size = 1 + rng() % 256;
        uint32_t gap = rng() % 3;  // adjacent or spaced
        auto idx = v.record(next_base, size);
        ASSERT_TRUE(idx.has_value());
        shadow[*idx] = {true, current_frame, next_base, size};
        next_base += size + gap;
        ++filled;
      }
    }

    for (int q = 0; q < 64; ++q) {
      uint32_t addr = 0x7F0000 + rng() % (next_base - 0x7F0000 + 32);
      bool assoc = rng() % 2;
      auto got = v.lookup(addr, assoc ? Scope::AssociatedOnly : Scope::AnyValid);
      auto want = oracle::scan_lookup(shadow, addr, assoc, current_frame);
      EXPECT_EQ(got, want);
    }
  }
}

// Within-frame disjointness holds after every record on randomized tables.
TEST(VrtOracle, FrameDisjointnessInvariant) {
  std::mt19937 rng(42);
  for (int round = 0; round < 50; ++round) {
    Vrt v(64);
    v.open_frame();
    uint32_t base = 0x10000;
    for (int k = 0; k < 64; ++k) {
      uint32_t size = 1 + rng() % 64;
      v.record(base, size);
      base += size + rng() % 8;
      const auto& es = v.entries();
      for (size_t i = 0; i < es.size(); ++i) {
        for (size_t j = i + 1; j < es.size(); ++j) {
          if (!es[i].valid || !es[j].valid || es[i].frame_id != es[j].frame_id) continue;
          bool overlap = es[i].base < es[j].base + es[j].size() &&
                         es[j].base < es[i].base + es[i].size();
          EXPECT_FALSE(overlap);
        }
      }
    }
  }
}
