#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace vrtsim {

struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnalignedAccess : SimError {
  uint32_t addr;
  explicit UnalignedAccess(uint32_t a)
      : SimError("unaligned word access"), addr(a) {}
};

struct MemoryBudgetExceeded : SimError {
  MemoryBudgetExceeded() : SimError("main memory capacity budget exceeded") {}
};

// Sparse byte-addressed main memory with a touched-bytes budget. Reads of
// untouched addresses return 0 and do not count against the budget.
// Words are stored big-endian.
class MainMemory {
 public:
  explicit MainMemory(uint32_t capacity_bytes = 65536)
      : capacity_(capacity_bytes) {}

  uint8_t read_byte(uint32_t addr) const {
    auto it = bytes_.find(addr);
    return it == bytes_.end() ? 0 : it->second;
  }

  void write_byte(uint32_t addr, uint8_t v) {
    auto it = bytes_.find(addr);
    if (it == bytes_.end()) {
      if (bytes_.size() >= capacity_) throw MemoryBudgetExceeded();
      bytes_.emplace(addr, v);
    } else {
      it->second = v;
    }
  }

  uint32_t read_word(uint32_t addr) const {
    if (addr & 3) throw UnalignedAccess(addr);
    return (uint32_t(read_byte(addr)) << 24) | (uint32_t(read_byte(addr + 1)) << 16) |
           (uint32_t(read_byte(addr + 2)) << 8) | uint32_t(read_byte(addr + 3));
  }

  void write_word(uint32_t addr, uint32_t v) {
    if (addr & 3) throw UnalignedAccess(addr);
    write_byte(addr, uint8_t(v >> 24));
    write_byte(addr + 1, uint8_t(v >> 16));
    write_byte(addr + 2, uint8_t(v >> 8));
    write_byte(addr + 3, uint8_t(v));
  }

  size_t touched_bytes() const { return bytes_.size(); }
  uint32_t capacity() const { return capacity_; }

  bool operator==(const MainMemory& o) const { return bytes_ == o.bytes_; }

 private:
  uint32_t capacity_;
  std::unordered_map<uint32_t, uint8_t> bytes_;
};

struct CacheStats {
  uint64_t accesses = 0;
  uint64_t hits = 0;
  uint64_t misses = 0;
  uint64_t evictions = 0;
};

struct CacheAccess {
  bool hit = false;
  uint32_t latency = 0;
  uint32_t line_index = 0;
};

// Direct-mapped, tag-only cache model. Hit/miss presence is the state the
// probe attack observes; data always comes from main memory.
class Cache {
 public:
  Cache(uint32_t total_size = 2048, uint32_t line_size = 32,
        uint32_t hit_latency = 1, uint32_t miss_latency = 10)
      : line_size_(line_size),
        line_count_(total_size / line_size),
        hit_latency_(hit_latency),
        miss_latency_(miss_latency),
        valid_(line_count_, false),
        tag_(line_count_, 0) {
    if (line_size == 0 || (line_size & (line_size - 1)) != 0)
      throw std::invalid_argument("cache line size must be a power of two");
    if (line_count_ == 0 || (line_count_ & (line_count_ - 1)) != 0)
      throw std::invalid_argument("cache line count must be a power of two");
  }

  CacheAccess access(uint32_t addr, bool /*is_write*/, uint8_t width) {
    if (width != 1 && width != 4) throw std::invalid_argument("access width must be 1 or 4");
    if (width == 4 && (addr & 3)) throw UnalignedAccess(addr);
    const uint32_t index = (addr / line_size_) % line_count_;
    const uint32_t tag = addr / line_size_ / line_count_;
    stats_.accesses++;
    CacheAccess r;
    r.line_index = index;
    if (valid_[index] && tag_[index] == tag) {
      stats_.hits++;
      r.hit = true;
      r.latency = hit_latency_;
    } else {
      stats_.misses++;
      if (valid_[index]) stats_.evictions++;
      valid_[index] = true;
      tag_[index] = tag;
      r.hit = false;
      r.latency = miss_latency_;
    }
    return r;
  }

  void flush() {
    valid_.assign(line_count_, false);
  }

  uint32_t line_size() const { return line_size_; }
  uint32_t line_count() const { return line_count_; }
  const CacheStats& stats() const { return stats_; }

 private:
  uint32_t line_size_;
  uint32_t line_count_;
  uint32_t hit_latency_;
  uint32_t miss_latency_;
  std::vector<bool> valid_;
  std::vector<uint32_t> tag_;
  CacheStats stats_;
};

}  // namespace vrtsim
