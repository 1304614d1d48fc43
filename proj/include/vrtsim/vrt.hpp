#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vrtsim {

// One protection record: a live variable's interval plus scope and
// speculation metadata. bound_code b encodes a size of b+1 bytes (1..256).
struct VrtEntry {
  bool valid = false;
  uint32_t frame_id = 0;
  uint32_t base = 0;
  uint8_t bound_code = 0;
  bool dirty = false;

  uint32_t size() const { return uint32_t(bound_code) + 1; }
  // Interval membership [base, base + bound_code + 1); wrap-safe.
  bool contains(uint32_t addr) const { return addr - base <= bound_code; }
};

enum class Scope { AssociatedOnly, AnyValid };

enum class SpatialVerdict { Ok, Violation };

// The Variable Record Table: fixed-capacity store of live variable
// intervals. Scope is derived per entry from the owning frame id, so a
// whole frame re-associates in O(1) on return.
class Vrt {
 public:
  explicit Vrt(uint32_t capacity = 512) : entries_(capacity) {}

  uint32_t capacity() const { return uint32_t(entries_.size()); }
  uint32_t current_frame() const { return current_frame_; }
  bool frame_open() const { return !frame_stack_.empty(); }
  uint32_t high_water() const { return high_water_; }

  bool associated(size_t idx) const {
    const VrtEntry& e = entries_[idx];
    return e.valid && e.frame_id == current_frame_;
  }

  const VrtEntry& entry(size_t idx) const { return entries_[idx]; }
  const std::vector<VrtEntry>& entries() const { return entries_; }

  uint32_t open_frame() {
    const uint32_t id = next_frame_id_++;
    frame_stack_.push_back(id);
    current_frame_ = id;
    return id;
  }

  // Stores a record in the lowest free slot; nullopt when the table is
  // full (the run continues, the variable is just unprotected).
  std::optional<size_t> record(uint32_t base, uint32_t size) {
    if (frame_stack_.empty()) throw std::logic_error("record with no open frame");
    if (size < 1 || size > 256) throw std::invalid_argument("record size must be 1..256");
    for (size_t i = 0; i < entries_.size(); ++i) {
      const VrtEntry& e = entries_[i];
      if (e.valid && e.frame_id == current_frame_) {
        const uint64_t a0 = e.base, a1 = uint64_t(e.base) + e.size();
        const uint64_t b0 = base, b1 = uint64_t(base) + size;
        if (a0 < b1 && b0 < a1)
          throw std::logic_error("overlapping records within one frame");
      }
    }
    for (size_t i = 0; i < entries_.size(); ++i) {
      if (!entries_[i].valid) {
        entries_[i] = VrtEntry{true, current_frame_, base, uint8_t(size - 1), false};
        uint32_t live = 0;
        for (const VrtEntry& e : entries_) live += e.valid ? 1 : 0;
        if (live > high_water_) high_water_ = live;
        return i;
      }
    }
    return std::nullopt;
  }

  std::optional<size_t> lookup(uint32_t addr, Scope scope) const {
    for (size_t i = 0; i < entries_.size(); ++i) {
      const VrtEntry& e = entries_[i];
      if (!e.valid) continue;
      if (scope == Scope::AssociatedOnly && e.frame_id != current_frame_) continue;
      if (e.contains(addr)) return i;
    }
    return std::nullopt;
  }

  // Ok exactly when the provenance entry is present, associated, and the
  // address stays inside that single entry's interval.
  SpatialVerdict check_spatial(uint32_t addr, std::optional<size_t> provenance) const {
    if (!provenance) return SpatialVerdict::Violation;
    const VrtEntry& e = entries_[*provenance];
    if (!e.valid || e.frame_id != current_frame_ || !e.contains(addr))
      return SpatialVerdict::Violation;
    return SpatialVerdict::Ok;
  }

  // Invalidates the closing frame's entries; the caller's entries become
  // associated again. False on frame-stack underflow.
  bool close_frame() {
    if (frame_stack_.empty()) return false;
    const uint32_t closing = frame_stack_.back();
    frame_stack_.pop_back();
    for (VrtEntry& e : entries_) {
      if (e.valid && e.frame_id == closing) e.valid = false;
    }
    current_frame_ = frame_stack_.empty() ? 0 : frame_stack_.back();
    return true;
  }

  void mark_dirty(size_t idx) {
    if (entries_[idx].valid) entries_[idx].dirty = true;
  }

  template <typename Container>
  void mark_dirty(const Container& indices) {
    for (size_t i : indices) mark_dirty(i);
  }

  // Periodic dirty reset keyed to the maximum speculation resolution time.
  // Returns the new last-sweep cycle.
  uint64_t sweep_dirty(uint64_t now, uint64_t last_sweep, uint64_t interval) {
    if (interval < 1) throw std::invalid_argument("sweep interval must be >= 1");
    if (now - last_sweep >= interval) {
      for (VrtEntry& e : entries_) e.dirty = false;
      return now;
    }
    return last_sweep;
  }

  bool overlaps_current_frame(uint32_t base, uint32_t size) const {
    for (const VrtEntry& e : entries_) {
      if (!e.valid || e.frame_id != current_frame_) continue;
      const uint64_t a0 = e.base, a1 = uint64_t(e.base) + e.size();
      const uint64_t b0 = base, b1 = uint64_t(base) + size;
      if (a0 < b1 && b0 < a1) return true;
    }
    return false;
  }

  uint32_t valid_count() const {
    uint32_t n = 0;
    for (const VrtEntry& e : entries_) n += e.valid ? 1 : 0;
    return n;
  }

  // One line per valid entry, slot order: assoc,base_hex,bound_bytes,dirty
  std::string dump() const {
    std::string out;
    char line[64];
    for (size_t i = 0; i < entries_.size(); ++i) {
      const VrtEntry& e = entries_[i];
      if (!e.valid) continue;
      std::snprintf(line, sizeof(line), "%d,0x%X,%u,%d\n",
                    associated(i) ? 1 : 0, e.base, e.size(), e.dirty ? 1 : 0);
      out += line;
    }
    return out;
  }

 private:
  std::vector<VrtEntry> entries_;
  std::vector<uint32_t> frame_stack_;
  uint32_t current_frame_ = 0;
  uint32_t next_frame_id_ = 1;
  uint32_t high_water_ = 0;
};

inline uint64_t memory_bits(uint64_t entry_count, uint64_t entry_width_bits) {
  return entry_count * entry_width_bits;
}

}  // namespace vrtsim
