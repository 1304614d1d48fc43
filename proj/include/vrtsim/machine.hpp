#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "vrtsim/config.hpp"
#include "vrtsim/isa.hpp"
#include "vrtsim/memory.hpp"
#include "vrtsim/program.hpp"

namespace vrtsim {

struct ImageTooLarge : SimError {
  ImageTooLarge() : SimError("program image exceeds main memory capacity") {}
};

// 1024 x 2-bit saturating counters indexed by pc bits [11:2], starting
// weakly-not-taken.
class BranchPredictor {
 public:
  BranchPredictor() { counters_.fill(1); }

  static size_t index(uint32_t pc) { return (pc >> 2) & 1023; }

  bool predict(uint32_t pc) const { return counters_[index(pc)] >= 2; }

  void update(uint32_t pc, bool taken) {
    uint8_t& c = counters_[index(pc)];
    if (taken) {
      if (c < 3) ++c;
    } else {
      if (c > 0) --c;
    }
  }

  uint8_t counter(uint32_t pc) const { return counters_[index(pc)]; }

 private:
  std::array<uint8_t, 1024> counters_;
};

// Architectural registers plus per-register provenance tags: the VRT entry
// a register's address value derives from, when known.
struct RegFile {
  std::array<uint32_t, 32> value{};
  std::array<std::optional<uint32_t>, 32> tag{};

  uint32_t read(unsigned r) const { return r == 0 ? 0 : value[r]; }
  std::optional<uint32_t> read_tag(unsigned r) const {
    return r == 0 ? std::nullopt : tag[r];
  }
  void write(unsigned r, uint32_t v, std::optional<uint32_t> t) {
    if (r == 0) return;
    value[r] = v;
    tag[r] = t;
  }
};

// Simulator-side call context, for pairing returns with calls and knowing
// whether the executing function's variables were extracted.
struct CallContext {
  uint32_t function_pc = 0;
  bool instrumented = false;
  bool opened_frame = false;
};

struct PendingCfiCheck {
  uint32_t caller_frame = 0;
  uint64_t armed_cycle = 0;
  uint32_t return_pc = 0;
};

struct BranchStats {
  uint64_t executed = 0;
  uint64_t mispredicted = 0;
};

struct MachineState {
  RegFile regs;
  uint32_t pc = 0;
  uint64_t cycle = 0;
  uint64_t retired = 0;
  uint64_t mispeculated_branches = 0;
  bool halted = false;

  MainMemory mem;
  BranchPredictor predictor;
  BranchStats branch_stats;

  std::vector<CallContext> call_stack;
  std::optional<PendingCfiCheck> pending_cfi;

  // distinct static slots activated, for the run report
  std::set<std::pair<uint32_t, uint32_t>> activated_slots;  // (frame entry_pc, slot index)

  MachineState() : mem(65536) {}
  explicit MachineState(uint32_t mem_capacity) : mem(mem_capacity) {}
};

inline MachineState load(const ProgramImage& image, const SimConfig& cfg) {
  if (image.image_bytes() > cfg.mem_capacity) throw ImageTooLarge();
  MachineState m(cfg.mem_capacity);
  for (const auto& [addr, word] : image.text) m.mem.write_word(addr, word);
  for (const auto& [addr, byte] : image.data) m.mem.write_byte(addr, byte);
  m.pc = image.entry;
  m.regs.write(kRegSp, cfg.stack_top, std::nullopt);
  m.regs.write(kRegFp, cfg.stack_top, std::nullopt);
  const FrameLayout* entry_frame = image.find_frame(image.entry);
  m.call_stack.push_back({image.entry,
                          entry_frame != nullptr && entry_frame->instrumented,
                          false});
  return m;
}

}  // namespace vrtsim
