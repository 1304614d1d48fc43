#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vrtsim/config.hpp"
#include "vrtsim/isa.hpp"
#include "vrtsim/machine.hpp"
#include "vrtsim/memory.hpp"
#include "vrtsim/program.hpp"
#include "vrtsim/security.hpp"
#include "vrtsim/vrt.hpp"

namespace vrtsim {

enum class TerminalStatus { Running, Halted, PolicyHalt, MaxCyclesExceeded, Error };

inline const char* status_name(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::Running:           return "running";
    case TerminalStatus::Halted:            return "halted";
    case TerminalStatus::PolicyHalt:        return "policy_halt";
    case TerminalStatus::MaxCyclesExceeded: return "max_cycles_exceeded";
    case TerminalStatus::Error:             return "error";
  }
  return "?";
}

// One instruction in flight, moving through the stage latches.
struct InFlight {
  bool valid = false;
  uint32_t pc = 0;
  Instruction instr;
  Classification cls;
  bool wrong_path = false;

  bool predicted_taken = false;

  // EX results
  bool dest_write = false;
  unsigned dest = 0;
  uint32_t dest_val = 0;
  std::optional<uint32_t> dest_tag;
  uint32_t ea = 0;
  uint32_t store_val = 0;
  std::optional<uint32_t> base_tag;

  bool cancelled = false;       // probe intervention cancelled the access
  bool event_emitted = false;
};

// The 5-stage in-order core with the VRT security unit attached: checks run
// in parallel with EX address generation and never cost a cycle on the Ok
// path.
class Simulator {
 public:
  Simulator(const ProgramImage& image, const SimConfig& cfg)
      : image_(image),
        cfg_(cfg),
        m_(load(image, cfg)),
        vrt_(cfg.vrt_capacity),
        cache_(cfg.cache_size, cfg.cache_line_size, cfg.cache_hit_latency,
               cfg.cache_miss_latency),
        monitor_(cfg.policy) {}

  TerminalStatus run() {
    while (status_ == TerminalStatus::Running) {
      if (m_.cycle >= cfg_.max_cycles) {
        status_ = TerminalStatus::MaxCyclesExceeded;
        break;
      }
      step();
    }
    return status_;
  }

  void step() {
    if (status_ != TerminalStatus::Running) return;
    try {
      step_inner();
    } catch (const SimError& e) {
      status_ = TerminalStatus::Error;
      error_ = e.what();
    } catch (const IllegalInstruction& e) {
      status_ = TerminalStatus::Error;
      char buf[64];
      std::snprintf(buf, sizeof(buf), "illegal instruction word 0x%08X", e.word);
      error_ = buf;
    }
  }

  // accessors for the harness and tests
  const MachineState& machine() const { return m_; }
  const Vrt& vrt() const { return vrt_; }
  const Cache& cache() const { return cache_; }
  const SecurityMonitor& monitor() const { return monitor_; }
  TerminalStatus status() const { return status_; }
  const std::string& error() const { return error_; }
  uint64_t last_squash_cycle() const { return last_squash_cycle_; }
  const std::vector<size_t>& last_squash_marked() const { return last_squash_marked_; }
  void set_trace_sink(std::function<void(const std::string&)> sink) { trace_ = std::move(sink); }

 private:
  const ProgramImage& image_;
  SimConfig cfg_;
  MachineState m_;
  Vrt vrt_;
  Cache cache_;
  SecurityMonitor monitor_;
  TerminalStatus status_ = TerminalStatus::Running;
  std::string error_;

  InFlight if_id_, id_ex_, ex_mem_, mem_wb_;

  bool fetch_stopped_ = false;  // correct-path halt reached fetch
  bool jr_wait_ = false;        // register jump awaiting EX resolution
  uint64_t last_sweep_ = 0;
  uint64_t stall_freeze_ = 0;   // probe intervention penalty cycles

  // Deferred resolution of a mispredicted branch: the wrong path runs until
  // resolve_at, then architectural state rolls back to the checkpoint.
  struct SpecWindow {
    bool active = false;
    uint64_t resolve_at = 0;
    uint64_t snapshot_at = 0;
    bool snapshot_taken = false;
    uint32_t redirect_pc = 0;
    RegFile checkpoint;
    std::set<size_t> touched_entries;
    std::vector<uint32_t> touched_lines;
  };
  SpecWindow window_;
  bool wrong_path_mode_ = false;
  uint64_t last_squash_cycle_ = 0;
  std::vector<size_t> last_squash_marked_;

  // per-cycle control
  bool squash_younger_ = false;
  bool stall_decode_ = false;

  std::function<void(const std::string&)> trace_;
  struct TraceLine {
    std::optional<uint32_t> stage_pc[5];  // IF ID EX MEM WB
    std::string notes;
  };
  TraceLine tl_;

  bool detectors() const { return cfg_.detectors; }

  bool in_stack_region(uint32_t addr) const {
    const uint32_t top = cfg_.stack_top;
    const uint32_t lo = cfg_.stack_region_size > top ? 0 : top - cfg_.stack_region_size;
    return addr >= lo && addr < top;
  }

  const CallContext& ctx() const { return m_.call_stack.back(); }

  void emit_trace() {
    if (!trace_) return;
    char buf[160];
    auto s = [&](int i) -> std::string {
      if (!tl_.stage_pc[i]) return "-";
      char b[16];
      std::snprintf(b, sizeof(b), "0x%X", *tl_.stage_pc[i]);
      return b;
    };
    std::snprintf(buf, sizeof(buf), "C%llu IF=%s ID=%s EX=%s MEM=%s WB=%s",
                  static_cast<unsigned long long>(m_.cycle), s(0).c_str(), s(1).c_str(),
                  s(2).c_str(), s(3).c_str(), s(4).c_str());
    trace_(std::string(buf) + tl_.notes);
  }

  void note_event(const SecurityEvent& ev) {
    if (trace_) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), " !%s@0x%X", kind_name(ev.kind), ev.pc);
      tl_.notes += buf;
    }
  }

  // Emits the event and applies the configured response. Returns false when
  // the run must halt.
  bool apply_policy(SecurityEvent ev, InFlight* offender) {
    note_event(ev);
    const PolicyAction action = monitor_.emit(std::move(ev));
    if (offender) offender->event_emitted = true;
    switch (action) {
      case PolicyAction::Report:
        return true;
      case PolicyAction::Stall:
        if (offender && (classify(offender->instr).kind == InstrClass::MemAccess)) {
          offender->cancelled = true;
          offender->dest_write = false;
        }
        stall_freeze_ += cfg_.stall_penalty;
        return true;
      case PolicyAction::Halt:
        status_ = TerminalStatus::PolicyHalt;
        return false;
    }
    return true;
  }

  void step_inner() {
    m_.cycle++;
    tl_ = TraceLine{};

    if (detectors() && cfg_.vrt_sweep_interval > 0)
      last_sweep_ = vrt_.sweep_dirty(m_.cycle, last_sweep_, cfg_.vrt_sweep_interval);

    if (stall_freeze_ > 0) {
      --stall_freeze_;
      if (trace_) trace_("C" + std::to_string(m_.cycle) + " stall");
      return;
    }

    if (window_.active && m_.cycle >= window_.resolve_at) {
      squash_window();
    } else if (window_.active && !window_.snapshot_taken && m_.cycle >= window_.snapshot_at) {
      window_.checkpoint = m_.regs;
      window_.snapshot_taken = true;
    }

    squash_younger_ = false;
    stall_decode_ = false;

    InFlight wb_in = mem_wb_;
    InFlight mem_in = ex_mem_;
    InFlight ex_in = id_ex_;

    if (wb_in.valid) tl_.stage_pc[4] = wb_in.pc;
    if (mem_in.valid) tl_.stage_pc[3] = mem_in.pc;
    if (ex_in.valid) tl_.stage_pc[2] = ex_in.pc;
    if (if_id_.valid) tl_.stage_pc[1] = if_id_.pc;

    do_wb(wb_in);
    mem_wb_ = InFlight{};
    if (status_ != TerminalStatus::Running || m_.halted) {
      if (m_.halted && status_ == TerminalStatus::Running) status_ = TerminalStatus::Halted;
      emit_trace();
      return;
    }

    const uint64_t freeze_before = stall_freeze_;
    do_mem(mem_in);
    if (status_ != TerminalStatus::Running) { emit_trace(); return; }
    if (stall_freeze_ > freeze_before) {
      // Intervention stalls the front of the pipe; the cancelled access
      // still drains to WB after the penalty.
      ex_mem_ = InFlight{};
      emit_trace();
      return;
    }

    do_ex(ex_in);
    if (status_ != TerminalStatus::Running) { emit_trace(); return; }

    do_id();
    do_if();
    emit_trace();
  }

  void squash_window() {
    if (window_.snapshot_taken) m_.regs = window_.checkpoint;
    auto clear_wrong = [](InFlight& l) {
      if (l.valid && l.wrong_path) l = InFlight{};
    };
    clear_wrong(if_id_);
    clear_wrong(id_ex_);
    clear_wrong(ex_mem_);
    clear_wrong(mem_wb_);
    m_.pc = window_.redirect_pc;
    // any fetch-stop or jump-wait in force was set by a squashed instruction
    jr_wait_ = false;
    fetch_stopped_ = false;
    last_squash_cycle_ = m_.cycle;
    last_squash_marked_.assign(window_.touched_entries.begin(), window_.touched_entries.end());
    if (detectors()) vrt_.mark_dirty(window_.touched_entries);
    if (trace_) {
      char buf[48];
      std::snprintf(buf, sizeof(buf), " squash->0x%X", window_.redirect_pc);
      tl_.notes += buf;
    }
    window_ = SpecWindow{};
    wrong_path_mode_ = false;
  }

  void do_wb(const InFlight& wb) {
    if (!wb.valid) return;
    if (wb.wrong_path) {
      // Speculative writes land but the checkpoint undoes them at squash;
      // squashed instructions never count as retired.
      if (wb.dest_write) m_.regs.write(wb.dest, wb.dest_val, wb.dest_tag);
      return;
    }
    if (wb.dest_write && !wb.cancelled)
      m_.regs.write(wb.dest, wb.dest_val, wb.dest_tag);
    m_.retired++;
    if (wb.instr.op == Opcode::Halt) m_.halted = true;
  }

  void do_mem(InFlight mem) {
    if (!mem.valid) { mem_wb_ = InFlight{}; return; }
    const Classification cls = mem.cls;
    if (cls.kind == InstrClass::MemAccess && !mem.cancelled) {
      if (cls.width == 4 && (mem.ea & 3)) {
        if (mem.wrong_path) {
          mem_wb_ = mem;  // squashed later; no fault before commit
          return;
        }
        throw UnalignedAccess(mem.ea);
      }
      if (mem.wrong_path) {
        if (detectors()) {
          if (auto idx = vrt_.lookup(mem.ea, Scope::AnyValid))
            window_.touched_entries.insert(*idx);
        }
        if (cls.is_load) {
          auto acc = cache_.access(mem.ea, false, cls.width);
          window_.touched_lines.push_back(acc.line_index);
          mem.dest_val = load_value(mem);
          if (mem.instr.op == Opcode::Lw)
            mem.dest_tag = vrt_.lookup(mem.dest_val, Scope::AssociatedOnly);
        }
        // wrong-path stores leave no trace: they would only commit at retire
      } else {
        if (detectors() && !mem.event_emitted) {
          AccessorContext actx{vrt_.current_frame(), ctx().instrumented};
          if (auto probe = monitor_.check_probe(mem.ea, actx, vrt_)) {
            SecurityEvent ev{EventKind::SpeculativeProbe, 0, mem.pc, mem.ea,
                             m_.cycle, uint32_t(*probe), "dirty-entry access from foreign code"};
            if (!apply_policy(ev, &mem)) return;
          }
        }
        if (!mem.cancelled) {
          cache_.access(mem.ea, !cls.is_load, cls.width);
          if (cls.is_load) {
            mem.dest_val = load_value(mem);
            if (mem.instr.op == Opcode::Lw)
              mem.dest_tag = vrt_.lookup(mem.dest_val, Scope::AssociatedOnly);
          } else {
            if (cls.width == 4)
              m_.mem.write_word(mem.ea, mem.store_val);
            else
              m_.mem.write_byte(mem.ea, uint8_t(mem.store_val));
          }
        }
      }
    }
    mem_wb_ = mem;
  }

  uint32_t load_value(const InFlight& mem) const {
    if (mem.cls.width == 4) return m_.mem.read_word(mem.ea);
    return uint32_t(int32_t(int8_t(m_.mem.read_byte(mem.ea))));
  }

  struct Operand {
    uint32_t value = 0;
    std::optional<uint32_t> tag;
  };

  Operand read_operand(unsigned r) const {
    if (r == 0) return {};
    // EX/MEM forwarding for ALU producers; the load-use interlock
    // guarantees loads are never needed from that latch. Everything older
    // is already in the register file (WB runs first within the cycle).
    if (ex_mem_.valid && ex_mem_.dest_write && ex_mem_.dest == r && !ex_mem_.cls.is_load)
      return {ex_mem_.dest_val, ex_mem_.dest_tag};
    return {m_.regs.read(r), m_.regs.read_tag(r)};
  }

  void do_ex(InFlight ex) {
    if (!ex.valid) { ex_mem_ = InFlight{}; return; }
    const Instruction& in = ex.instr;
    const Operand a = read_operand(in.rs);
    const Operand b = read_operand(in.rt);

    unsigned dest = 0;
    ex.dest_write = writes_reg(in, &dest);
    ex.dest = dest;
    ex.dest_tag = std::nullopt;

    switch (in.op) {
      case Opcode::Addu: ex.dest_val = a.value + b.value; break;
      case Opcode::Subu: ex.dest_val = a.value - b.value; break;
      case Opcode::And:  ex.dest_val = a.value & b.value; break;
      case Opcode::Or:   ex.dest_val = a.value | b.value; break;
      case Opcode::Slt:  ex.dest_val = int32_t(a.value) < int32_t(b.value) ? 1 : 0; break;
      case Opcode::Addiu: ex.dest_val = a.value + uint32_t(in.imm_s()); break;
      case Opcode::Ori:  ex.dest_val = a.value | in.imm_u(); break;
      case Opcode::Lui:  ex.dest_val = uint32_t(in.imm_u()) << 16; break;
      case Opcode::Sll:  ex.dest_val = b.value << in.shamt; break;
      case Opcode::Srl:  ex.dest_val = b.value >> in.shamt; break;
      case Opcode::Lw: case Opcode::Lb:
        ex.ea = a.value + uint32_t(in.imm_s());
        ex.base_tag = a.tag;
        break;
      case Opcode::Sw: case Opcode::Sb:
        ex.ea = a.value + uint32_t(in.imm_s());
        ex.base_tag = a.tag;
        ex.store_val = b.value;
        break;
      case Opcode::Jal:
        ex.dest_val = ex.pc + 4;
        break;
      default:
        break;
    }

    // provenance propagation (address tags ride the forwarding network)
    switch (in.op) {
      case Opcode::Addiu:
        if (in.rs == kRegFp) ex.dest_tag = vrt_.lookup(ex.dest_val, Scope::AssociatedOnly);
        break;
      case Opcode::Addu:
      case Opcode::Subu:
        ex.dest_tag = a.tag ? a.tag : b.tag;
        break;
      case Opcode::Sll:
        ex.dest_tag = b.tag;
        break;
      default:
        break;  // loads tag at MEM from the loaded value; others clear
    }

    const bool commit_path = !ex.wrong_path;

    if (in.op == Opcode::Jr) {
      m_.pc = a.value;
      jr_wait_ = false;
      if (commit_path && ex.cls.kind == InstrClass::Return) {
        if (!on_return(ex)) return;
      }
    }

    if (commit_path && in.op == Opcode::Jal) {
      const uint32_t target = ((ex.pc + 4) & 0xF0000000u) | (in.target << 2);
      const FrameLayout* fl = image_.find_frame(target);
      m_.call_stack.push_back({target, fl != nullptr && fl->instrumented, false});
      m_.pending_cfi.reset();  // a legitimate call supersedes the armed check
    }

    if (commit_path && ex.cls.kind == InstrClass::StackAllocate) {
      if (detectors() && m_.pending_cfi) {
        m_.pending_cfi.reset();
        SecurityEvent ev{EventKind::BackEdgeCfiViolation, 1, ex.pc, std::nullopt,
                         m_.cycle, std::nullopt,
                         "prologue allocation immediately after return"};
        if (!apply_policy(ev, &ex)) return;
      }
      open_frame_if_prologue(ex);
    }

    if (commit_path && ex.cls.kind == InstrClass::MemAccess) {
      if (!check_memaccess_at_ex(ex)) return;
    }

    if (in.op == Opcode::Beq || in.op == Opcode::Bne) {
      const bool equal = a.value == b.value;
      const bool taken = in.op == Opcode::Beq ? equal : !equal;
      const uint32_t target = ex.pc + 4 + uint32_t(in.imm_s() * 4);
      const uint32_t next = taken ? target : ex.pc + 4;
      if (commit_path) {
        m_.branch_stats.executed++;
        m_.predictor.update(ex.pc, taken);
        if (taken != ex.predicted_taken) {
          m_.branch_stats.mispredicted++;
          m_.mispeculated_branches++;
          if (cfg_.branch_resolve_latency == 0) {
            squash_younger_ = true;
            m_.pc = next;
            jr_wait_ = false;
            fetch_stopped_ = false;
          } else {
            window_.active = true;
            window_.resolve_at = m_.cycle + cfg_.branch_resolve_latency;
            window_.snapshot_at = m_.cycle + 2;
            window_.snapshot_taken = false;
            window_.redirect_pc = next;
            window_.touched_entries.clear();
            window_.touched_lines.clear();
            wrong_path_mode_ = true;
            if (if_id_.valid) if_id_.wrong_path = true;
          }
        }
      }
    }

    ex_mem_ = ex;
  }

  // Return semantics: drop the callee's records, re-associate the caller,
  // and arm the back-edge check on the first post-return access.
  bool on_return(InFlight& ex) {
    if (m_.call_stack.size() <= 1) {
      if (detectors()) {
        SecurityEvent ev{EventKind::ReturnUnderflow, 0, ex.pc, std::nullopt,
                         m_.cycle, std::nullopt, "return without matching call"};
        if (!apply_policy(ev, &ex)) return false;
      }
      return true;
    }
    CallContext closing = m_.call_stack.back();
    m_.call_stack.pop_back();
    if (closing.opened_frame) vrt_.close_frame();
    if (detectors())
      m_.pending_cfi = PendingCfiCheck{vrt_.current_frame(), m_.cycle, ex.pc};
    return true;
  }

  void open_frame_if_prologue(InFlight& ex) {
    const FrameLayout* fl = image_.find_frame(ex.pc);
    if (!fl || !fl->instrumented) return;
    vrt_.open_frame();
    m_.call_stack.back().opened_frame = true;
    if (cfg_.vrt_raw_mode) return;  // frame scope only; entries appear on first use
    const uint32_t frame_base = ex.dest_val;  // sp after the allocation
    for (size_t i = 0; i < fl->slots.size(); ++i) {
      const FrameSlot& s = fl->slots[i];
      const uint32_t base = frame_base + uint32_t(int64_t(s.fp_offset));
      auto idx = vrt_.record(base, s.size);
      if (!idx) {
        if (detectors()) {
          SecurityEvent ev{EventKind::VrtCapacityExceeded, 0, ex.pc, base, m_.cycle,
                           std::nullopt, "table full; " + s.name + " unprotected"};
          if (!apply_policy(ev, &ex)) return;
        }
      } else {
        m_.activated_slots.insert({fl->entry_pc, uint32_t(i)});
      }
    }
  }

  bool check_memaccess_at_ex(InFlight& ex) {
    if (!detectors()) return true;
    if (m_.pending_cfi) {
      const auto hit = vrt_.lookup(ex.ea, Scope::AssociatedOnly);
      m_.pending_cfi.reset();
      if (!hit) {
        SecurityEvent ev{EventKind::BackEdgeCfiViolation, 2, ex.pc, ex.ea, m_.cycle,
                         std::nullopt, "post-return access matches no caller record"};
        if (!apply_policy(ev, &ex)) return false;
      }
    }
    if (!ctx().instrumented || ex.event_emitted) return true;
    if (ex.base_tag) {
      if (vrt_.check_spatial(ex.ea, size_t(*ex.base_tag)) == SpatialVerdict::Violation) {
        SecurityEvent ev{EventKind::SpatialViolation, 0, ex.pc, ex.ea, m_.cycle,
                         *ex.base_tag, "address leaves the provenance record"};
        if (!apply_policy(ev, &ex)) return false;
      }
      return true;
    }
    if (vrt_.lookup(ex.ea, Scope::AssociatedOnly)) return true;
    if (cfg_.vrt_raw_mode && ex.instr.rs == kRegFp && vrt_.frame_open()) {
      if (!vrt_.overlaps_current_frame(ex.ea, ex.cls.width))
        vrt_.record(ex.ea, ex.cls.width);
      return true;
    }
    if (in_stack_region(ex.ea)) {
      SecurityEvent ev{EventKind::SpatialViolation, 0, ex.pc, ex.ea, m_.cycle,
                       std::nullopt, "stack access matches no active record"};
      if (!apply_policy(ev, &ex)) return false;
    }
    return true;
  }

  void do_id() {
    if (squash_younger_) {
      if_id_ = InFlight{};
      id_ex_ = InFlight{};
      return;
    }
    if (!if_id_.valid) {
      id_ex_ = InFlight{};
      return;
    }
    if (wrong_path_mode_) if_id_.wrong_path = true;
    // load-use interlock: one bubble when the producer just entered MEM
    const ReadSet rs = reads_regs(if_id_.instr);
    if (ex_mem_.valid && ex_mem_.cls.is_load && ex_mem_.dest_write) {
      for (uint8_t k = 0; k < rs.count; ++k) {
        if (rs.regs[k] != 0 && rs.regs[k] == ex_mem_.dest) {
          stall_decode_ = true;
          id_ex_ = InFlight{};
          return;
        }
      }
    }
    id_ex_ = if_id_;
    if_id_ = InFlight{};
  }

  void do_if() {
    if (squash_younger_ || stall_decode_) return;
    if (if_id_.valid) return;  // decode kept it (only under stall)
    if (fetch_stopped_ || jr_wait_) return;

    const uint32_t pc = m_.pc;
    uint32_t word;
    try {
      word = m_.mem.read_word(pc);
    } catch (const UnalignedAccess&) {
      if (wrong_path_mode_) return;
      throw;
    }
    auto decoded = try_decode(word);
    if (!decoded) {
      if (wrong_path_mode_) {
        InFlight f;
        f.valid = true;
        f.pc = pc;
        f.instr = Instruction::nop();
        f.cls = classify(f.instr);
        f.wrong_path = true;
        if_id_ = f;
        tl_.stage_pc[0] = pc;
        m_.pc = pc + 4;
        return;
      }
      throw IllegalInstruction(word);
    }

    InFlight f;
    f.valid = true;
    f.pc = pc;
    f.instr = *decoded;
    f.cls = classify(f.instr);
    f.wrong_path = wrong_path_mode_;
    tl_.stage_pc[0] = pc;

    switch (f.instr.op) {
      case Opcode::Beq:
      case Opcode::Bne: {
        f.predicted_taken = m_.predictor.predict(pc);
        const uint32_t target = pc + 4 + uint32_t(f.instr.imm_s() * 4);
        m_.pc = f.predicted_taken ? target : pc + 4;
        break;
      }
      case Opcode::J:
      case Opcode::Jal:
        m_.pc = ((pc + 4) & 0xF0000000u) | (f.instr.target << 2);
        break;
      case Opcode::Jr:
        jr_wait_ = true;
        m_.pc = pc + 4;  // placeholder; EX overwrites
        break;
      case Opcode::Halt:
        if (!f.wrong_path) fetch_stopped_ = true;
        m_.pc = pc + 4;
        break;
      default:
        m_.pc = pc + 4;
        break;
    }
    if_id_ = f;
  }
};

}  // namespace vrtsim
