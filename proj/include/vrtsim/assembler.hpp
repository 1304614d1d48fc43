#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vrtsim/isa.hpp"
#include "vrtsim/program.hpp"

namespace vrtsim {

enum class AsmErrorKind {
  Syntax,
  UndefinedLabel,
  DuplicateLabel,
  OverlappingSlots,
  SlotTooLarge,
  Range,
};

struct AsmError : std::runtime_error {
  AsmErrorKind kind;
  int line;
  AsmError(AsmErrorKind k, int ln, const std::string& msg)
      : std::runtime_error("line " + std::to_string(ln) + ": " + msg),
        kind(k), line(ln) {}
};

namespace asmdetail {

inline std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

inline bool is_ident(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(uint8_t(s[0])) && s[0] != '_' && s[0] != '.') return false;
  for (char c : s)
    if (!std::isalnum(uint8_t(c)) && c != '_' && c != '.') return false;
  return true;
}

inline std::optional<int64_t> parse_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  try {
    size_t pos = 0;
    int64_t v = std::stoll(s, &pos, 0);
    if (pos != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

inline std::optional<unsigned> parse_reg(const std::string& tok) {
  if (tok.size() < 2 || tok[0] != '$') return std::nullopt;
  const std::string name = tok.substr(1);
  if (auto n = parse_int(name)) {
    if (*n >= 0 && *n < 32) return unsigned(*n);
    return std::nullopt;
  }
  static const std::map<std::string, unsigned> aliases = {
      {"zero", 0}, {"at", 1}, {"v0", 2}, {"v1", 3},
      {"a0", 4}, {"a1", 5}, {"a2", 6}, {"a3", 7},
      {"t0", 8}, {"t1", 9}, {"t2", 10}, {"t3", 11},
      {"t4", 12}, {"t5", 13}, {"t6", 14}, {"t7", 15},
      {"s0", 16}, {"s1", 17}, {"s2", 18}, {"s3", 19},
      {"s4", 20}, {"s5", 21}, {"s6", 22}, {"s7", 23},
      {"t8", 24}, {"t9", 25}, {"k0", 26}, {"k1", 27},
      {"gp", 28}, {"sp", 29}, {"fp", 30}, {"s8", 30}, {"ra", 31},
  };
  auto it = aliases.find(name);
  if (it == aliases.end()) return std::nullopt;
  return it->second;
}

inline std::vector<std::string> split_operands(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(strip(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cur = strip(cur);
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

}  // namespace asmdetail

// Two-pass line assembler for the MIPS-style syntax plus frame-layout
// directives. Pseudo-ops: nop, halt, li, la, move.
class Assembler {
 public:
  ProgramImage assemble(const std::string& source) {
    parse_lines(source);
    layout_pass();
    emit_pass();
    finalize_frames();
    resolve_entry();
    return image_;
  }

 private:
  struct SourceInstr {
    int line;
    std::string mnemonic;
    std::vector<std::string> ops;
    uint32_t addr = 0;
    uint32_t words = 1;
  };
  struct PendingVar {
    int line;
    std::string name;
    int64_t offset;
    int64_t size;
  };
  struct PendingFrame {
    int line;
    std::string function;
    bool instrumented = true;
    std::vector<PendingVar> vars;
  };
  struct DataItem {
    int line;
    bool word;  // else byte
    int64_t value;
    uint32_t addr = 0;
  };

  ProgramImage image_;
  std::vector<SourceInstr> instrs_;
  std::vector<DataItem> data_items_;
  std::vector<PendingFrame> pending_frames_;
  std::map<std::string, std::pair<int, uint32_t>> labels_;  // name -> (line, addr)
  std::optional<std::string> entry_name_;
  int entry_line_ = 0;

  [[noreturn]] static void fail(AsmErrorKind k, int line, const std::string& msg) {
    throw AsmError(k, line, msg);
  }

  static uint32_t pseudo_words(const std::string& mn, const std::vector<std::string>& ops) {
    if (mn == "la") return 2;
    if (mn == "li" && ops.size() == 2) {
      auto v = asmdetail::parse_int(ops[1]);
      if (v && *v >= -32768 && *v <= 65535) return 1;
      return 2;
    }
    return 1;
  }

  void parse_lines(const std::string& source) {
    std::istringstream in(source);
    std::string raw;
    int lineno = 0;
    enum class Section { Text, Data } section = Section::Text;
    std::vector<std::pair<int, std::string>> text_labels;  // labels awaiting next instr
    std::vector<std::pair<int, std::string>> data_labels;
    PendingFrame* open_frame = nullptr;

    auto define_label = [&](const std::string& name, int line) {
      if (labels_.count(name)) fail(AsmErrorKind::DuplicateLabel, line, "duplicate label " + name);
      labels_[name] = {line, 0};
    };

    while (std::getline(in, raw)) {
      ++lineno;
      auto hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      std::string line = asmdetail::strip(raw);
      while (!line.empty()) {
        auto colon = line.find(':');
        auto space = line.find_first_of(" \t");
        if (colon != std::string::npos && (space == std::string::npos || colon < space)) {
          std::string name = asmdetail::strip(line.substr(0, colon));
          if (!asmdetail::is_ident(name) || name[0] == '.')
            fail(AsmErrorKind::Syntax, lineno, "bad label name: " + name);
          define_label(name, lineno);
          if (section == Section::Text)
            text_labels.emplace_back(lineno, name);
          else
            data_labels.emplace_back(lineno, name);
          line = asmdetail::strip(line.substr(colon + 1));
          continue;
        }
        break;
      }
      if (line.empty()) continue;

      std::string head, rest;
      {
        auto sp = line.find_first_of(" \t");
        head = sp == std::string::npos ? line : line.substr(0, sp);
        rest = sp == std::string::npos ? "" : asmdetail::strip(line.substr(sp + 1));
      }

      if (head[0] == '.') {
        if (head == ".text") { section = Section::Text; }
        else if (head == ".data") { section = Section::Data; }
        else if (head == ".globl") {
          if (!asmdetail::is_ident(rest)) fail(AsmErrorKind::Syntax, lineno, ".globl needs a name");
        } else if (head == ".entry") {
          if (!asmdetail::is_ident(rest)) fail(AsmErrorKind::Syntax, lineno, ".entry needs a name");
          entry_name_ = rest;
          entry_line_ = lineno;
        } else if (head == ".word" || head == ".byte") {
          auto v = asmdetail::parse_int(rest);
          if (!v) fail(AsmErrorKind::Syntax, lineno, head + " needs an integer value");
          if (section != Section::Data) fail(AsmErrorKind::Syntax, lineno, head + " outside .data");
          data_items_.push_back({lineno, head == ".word", *v, 0});
          attach_data_labels_.emplace_back(data_items_.size() - 1, data_labels);
          data_labels.clear();
        } else if (head == ".frame") {
          if (!asmdetail::is_ident(rest)) fail(AsmErrorKind::Syntax, lineno, ".frame needs a function name");
          pending_frames_.push_back({lineno, rest, true, {}});
          open_frame = &pending_frames_.back();
        } else if (head == ".var") {
          if (!open_frame) fail(AsmErrorKind::Syntax, lineno, ".var outside a .frame block");
          auto ops = asmdetail::split_operands(rest);
          if (ops.size() != 3) fail(AsmErrorKind::Syntax, lineno, ".var name, fp_offset, size");
          auto off = asmdetail::parse_int(ops[1]);
          auto sz = asmdetail::parse_int(ops[2]);
          if (!asmdetail::is_ident(ops[0]) || !off || !sz)
            fail(AsmErrorKind::Syntax, lineno, "bad .var operands");
          open_frame->vars.push_back({lineno, ops[0], *off, *sz});
        } else if (head == ".uninstrumented") {
          if (!open_frame) fail(AsmErrorKind::Syntax, lineno, ".uninstrumented outside a .frame block");
          open_frame->instrumented = false;
        } else {
          fail(AsmErrorKind::Syntax, lineno, "unknown directive " + head);
        }
        continue;
      }

      if (section != Section::Text)
        fail(AsmErrorKind::Syntax, lineno, "instruction outside .text");
      SourceInstr si;
      si.line = lineno;
      si.mnemonic = head;
      si.ops = rest.empty() ? std::vector<std::string>{} : asmdetail::split_operands(rest);
      si.words = pseudo_words(head, si.ops);
      attach_text_labels_.emplace_back(instrs_.size(), text_labels);
      text_labels.clear();
      instrs_.push_back(std::move(si));
    }
    if (!text_labels.empty()) {
      // trailing labels point one past the last instruction
      attach_text_labels_.emplace_back(instrs_.size(), text_labels);
    }
    if (!data_labels.empty()) {
      attach_data_labels_.emplace_back(data_items_.size(), data_labels);
    }
  }

  std::vector<std::pair<size_t, std::vector<std::pair<int, std::string>>>> attach_text_labels_;
  std::vector<std::pair<size_t, std::vector<std::pair<int, std::string>>>> attach_data_labels_;

  void layout_pass() {
    uint32_t pc = kTextBase;
    std::vector<uint32_t> instr_addr(instrs_.size() + 1, 0);
    for (size_t i = 0; i < instrs_.size(); ++i) {
      instrs_[i].addr = pc;
      instr_addr[i] = pc;
      pc += instrs_[i].words * 4;
    }
    instr_addr[instrs_.size()] = pc;

    uint32_t dp = kDataBase;
    std::vector<uint32_t> data_addr(data_items_.size() + 1, 0);
    for (size_t i = 0; i < data_items_.size(); ++i) {
      if (data_items_[i].word) dp = (dp + 3) & ~3u;
      data_items_[i].addr = dp;
      data_addr[i] = dp;
      dp += data_items_[i].word ? 4 : 1;
    }
    data_addr[data_items_.size()] = dp;

    for (auto& [idx, labels] : attach_text_labels_)
      for (auto& [line, name] : labels) labels_[name] = {line, instr_addr[idx]};
    for (auto& [idx, labels] : attach_data_labels_)
      for (auto& [line, name] : labels) labels_[name] = {line, data_addr[idx]};
    for (auto& [name, info] : labels_) image_.symbols[name] = info.second;
  }

  uint32_t label_addr(const std::string& name, int line) {
    auto it = labels_.find(name);
    if (it == labels_.end()) fail(AsmErrorKind::UndefinedLabel, line, "undefined label " + name);
    return it->second.second;
  }

  int64_t imm_or_label(const std::string& tok, int line) {
    if (auto v = asmdetail::parse_int(tok)) return *v;
    if (asmdetail::is_ident(tok)) return label_addr(tok, line);
    fail(AsmErrorKind::Syntax, line, "expected immediate or label: " + tok);
  }

  unsigned reg(const std::string& tok, int line) {
    auto r = asmdetail::parse_reg(tok);
    if (!r) fail(AsmErrorKind::Syntax, line, "bad register: " + tok);
    return *r;
  }

  // offset($base)
  std::pair<int64_t, unsigned> mem_operand(const std::string& tok, int line) {
    auto open = tok.find('(');
    auto close = tok.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
      fail(AsmErrorKind::Syntax, line, "expected offset($reg): " + tok);
    std::string offs = asmdetail::strip(tok.substr(0, open));
    std::string base = asmdetail::strip(tok.substr(open + 1, close - open - 1));
    int64_t off = offs.empty() ? 0 : imm_or_label(offs, line);
    return {off, reg(base, line)};
  }

  void put_word(uint32_t addr, const Instruction& ins) {
    image_.text[addr] = encode(ins);
  }

  template <typename F>
  auto guard_range(int line, F&& f) {
    try {
      return f();
    } catch (const std::out_of_range& e) {
      fail(AsmErrorKind::Range, line, e.what());
    }
  }

  void emit_pass() {
    for (const auto& si : instrs_) emit_instr(si);
    for (const auto& d : data_items_) {
      if (d.word) {
        uint64_t v = uint64_t(d.value);
        image_.data[d.addr] = uint8_t(v >> 24);
        image_.data[d.addr + 1] = uint8_t(v >> 16);
        image_.data[d.addr + 2] = uint8_t(v >> 8);
        image_.data[d.addr + 3] = uint8_t(v);
      } else {
        if (d.value < -128 || d.value > 255)
          fail(AsmErrorKind::Range, d.line, ".byte value out of range");
        image_.data[d.addr] = uint8_t(d.value);
      }
    }
  }

  void emit_instr(const SourceInstr& si) {
    const int ln = si.line;
    const auto& ops = si.ops;
    const std::string& m = si.mnemonic;
    auto need = [&](size_t n) {
      if (ops.size() != n)
        fail(AsmErrorKind::Syntax, ln, m + " expects " + std::to_string(n) + " operands");
    };

    auto emit1 = [&](const Instruction& ins) { put_word(si.addr, ins); };

    if (m == "nop") { need(0); emit1(Instruction::nop()); return; }
    if (m == "halt") { need(0); emit1(Instruction::halt()); return; }

    if (m == "lw" || m == "sw" || m == "lb" || m == "sb") {
      need(2);
      unsigned rt = reg(ops[0], ln);
      auto [off, base] = mem_operand(ops[1], ln);
      Opcode op = m == "lw" ? Opcode::Lw : m == "sw" ? Opcode::Sw
                : m == "lb" ? Opcode::Lb : Opcode::Sb;
      emit1(guard_range(ln, [&] { return Instruction::itype(op, rt, base, off); }));
      return;
    }
    if (m == "addiu" || m == "ori") {
      need(3);
      unsigned rt = reg(ops[0], ln), rs = reg(ops[1], ln);
      int64_t imm = imm_or_label(ops[2], ln);
      Opcode op = m == "addiu" ? Opcode::Addiu : Opcode::Ori;
      emit1(guard_range(ln, [&] { return Instruction::itype(op, rt, rs, imm); }));
      return;
    }
    if (m == "lui") {
      need(2);
      unsigned rt = reg(ops[0], ln);
      int64_t imm = imm_or_label(ops[1], ln);
      emit1(guard_range(ln, [&] { return Instruction::itype(Opcode::Lui, rt, 0, imm); }));
      return;
    }
    if (m == "addu" || m == "subu" || m == "and" || m == "or" || m == "slt") {
      need(3);
      unsigned rd = reg(ops[0], ln), rs = reg(ops[1], ln), rt = reg(ops[2], ln);
      Opcode op = m == "addu" ? Opcode::Addu : m == "subu" ? Opcode::Subu
                : m == "and" ? Opcode::And : m == "or" ? Opcode::Or : Opcode::Slt;
      emit1(Instruction::rtype(op, rd, rs, rt));
      return;
    }
    if (m == "sll" || m == "srl") {
      need(3);
      unsigned rd = reg(ops[0], ln), rt = reg(ops[1], ln);
      int64_t sh = imm_or_label(ops[2], ln);
      if (sh < 0 || sh > 31) fail(AsmErrorKind::Range, ln, "shift amount out of range");
      emit1(Instruction::shift(m == "sll" ? Opcode::Sll : Opcode::Srl, rd, rt, unsigned(sh)));
      return;
    }
    if (m == "beq" || m == "bne") {
      need(3);
      unsigned rs = reg(ops[0], ln), rt = reg(ops[1], ln);
      int64_t target = imm_or_label(ops[2], ln);
      int64_t diff = target - (int64_t(si.addr) + 4);
      if (diff % 4 != 0) fail(AsmErrorKind::Range, ln, "branch target not word aligned");
      int64_t off = diff / 4;
      if (off < -32768 || off > 32767) fail(AsmErrorKind::Range, ln, "branch target out of range");
      emit1(Instruction::branch(m == "beq" ? Opcode::Beq : Opcode::Bne, rs, rt, off));
      return;
    }
    if (m == "j" || m == "jal") {
      need(1);
      int64_t target = imm_or_label(ops[0], ln);
      if (target % 4 != 0) fail(AsmErrorKind::Range, ln, "jump target not word aligned");
      if ((uint64_t(target) & 0xF0000000u) != ((uint64_t(si.addr) + 4) & 0xF0000000u))
        fail(AsmErrorKind::Range, ln, "jump target outside the current 256MB region");
      emit1(Instruction::jump(m == "j" ? Opcode::J : Opcode::Jal,
                              uint32_t((target >> 2) & 0x03FFFFFF)));
      return;
    }
    if (m == "jr") {
      need(1);
      emit1(Instruction::jr(reg(ops[0], ln)));
      return;
    }
    if (m == "move") {
      need(2);
      unsigned rd = reg(ops[0], ln), rs2 = reg(ops[1], ln);
      emit1(Instruction::rtype(Opcode::Addu, rd, 0, rs2));
      return;
    }
    if (m == "li") {
      need(2);
      unsigned rt = reg(ops[0], ln);
      int64_t v = imm_or_label(ops[1], ln);
      if (v >= 0 && v <= 65535) {
        emit1(Instruction::itype(Opcode::Ori, rt, 0, v));
      } else if (v >= -32768 && v < 0) {
        emit1(Instruction::itype(Opcode::Addiu, rt, 0, v));
      } else {
        uint32_t u = uint32_t(v);
        put_word(si.addr, encode_pair_hi(rt, u));
        put_word(si.addr + 4, encode_pair_lo(rt, u));
      }
      return;
    }
    if (m == "la") {
      need(2);
      unsigned rt = reg(ops[0], ln);
      uint32_t addr = uint32_t(imm_or_label(ops[1], ln));
      put_word(si.addr, encode_pair_hi(rt, addr));
      put_word(si.addr + 4, encode_pair_lo(rt, addr));
      return;
    }
    fail(AsmErrorKind::Syntax, ln, "unknown mnemonic " + m);
  }

  static Instruction encode_pair_hi(unsigned rt, uint32_t value) {
    return Instruction::itype(Opcode::Lui, rt, 0, (value >> 16) & 0xFFFF);
  }
  static Instruction encode_pair_lo(unsigned rt, uint32_t value) {
    return Instruction::itype(Opcode::Ori, rt, rt, value & 0xFFFF);
  }

  void put_word(uint32_t addr, uint32_t word) { image_.text[addr] = word; }

  void finalize_frames() {
    for (const auto& pf : pending_frames_) {
      FrameLayout fl;
      fl.function = pf.function;
      fl.entry_pc = label_addr(pf.function, pf.line);
      fl.instrumented = pf.instrumented;
      for (const auto& v : pf.vars) {
        if (v.size > 256) fail(AsmErrorKind::SlotTooLarge, v.line, "slot " + v.name + " exceeds 256 bytes");
        if (v.size < 1) fail(AsmErrorKind::Range, v.line, "slot " + v.name + " must be at least 1 byte");
        for (const auto& prev : fl.slots) {
          int64_t a0 = prev.fp_offset, a1 = prev.fp_offset + prev.size;
          int64_t b0 = v.offset, b1 = v.offset + v.size;
          if (a0 < b1 && b0 < a1)
            fail(AsmErrorKind::OverlappingSlots, v.line,
                 "slot " + v.name + " overlaps " + prev.name + " in " + fl.function);
        }
        fl.slots.push_back({v.name, v.offset, uint32_t(v.size)});
      }
      image_.frames.push_back(std::move(fl));
    }
  }

  void resolve_entry() {
    if (entry_name_) {
      image_.entry = label_addr(*entry_name_, entry_line_);
    } else if (image_.symbols.count("main")) {
      image_.entry = image_.symbols.at("main");
    } else {
      image_.entry = kTextBase;
    }
  }
};

inline ProgramImage assemble(const std::string& source) {
  return Assembler().assemble(source);
}

// Canonical listing of one instruction. Branch and jump targets print as
// labels when the resolver knows the address.
inline std::string disasm_instr(const Instruction& i, uint32_t pc,
                                const std::map<uint32_t, std::string>* label_at = nullptr) {
  char buf[64];
  auto label = [&](uint32_t addr) -> std::string {
    if (label_at) {
      auto it = label_at->find(addr);
      if (it != label_at->end()) return it->second;
    }
    std::snprintf(buf, sizeof(buf), "0x%X", addr);
    return buf;
  };
  switch (i.op) {
    case Opcode::Nop: return "nop";
    case Opcode::Halt: return "halt";
    case Opcode::Lw: case Opcode::Sw: case Opcode::Lb: case Opcode::Sb:
      std::snprintf(buf, sizeof(buf), "%s $%d,%d($%d)", mnemonic(i.op), i.rt, i.imm_s(), i.rs);
      return buf;
    case Opcode::Addiu:
      std::snprintf(buf, sizeof(buf), "addiu $%d,$%d,%d", i.rt, i.rs, i.imm_s());
      return buf;
    case Opcode::Ori:
      std::snprintf(buf, sizeof(buf), "ori $%d,$%d,%u", i.rt, i.rs, i.imm_u());
      return buf;
    case Opcode::Lui:
      std::snprintf(buf, sizeof(buf), "lui $%d,%u", i.rt, i.imm_u());
      return buf;
    case Opcode::Addu: case Opcode::Subu: case Opcode::And:
    case Opcode::Or: case Opcode::Slt:
      std::snprintf(buf, sizeof(buf), "%s $%d,$%d,$%d", mnemonic(i.op), i.rd, i.rs, i.rt);
      return buf;
    case Opcode::Sll: case Opcode::Srl:
      std::snprintf(buf, sizeof(buf), "%s $%d,$%d,%d", mnemonic(i.op), i.rd, i.rt, i.shamt);
      return buf;
    case Opcode::Beq: case Opcode::Bne: {
      uint32_t target = pc + 4 + uint32_t(i.imm_s() * 4);
      std::snprintf(buf, sizeof(buf), "%s $%d,$%d,", mnemonic(i.op), i.rs, i.rt);
      return std::string(buf) + label(target);
    }
    case Opcode::J: case Opcode::Jal: {
      uint32_t target = ((pc + 4) & 0xF0000000u) | (i.target << 2);
      return std::string(mnemonic(i.op)) + " " + label(target);
    }
    case Opcode::Jr:
      std::snprintf(buf, sizeof(buf), "jr $%d", i.rs);
      return buf;
  }
  return "?";
}

// Emits a listing that re-assembles to the same image: text with labels,
// data, frame directives, and the entry point.
inline std::string disassemble(const ProgramImage& image) {
  std::map<uint32_t, std::string> label_at;
  for (const auto& [name, addr] : image.symbols) {
    if (!label_at.count(addr)) label_at[addr] = name;
  }
  // synthesize labels for unnamed branch/jump targets
  for (const auto& [addr, word] : image.text) {
    auto ins = try_decode(word);
    if (!ins) continue;
    std::optional<uint32_t> target;
    if (ins->op == Opcode::Beq || ins->op == Opcode::Bne)
      target = addr + 4 + uint32_t(ins->imm_s() * 4);
    else if (ins->op == Opcode::J || ins->op == Opcode::Jal)
      target = ((addr + 4) & 0xF0000000u) | (ins->target << 2);
    if (target && !label_at.count(*target)) {
      char buf[24];
      std::snprintf(buf, sizeof(buf), "L%X", *target);
      label_at[*target] = buf;
    }
  }
  if (!label_at.count(image.entry)) label_at[image.entry] = "main";

  std::string out = ".text\n";
  out += ".entry " + label_at.at(image.entry) + "\n";
  for (const auto& [addr, word] : image.text) {
    auto it = label_at.find(addr);
    if (it != label_at.end()) out += it->second + ":\n";
    Instruction ins = decode(word);
    out += "    " + disasm_instr(ins, addr, &label_at) + "\n";
  }
  if (!image.data.empty()) {
    out += ".data\n";
    uint32_t expect = kDataBase;
    for (const auto& [addr, byte] : image.data) {
      auto it = label_at.find(addr);
      if (it != label_at.end()) out += it->second + ":\n";
      while (expect < addr) {  // alignment padding emitted explicitly
        out += "    .byte 0\n";
        ++expect;
      }
      char buf[24];
      std::snprintf(buf, sizeof(buf), "    .byte %u\n", byte);
      out += buf;
      expect = addr + 1;
    }
  }
  for (const auto& f : image.frames) {
    out += ".frame " + f.function + "\n";
    if (!f.instrumented) out += ".uninstrumented\n";
    for (const auto& s : f.slots) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), ".var %s, %lld, %u\n", s.name.c_str(),
                    static_cast<long long>(s.fp_offset), s.size);
      out += buf;
    }
  }
  return out;
}

}  // namespace vrtsim
