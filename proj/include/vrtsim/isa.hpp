#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace vrtsim {

inline constexpr unsigned kNumRegs = 32;
inline constexpr unsigned kRegZero = 0;
inline constexpr unsigned kRegSp = 29;  // stack pointer
inline constexpr unsigned kRegFp = 30;  // frame pointer
inline constexpr unsigned kRegRa = 31;  // return address

enum class Opcode {
  Lw, Sw, Lb, Sb,
  Addu, Addiu, Subu, And, Or, Ori, Lui, Sll, Srl, Slt,
  Beq, Bne, J, Jal, Jr,
  Nop, Halt,
};

struct IllegalInstruction : std::runtime_error {
  uint32_t word;
  explicit IllegalInstruction(uint32_t w)
      : std::runtime_error("illegal instruction word"), word(w) {}
};

// Fixed 32-bit encodings: opcode [31:26], rs [25:21], rt [20:16],
// rd [15:11], shamt [10:6], funct [5:0], imm [15:0], target [25:0].
namespace enc {
inline constexpr uint32_t kOpLw = 0x23, kOpSw = 0x2B, kOpLb = 0x20, kOpSb = 0x28;
inline constexpr uint32_t kOpAddiu = 0x09, kOpOri = 0x0D, kOpLui = 0x0F;
inline constexpr uint32_t kOpBeq = 0x04, kOpBne = 0x05, kOpJ = 0x02, kOpJal = 0x03;
inline constexpr uint32_t kFnSll = 0x00, kFnSrl = 0x02, kFnJr = 0x08;
inline constexpr uint32_t kFnAddu = 0x21, kFnSubu = 0x23, kFnAnd = 0x24;
inline constexpr uint32_t kFnOr = 0x25, kFnSlt = 0x2A, kFnBreak = 0x0D;
}  // namespace enc

// Decoded instruction. Fields not used by an opcode's format are zero, so
// decode(encode(i)) == i holds over the whole supported set.
struct Instruction {
  Opcode op = Opcode::Nop;
  uint8_t rs = 0, rt = 0, rd = 0, shamt = 0;
  uint16_t imm_bits = 0;    // raw 16-bit immediate field
  uint32_t target = 0;      // 26-bit jump field

  int32_t imm_s() const { return static_cast<int16_t>(imm_bits); }
  uint32_t imm_u() const { return imm_bits; }

  bool operator==(const Instruction&) const = default;

  static void check_reg(unsigned r) {
    if (r >= kNumRegs) throw std::out_of_range("register index out of range");
  }

  static Instruction itype(Opcode op, unsigned rt, unsigned rs, int64_t imm) {
    check_reg(rt); check_reg(rs);
    if (imm < -32768 || imm > 65535) throw std::out_of_range("immediate does not fit 16 bits");
    Instruction i;
    i.op = op;
    i.rt = static_cast<uint8_t>(rt);
    i.rs = static_cast<uint8_t>(rs);
    i.imm_bits = static_cast<uint16_t>(imm & 0xFFFF);
    if (op == Opcode::Lui && rs != 0) throw std::out_of_range("lui takes no source register");
    return i;
  }

  static Instruction rtype(Opcode op, unsigned rd, unsigned rs, unsigned rt) {
    check_reg(rd); check_reg(rs); check_reg(rt);
    Instruction i;
    i.op = op;
    i.rd = static_cast<uint8_t>(rd);
    i.rs = static_cast<uint8_t>(rs);
    i.rt = static_cast<uint8_t>(rt);
    return i;
  }

  static Instruction shift(Opcode op, unsigned rd, unsigned rt, unsigned shamt) {
    check_reg(rd); check_reg(rt);
    if (shamt > 31) throw std::out_of_range("shift amount out of range");
    if (op == Opcode::Sll && rd == 0 && rt == 0 && shamt == 0) return nop();
    Instruction i;
    i.op = op;
    i.rd = static_cast<uint8_t>(rd);
    i.rt = static_cast<uint8_t>(rt);
    i.shamt = static_cast<uint8_t>(shamt);
    return i;
  }

  static Instruction branch(Opcode op, unsigned rs, unsigned rt, int64_t off) {
    Instruction i = itype(op, rt, rs, off);
    return i;
  }

  static Instruction jump(Opcode op, uint32_t target26) {
    if (target26 > 0x03FFFFFF) throw std::out_of_range("jump target does not fit 26 bits");
    Instruction i;
    i.op = op;
    i.target = target26;
    return i;
  }

  static Instruction jr(unsigned rs) {
    check_reg(rs);
    Instruction i;
    i.op = Opcode::Jr;
    i.rs = static_cast<uint8_t>(rs);
    return i;
  }

  static Instruction nop() { return Instruction{}; }

  static Instruction halt() {
    Instruction i;
    i.op = Opcode::Halt;
    return i;
  }
};

inline uint32_t encode(const Instruction& i) {
  auto rfmt = [&](uint32_t funct) {
    return (uint32_t(i.rs) << 21) | (uint32_t(i.rt) << 16) |
           (uint32_t(i.rd) << 11) | (uint32_t(i.shamt) << 6) | funct;
  };
  auto ifmt = [&](uint32_t op) {
    return (op << 26) | (uint32_t(i.rs) << 21) | (uint32_t(i.rt) << 16) | i.imm_bits;
  };
  switch (i.op) {
    case Opcode::Nop:   return 0;
    case Opcode::Halt:  return enc::kFnBreak;
    case Opcode::Sll:   return rfmt(enc::kFnSll);
    case Opcode::Srl:   return rfmt(enc::kFnSrl);
    case Opcode::Jr:    return rfmt(enc::kFnJr);
    case Opcode::Addu:  return rfmt(enc::kFnAddu);
    case Opcode::Subu:  return rfmt(enc::kFnSubu);
    case Opcode::And:   return rfmt(enc::kFnAnd);
    case Opcode::Or:    return rfmt(enc::kFnOr);
    case Opcode::Slt:   return rfmt(enc::kFnSlt);
    case Opcode::Lw:    return ifmt(enc::kOpLw);
    case Opcode::Sw:    return ifmt(enc::kOpSw);
    case Opcode::Lb:    return ifmt(enc::kOpLb);
    case Opcode::Sb:    return ifmt(enc::kOpSb);
    case Opcode::Addiu: return ifmt(enc::kOpAddiu);
    case Opcode::Ori:   return ifmt(enc::kOpOri);
    case Opcode::Lui:   return ifmt(enc::kOpLui);
    case Opcode::Beq:   return ifmt(enc::kOpBeq);
    case Opcode::Bne:   return ifmt(enc::kOpBne);
    case Opcode::J:     return (enc::kOpJ << 26) | i.target;
    case Opcode::Jal:   return (enc::kOpJal << 26) | i.target;
  }
  throw std::logic_error("unreachable opcode");
}

// Strict decode: unused fields must be zero so encode(decode(w)) == w.
inline std::optional<Instruction> try_decode(uint32_t w) {
  Instruction i;
  const uint32_t op = w >> 26;
  i.rs = (w >> 21) & 31;
  i.rt = (w >> 16) & 31;
  i.rd = (w >> 11) & 31;
  i.shamt = (w >> 6) & 31;
  i.imm_bits = static_cast<uint16_t>(w & 0xFFFF);
  i.target = w & 0x03FFFFFF;

  if (op == 0) {
    const uint32_t funct = w & 0x3F;
    const uint32_t rs = i.rs, rt = i.rt, rd = i.rd, shamt = i.shamt;
    i.imm_bits = 0; i.target = 0;
    switch (funct) {
      case enc::kFnSll:
        if (w == 0) return Instruction::nop();
        if (rs != 0) return std::nullopt;
        i.op = Opcode::Sll; return i;
      case enc::kFnSrl:
        if (rs != 0) return std::nullopt;
        i.op = Opcode::Srl; return i;
      case enc::kFnJr:
        if (rt != 0 || rd != 0 || shamt != 0) return std::nullopt;
        i.op = Opcode::Jr; return i;
      case enc::kFnBreak:
        if (w != enc::kFnBreak) return std::nullopt;
        return Instruction::halt();
      case enc::kFnAddu: i.op = Opcode::Addu; break;
      case enc::kFnSubu: i.op = Opcode::Subu; break;
      case enc::kFnAnd:  i.op = Opcode::And; break;
      case enc::kFnOr:   i.op = Opcode::Or; break;
      case enc::kFnSlt:  i.op = Opcode::Slt; break;
      default: return std::nullopt;
    }
    if (shamt != 0) return std::nullopt;
    return i;
  }

  i.rd = 0; i.shamt = 0;
  switch (op) {
    case enc::kOpLw:    i.op = Opcode::Lw; break;
    case enc::kOpSw:    i.op = Opcode::Sw; break;
    case enc::kOpLb:    i.op = Opcode::Lb; break;
    case enc::kOpSb:    i.op = Opcode::Sb; break;
    case enc::kOpAddiu: i.op = Opcode::Addiu; break;
    case enc::kOpOri:   i.op = Opcode::Ori; break;
    case enc::kOpLui:
      if (i.rs != 0) return std::nullopt;
      i.op = Opcode::Lui; break;
    case enc::kOpBeq:   i.op = Opcode::Beq; break;
    case enc::kOpBne:   i.op = Opcode::Bne; break;
    case enc::kOpJ:
      i.rs = i.rt = 0; i.imm_bits = 0;
      i.op = Opcode::J;
      return i;
    case enc::kOpJal:
      i.rs = i.rt = 0; i.imm_bits = 0;
      i.op = Opcode::Jal;
      return i;
    default: return std::nullopt;
  }
  i.target = 0;
  return i;
}

inline Instruction decode(uint32_t w) {
  auto i = try_decode(w);
  if (!i) throw IllegalInstruction(w);
  return *i;
}

enum class InstrClass {
  MemAccess,
  AddressArithmetic,
  StackAllocate,
  Return,
  ControlTransfer,
  Other,
};

struct Classification {
  InstrClass kind = InstrClass::Other;
  bool is_load = false;
  uint8_t width = 0;  // bytes, MemAccess only
};

inline Classification classify(const Instruction& i) {
  switch (i.op) {
    case Opcode::Lw: return {InstrClass::MemAccess, true, 4};
    case Opcode::Lb: return {InstrClass::MemAccess, true, 1};
    case Opcode::Sw: return {InstrClass::MemAccess, false, 4};
    case Opcode::Sb: return {InstrClass::MemAccess, false, 1};
    case Opcode::Addiu:
      if (i.rt == kRegSp && i.rs == kRegSp && i.imm_s() < 0)
        return {InstrClass::StackAllocate};
      return {InstrClass::AddressArithmetic};
    case Opcode::Subu:
      if (i.rd == kRegSp) return {InstrClass::StackAllocate};
      return {InstrClass::Other};
    case Opcode::Addu:
    case Opcode::Sll:
      return {InstrClass::AddressArithmetic};
    case Opcode::Jr:
      if (i.rs == kRegRa) return {InstrClass::Return};
      return {InstrClass::ControlTransfer};
    case Opcode::Beq:
    case Opcode::Bne:
    case Opcode::J:
    case Opcode::Jal:
      return {InstrClass::ControlTransfer};
    default:
      return {InstrClass::Other};
  }
}

inline bool writes_reg(const Instruction& i, unsigned* dest) {
  switch (i.op) {
    case Opcode::Lw: case Opcode::Lb:
    case Opcode::Addiu: case Opcode::Ori: case Opcode::Lui:
      *dest = i.rt; return i.rt != 0;
    case Opcode::Addu: case Opcode::Subu: case Opcode::And:
    case Opcode::Or: case Opcode::Slt: case Opcode::Sll: case Opcode::Srl:
      *dest = i.rd; return i.rd != 0;
    case Opcode::Jal:
      *dest = kRegRa; return true;
    default:
      *dest = 0; return false;
  }
}

// Registers read by the instruction (for hazard detection / operand fetch).
struct ReadSet {
  uint8_t count = 0;
  uint8_t regs[2] = {0, 0};
  void add(uint8_t r) { regs[count++] = r; }
};

inline ReadSet reads_regs(const Instruction& i) {
  ReadSet s;
  switch (i.op) {
    case Opcode::Lw: case Opcode::Lb: case Opcode::Addiu: case Opcode::Ori:
      s.add(i.rs); break;
    case Opcode::Sw: case Opcode::Sb:
    case Opcode::Addu: case Opcode::Subu: case Opcode::And:
    case Opcode::Or: case Opcode::Slt:
    case Opcode::Beq: case Opcode::Bne:
      s.add(i.rs); s.add(i.rt); break;
    case Opcode::Sll: case Opcode::Srl:
      s.add(i.rt); break;
    case Opcode::Jr:
      s.add(i.rs); break;
    default: break;
  }
  return s;
}

inline const char* mnemonic(Opcode op) {
  switch (op) {
    case Opcode::Lw: return "lw";     case Opcode::Sw: return "sw";
    case Opcode::Lb: return "lb";     case Opcode::Sb: return "sb";
    case Opcode::Addu: return "addu"; case Opcode::Addiu: return "addiu";
    case Opcode::Subu: return "subu"; case Opcode::And: return "and";
    case Opcode::Or: return "or";     case Opcode::Ori: return "ori";
    case Opcode::Lui: return "lui";   case Opcode::Sll: return "sll";
    case Opcode::Srl: return "srl";   case Opcode::Slt: return "slt";
    case Opcode::Beq: return "beq";   case Opcode::Bne: return "bne";
    case Opcode::J: return "j";       case Opcode::Jal: return "jal";
    case Opcode::Jr: return "jr";     case Opcode::Nop: return "nop";
    case Opcode::Halt: return "halt";
  }
  return "?";
}

}  // namespace vrtsim
