#include "vrtsim/pipeline.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vrtsim/assembler.hpp"
#include "vrtsim/harness.hpp"

using namespace vrtsim;

namespace {

Simulator run_program(const std::string& src, SimConfig cfg = {}) {
  ProgramImage img = assemble(src);
  Simulator sim(img, cfg);
  sim.run();
  return sim;
}

}  // namespace

TEST(Predictor, FreshCounterTrainsTaken) {
  BranchPredictor bp;
  const uint32_t pc = 0x400100;
  EXPECT_EQ(bp.counter(pc), 1);          // weakly not-taken
  EXPECT_FALSE(bp.predict(pc));          // first prediction: not taken (one miss)
  bp.update(pc, true);
  EXPECT_EQ(bp.counter(pc), 2);
  bp.update(pc, true);
  EXPECT_EQ(bp.counter(pc), 3);
  EXPECT_TRUE(bp.predict(pc));
}

TEST(Predictor, Hysteresis) {
  BranchPredictor bp;
  const uint32_t pc = 0x400200;
  bp.update(pc, true);
  bp.update(pc, true);                   // counter 3
  bp.update(pc, false);                  // counter 2
  EXPECT_EQ(bp.counter(pc), 2);
  EXPECT_TRUE(bp.predict(pc));           // still predicting taken
}

TEST(Predictor, AlternatingSequenceMatchesOracle) {
  BranchPredictor bp;
  const uint32_t pc = 0x400300;
  std::vector<bool> outcomes;
  for (int i = 0; i < 40; ++i) outcomes.push_back(i % 2 == 0);
  int miss = 0;
  for (bool t : outcomes) {
    if (bp.predict(pc) != t) ++miss;
    bp.update(pc, t);
  }
  EXPECT_EQ(miss, oracle::counter_mispredicts(outcomes));
}

TEST(Predictor, IndexUsesPcBits11to2) {
  BranchPredictor bp;
  bp.update(0x400000, true);
  bp.update(0x400000, true);
  EXPECT_TRUE(bp.predict(0x400000));
  EXPECT_TRUE(bp.predict(0x401000));     // aliases: bit 12 not in the index
  EXPECT_FALSE(bp.predict(0x400004));
}

TEST(PipelineTiming, StraightLineTenInstructions) {
  // 5-stage fill + 9: ten instructions retire in 14 cycles
  std::string src = "main:\n";
  for (int i = 0; i < 9; ++i) src += "    ori $1,$0," + std::to_string(i) + "\n";
  src += "    halt\n";
  Simulator sim = run_program(src);
  EXPECT_EQ(sim.status(), TerminalStatus::Halted);
  EXPECT_EQ(sim.machine().retired, 10u);
  EXPECT_EQ(sim.machine().cycle, 14u);
}

TEST(PipelineTiming, LoadUseStallsOneCycle) {
  SimConfig cfg;
  Simulator dep = run_program(
      "main:\n"
      "    sw $0,0x100($0)\n"
      "    lw $2,0x100($0)\n"
      "    addu $3,$2,$2\n"   // consumes the load immediately
      "    halt\n", cfg);
  Simulator indep = run_program(
      "main:\n"
      "    sw $0,0x100($0)\n"
      "    lw $2,0x100($0)\n"
      "    addu $3,$1,$1\n"
      "    halt\n", cfg);
  EXPECT_EQ(dep.machine().retired, indep.machine().retired);
  EXPECT_EQ(dep.machine().cycle, indep.machine().cycle + 1);
}

TEST(PipelineTiming, JumpRedirectsWithoutBubble) {
  Simulator sim = run_program(
      "main:\n"
      "    j skip\n"
      "    nop\n"
      "skip:\n"
      "    ori $1,$0,1\n"
      "    halt\n");
  EXPECT_EQ(sim.machine().retired, 3u);  // j, ori, halt
  EXPECT_EQ(sim.machine().cycle, 7u);
}

TEST(PipelineTiming, RegisterJumpCostsTwoBubbles) {
  Simulator sim = run_program(
      "main:\n"
      "    jal f\n"
      "    halt\n"
      "f:\n"
      "    jr $31\n");
  // jal IF@1, jr IF@2 EX@4 (redirect), halt IF@5 WB@9
  EXPECT_EQ(sim.machine().retired, 3u);
  EXPECT_EQ(sim.machine().cycle, 9u);
}

TEST(PipelineTiming, CorrectlyPredictedLoopBackEdge) {
  // after the first two mispredicts (entry + exit) the counter carries the
  // loop; the run is still deterministic
  Simulator sim = run_program(
      "main:\n"
      "    ori $8,$0,0\n"
      "    ori $9,$0,6\n"
      "loop:\n"
      "    addiu $8,$8,1\n"
      "    bne $8,$9,loop\n"
      "    halt\n");
  EXPECT_EQ(sim.status(), TerminalStatus::Halted);
  EXPECT_EQ(sim.machine().regs.read(8), 6u);
  // outcomes T,T,T,T,T,N from counter state 1
  EXPECT_EQ(sim.machine().mispeculated_branches,
            uint64_t(oracle::counter_mispredicts({true, true, true, true, true, false})));
}

TEST(PipelineTiming, MispredictCountsMatchCounterOracle) {
  // a data-driven branch takes the pattern from memory while the loop
  // back-edge takes T^7 N; each static branch has its own counter
  Simulator sim = run_program(
      "main:\n"
      "    la $8,pattern\n"
      "    ori $9,$0,0\n"
      "    ori $10,$0,8\n"
      "loop:\n"
      "    sll $11,$9,2\n"
      "    addu $11,$8,$11\n"
      "    lw $12,0($11)\n"
      "    beq $12,$0,skip\n"
      "    ori $13,$0,1\n"
      "skip:\n"
      "    addiu $9,$9,1\n"
      "    bne $9,$10,loop\n"
      "    halt\n"
      ".data\n"
      "pattern:\n"
      "    .word 1\n"
      "    .word 0\n"
      "    .word 0\n"
      "    .word 1\n"
      "    .word 1\n"
      "    .word 0\n"
      "    .word 1\n"
      "    .word 0\n");
  // beq taken when the word is zero
  std::vector<bool> beq_outcomes{false, true, true, false, false, true, false, true};
  std::vector<bool> bne_outcomes{true, true, true, true, true, true, true, false};
  uint64_t expected = oracle::counter_mispredicts(beq_outcomes) +
                      oracle::counter_mispredicts(bne_outcomes);
  EXPECT_EQ(sim.machine().mispeculated_branches, expected);
  EXPECT_EQ(sim.machine().branch_stats.executed, 16u);
}

TEST(Provenance, TagRules) {
  SimConfig cfg;
  Simulator sim = run_program(
      ".frame main\n"
      ".var buf, 8, 24\n"
      ".var ptr, 44, 4\n"
      ".var sfp, 48, 4\n"
      ".var sra, 52, 4\n"
      "main:\n"
      "    addiu $sp,$sp,-56\n"
      "    sw $ra,52($sp)\n"
      "    sw $fp,48($sp)\n"
      "    move $fp,$sp\n"
      "    addiu $8,$fp,8\n"     // (a) fp+imm lands in buf
      "    sw $8,44($fp)\n"
      "    lw $2,44($30)\n"      // (c) pointer reload via the paper's idiom
      "    addu $3,$0,$2\n"      // (b) single tagged operand propagates
      "    sll $5,$3,0\n"        // (b) shift keeps the tag
      "    ori $4,$0,7\n"        // (d) clears
      "    halt\n", cfg);
  ASSERT_EQ(sim.status(), TerminalStatus::Halted);
  EXPECT_TRUE(sim.monitor().events().empty());
  const uint32_t buf_base = cfg.stack_top - 56 + 8;
  auto buf_entry = sim.vrt().lookup(buf_base, Scope::AnyValid);
  ASSERT_TRUE(buf_entry.has_value());
  const auto& regs = sim.machine().regs;
  EXPECT_EQ(regs.read(8), buf_base);
  ASSERT_TRUE(regs.read_tag(8).has_value());
  EXPECT_EQ(*regs.read_tag(8), uint32_t(*buf_entry));
  ASSERT_TRUE(regs.read_tag(2).has_value());
  EXPECT_EQ(*regs.read_tag(2), uint32_t(*buf_entry));
  ASSERT_TRUE(regs.read_tag(3).has_value());
  EXPECT_EQ(*regs.read_tag(3), uint32_t(*buf_entry));
  ASSERT_TRUE(regs.read_tag(5).has_value());
  EXPECT_FALSE(regs.read_tag(4).has_value());
}

TEST(Provenance, BothOperandsTaggedKeepsLeft) {
  SimConfig cfg;
  Simulator sim = run_program(
      ".frame main\n"
      ".var a, 0, 8\n"
      ".var b, 8, 8\n"
      ".var sfp, 16, 4\n"
      ".var sra, 20, 4\n"
      "main:\n"
      "    addiu $sp,$sp,-24\n"
      "    sw $ra,20($sp)\n"
      "    sw $fp,16($sp)\n"
      "    move $fp,$sp\n"
      "    addiu $8,$fp,0\n"
      "    addiu $9,$fp,8\n"
      "    addu $10,$8,$9\n"
      "    halt\n", cfg);
  auto a_entry = sim.vrt().lookup(cfg.stack_top - 24 + 0, Scope::AnyValid);
  ASSERT_TRUE(a_entry);
  ASSERT_TRUE(sim.machine().regs.read_tag(10).has_value());
  EXPECT_EQ(*sim.machine().regs.read_tag(10), uint32_t(*a_entry));
}

TEST(Speculation, WrongPathRollsBackArchitecturalState) {
  SimConfig cfg;
  cfg.branch_resolve_latency = 8;
  cfg.detectors = false;
  Simulator sim = run_program(
      "main:\n"
      "    ori $8,$0,0\n"
      "    ori $9,$0,2\n"
      "loop:\n"
      "    addiu $8,$8,1\n"
      "    bne $8,$9,loop\n"
      "    ori $20,$0,99\n"       // wrong path once, correct path at exit
      "    sw $20,0x100($0)\n"
      "    halt\n", cfg);
  ASSERT_EQ(sim.status(), TerminalStatus::Halted);
  // wrong-path writes rolled back; the correct path executed exactly once
  EXPECT_EQ(sim.machine().regs.read(8), 2u);
  EXPECT_EQ(sim.machine().regs.read(20), 99u);
  EXPECT_EQ(sim.machine().mem.read_word(0x100), 99u);
  EXPECT_EQ(sim.machine().mispeculated_branches, 2u);
  // retired: 2 li + 2*(addiu,bne) + ori + sw + halt
  EXPECT_EQ(sim.machine().retired, 9u);
}

TEST(Speculation, SquashedInstructionsTouchOnlyCacheState) {
  // same program, detectors irrelevant: wrong-path store must not land
  SimConfig cfg;
  cfg.branch_resolve_latency = 8;
  Simulator sim = run_program(
      "main:\n"
      "    ori $8,$0,0\n"
      "    ori $9,$0,2\n"
      "loop:\n"
      "    addiu $8,$8,1\n"
      "    bne $8,$9,loop\n"
      "    sw $9,0x180($0)\n"    // first encountered on the wrong path
      "    ori $21,$0,1\n"
      "    halt\n", cfg);
  ASSERT_EQ(sim.status(), TerminalStatus::Halted);
  EXPECT_EQ(sim.machine().mem.read_word(0x180), 2u);  // exactly one committed store
  EXPECT_EQ(sim.machine().retired, 9u);
}

TEST(Speculation, ZeroResolveLatencySquashesFetchWindow) {
  SimConfig cfg;  // resolve latency 0
  Simulator sim = run_program(
      "main:\n"
      "    ori $8,$0,0\n"
      "    ori $9,$0,2\n"
      "loop:\n"
      "    addiu $8,$8,1\n"
      "    bne $8,$9,loop\n"
      "    sw $9,0x180($0)\n"
      "    halt\n", cfg);
  ASSERT_EQ(sim.status(), TerminalStatus::Halted);
  EXPECT_EQ(sim.machine().regs.read(8), 2u);
  EXPECT_EQ(sim.machine().mem.read_word(0x180), 2u);
  EXPECT_EQ(sim.machine().mispeculated_branches, 2u);
}

TEST(Pipeline, IllegalFetchIsTerminalError) {
  ProgramImage img;
  img.entry = kTextBase;
  img.text[kTextBase] = 0xFC000000;  // opcode 0x3F
  SimConfig cfg;
  Simulator sim(img, cfg);
  sim.run();
  EXPECT_EQ(sim.status(), TerminalStatus::Error);
}

TEST(Pipeline, MaxCyclesIsDistinctTerminalStatus) {
  SimConfig cfg;
  cfg.max_cycles = 50;
  Simulator sim = run_program(
      "main:\n"
      "loop:\n"
      "    j loop\n", cfg);
  EXPECT_EQ(sim.status(), TerminalStatus::MaxCyclesExceeded);
}

TEST(Pipeline, DeterministicCycleTraces) {
  auto trace_of = [](const char* src) {
    ProgramImage img = assemble(src);
    SimConfig cfg;
    Simulator sim(img, cfg);
    std::string trace;
    sim.set_trace_sink([&](const std::string& line) { trace += line + "\n"; });
    sim.run();
    return trace;
  };
  std::string a = trace_of(corpus::kMiniCrc32);
  std::string b = trace_of(corpus::kMiniCrc32);
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a.empty());
}

TEST(Pipeline, TraceGolden) {
  ProgramImage img = assemble(
      "main:\n"
      "    ori $1,$0,7\n"
      "    addu $2,$1,$1\n"
      "    halt\n");
  SimConfig cfg;
  Simulator sim(img, cfg);
  std::string trace;
  sim.set_trace_sink([&](const std::string& line) { trace += line + "\n"; });
  sim.run();
  EXPECT_EQ(trace,
            "C1 IF=0x400000 ID=- EX=- MEM=- WB=-\n"
            "C2 IF=0x400004 ID=0x400000 EX=- MEM=- WB=-\n"
            "C3 IF=0x400008 ID=0x400004 EX=0x400000 MEM=- WB=-\n"
            "C4 IF=- ID=0x400008 EX=0x400004 MEM=0x400000 WB=-\n"
            "C5 IF=- ID=- EX=0x400008 MEM=0x400004 WB=0x400000\n"
            "C6 IF=- ID=- EX=- MEM=0x400008 WB=0x400004\n"
            "C7 IF=- ID=- EX=- MEM=- WB=0x400008\n");
}
