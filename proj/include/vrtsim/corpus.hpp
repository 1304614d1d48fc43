#pragma once

#include <cstddef>

#include "vrtsim/security.hpp"

namespace vrtsim::corpus {

// ---------------------------------------------------------------------------
// Clean micro-benchmarks. Every instrumented function declares the full
// byte range its code touches on the stack; array traffic goes through
// tagged pointers or .data (which sits outside the checked stack region).
// ---------------------------------------------------------------------------

inline constexpr const char* kMiniBasicmath = R"(
# mini-basicmath: subtraction GCD accumulation plus incremental integer sqrt
.text
.frame main
.var results, 8, 40
.var acc, 48, 4
.var i, 52, 4
.var saved_fp, 56, 4
.var saved_ra, 60, 4
.frame gcd
.var g_a, 0, 4
.var g_b, 4, 4
.var g_fp, 8, 4
.var g_ra, 12, 4
main:
    addiu $sp,$sp,-64
    sw $ra,60($sp)
    sw $fp,56($sp)
    move $fp,$sp
    sw $0,48($fp)
    li $t0,1
    sw $t0,52($fp)
    li $s0,7
bm_loop:
    lw $t0,52($fp)
    slt $t1,$t0,$s0
    beq $t1,$0,bm_done
    move $a0,$t0
    li $a1,6
    jal gcd
    lw $t2,48($fp)
    addu $t2,$t2,$v0
    sw $t2,48($fp)
    lw $t0,52($fp)
    addiu $t3,$t0,-1
    sll $t3,$t3,2
    addiu $t4,$fp,8
    addu $t4,$t4,$t3
    sw $v0,0($t4)
    lw $t0,52($fp)
    addiu $t0,$t0,1
    sw $t0,52($fp)
    j bm_loop
bm_done:
    lw $t0,48($fp)
    li $t1,0
    li $t2,0
bm_isq:
    sll $t3,$t1,1
    addiu $t3,$t3,1
    addu $t4,$t2,$t3
    slt $t5,$t0,$t4
    bne $t5,$0,bm_isqd
    move $t2,$t4
    addiu $t1,$t1,1
    j bm_isq
bm_isqd:
    sw $t1,48($fp)
    halt
gcd:
    addiu $sp,$sp,-16
    sw $ra,12($sp)
    sw $fp,8($sp)
    move $fp,$sp
    sw $a0,0($fp)
    sw $a1,4($fp)
gcd_loop:
    lw $t8,0($fp)
    lw $t9,4($fp)
    beq $t8,$t9,gcd_done
    slt $v0,$t9,$t8
    beq $v0,$0,gcd_else
    subu $t8,$t8,$t9
    sw $t8,0($fp)
    j gcd_loop
gcd_else:
    subu $t9,$t9,$t8
    sw $t9,4($fp)
    j gcd_loop
gcd_done:
    lw $v0,0($fp)
    lw $ra,12($fp)
    lw $fp,8($fp)
    addiu $sp,$sp,16
    jr $ra
)";

inline constexpr const char* kMiniBitcount = R"(
# mini-bitcount: Kernighan popcount over a word table
.text
.frame main
.var counts, 8, 32
.var total, 40, 4
.var i, 44, 4
.var saved_fp, 48, 4
.var saved_ra, 52, 4
.frame bitcount
.var bc_x, 0, 4
.var bc_fp, 4, 4
.var bc_ra, 8, 4
main:
    addiu $sp,$sp,-56
    sw $ra,52($sp)
    sw $fp,48($sp)
    move $fp,$sp
    sw $0,40($fp)
    sw $0,44($fp)
    la $s0,bc_data
    li $s1,8
bc_loop:
    lw $t0,44($fp)
    slt $t1,$t0,$s1
    beq $t1,$0,bc_done
    sll $t2,$t0,2
    addu $t3,$s0,$t2
    lw $a0,0($t3)
    jal bitcount
    lw $t0,44($fp)
    sll $t2,$t0,2
    addiu $t4,$fp,8
    addu $t4,$t4,$t2
    sw $v0,0($t4)
    lw $t5,40($fp)
    addu $t5,$t5,$v0
    sw $t5,40($fp)
    lw $t0,44($fp)
    addiu $t0,$t0,1
    sw $t0,44($fp)
    j bc_loop
bc_done:
    halt
bitcount:
    addiu $sp,$sp,-12
    sw $ra,8($sp)
    sw $fp,4($sp)
    move $fp,$sp
    sw $a0,0($fp)
    li $v0,0
bcnt_loop:
    lw $t8,0($fp)
    beq $t8,$0,bcnt_done
    addiu $t9,$t8,-1
    and $t8,$t8,$t9
    sw $t8,0($fp)
    addiu $v0,$v0,1
    j bcnt_loop
bcnt_done:
    lw $ra,8($fp)
    lw $fp,4($fp)
    addiu $sp,$sp,12
    jr $ra
.data
bc_data:
    .word 0x0F0F
    .word 0xFF
    .word 0x1248
    .word 0xA5A5
    .word 0x8001
    .word 0x7E
    .word 0xCAFE
    .word 0x1111
)";

inline constexpr const char* kMiniQsort = R"(
# mini-qsort: recursive quicksort, data array with stack-resident frames
.text
.frame main
.var saved_fp, 0, 4
.var saved_ra, 4, 4
.frame qsort
.var q_lo, 0, 4
.var q_hi, 4, 4
.var q_i, 8, 4
.var q_j, 12, 4
.var q_fp, 16, 4
.var q_ra, 20, 4
main:
    addiu $sp,$sp,-8
    sw $ra,4($sp)
    sw $fp,0($sp)
    move $fp,$sp
    li $a0,0
    li $a1,7
    jal qsort
    halt
qsort:
    addiu $sp,$sp,-24
    sw $ra,20($sp)
    sw $fp,16($sp)
    move $fp,$sp
    sw $a0,0($fp)
    sw $a1,4($fp)
    slt $t0,$a0,$a1
    beq $t0,$0,qs_ret
    la $s0,qs_arr
    lw $t1,4($fp)
    sll $t2,$t1,2
    addu $t3,$s0,$t2
    lw $s1,0($t3)
    lw $t4,0($fp)
    sw $t4,8($fp)
    sw $t4,12($fp)
qs_part:
    lw $t5,12($fp)
    lw $t6,4($fp)
    slt $t7,$t5,$t6
    beq $t7,$0,qs_partd
    sll $t8,$t5,2
    addu $t8,$s0,$t8
    lw $t9,0($t8)
    slt $t7,$t9,$s1
    beq $t7,$0,qs_next
    lw $t0,8($fp)
    sll $t1,$t0,2
    addu $t1,$s0,$t1
    lw $t2,0($t1)
    sw $t9,0($t1)
    sw $t2,0($t8)
    addiu $t0,$t0,1
    sw $t0,8($fp)
qs_next:
    lw $t5,12($fp)
    addiu $t5,$t5,1
    sw $t5,12($fp)
    j qs_part
qs_partd:
    lw $t0,8($fp)
    sll $t1,$t0,2
    addu $t1,$s0,$t1
    lw $t2,0($t1)
    lw $t3,4($fp)
    sll $t4,$t3,2
    addu $t4,$s0,$t4
    lw $t5,0($t4)
    sw $t5,0($t1)
    sw $t2,0($t4)
    lw $a0,0($fp)
    lw $t0,8($fp)
    addiu $a1,$t0,-1
    jal qsort
    lw $t0,8($fp)
    addiu $a0,$t0,1
    lw $a1,4($fp)
    jal qsort
qs_ret:
    lw $ra,20($fp)
    lw $fp,16($fp)
    addiu $sp,$sp,24
    jr $ra
.data
qs_arr:
    .word 7
    .word 3
    .word 5
    .word 1
    .word 6
    .word 2
    .word 4
    .word 0
)";

inline constexpr const char* kMiniCrc32 = R"(
# mini-crc32: bitwise reflected CRC-32; xor synthesized as (a|b)-(a&b)
.text
.frame main
.var crc_out, 0, 4
.var k, 4, 4
.var saved_fp, 8, 4
.var saved_ra, 12, 4
main:
    addiu $sp,$sp,-16
    sw $ra,12($sp)
    sw $fp,8($sp)
    move $fp,$sp
    la $s0,crc_msg
    li $s1,9
    li $s3,0xEDB88320
    li $s2,-1
    sw $0,4($fp)
crc_k:
    lw $t0,4($fp)
    slt $t1,$t0,$s1
    beq $t1,$0,crc_done
    addu $t2,$s0,$t0
    lb $t3,0($t2)
    li $t4,255
    and $t3,$t3,$t4
    or $t5,$s2,$t3
    and $t6,$s2,$t3
    subu $s2,$t5,$t6
    li $t1,0
crc_b:
    li $t4,1
    and $t4,$s2,$t4
    srl $t5,$s2,1
    beq $t4,$0,crc_z
    or $t6,$t5,$s3
    and $t7,$t5,$s3
    subu $s2,$t6,$t7
    j crc_s
crc_z:
    move $s2,$t5
crc_s:
    addiu $t1,$t1,1
    li $t4,8
    bne $t1,$t4,crc_b
    lw $t0,4($fp)
    addiu $t0,$t0,1
    sw $t0,4($fp)
    j crc_k
crc_done:
    li $t4,-1
    or $t5,$s2,$t4
    and $t6,$s2,$t4
    subu $s2,$t5,$t6
    sw $s2,0($fp)
    halt
.data
crc_msg:
    .byte 86
    .byte 82
    .byte 84
    .byte 83
    .byte 73
    .byte 77
    .byte 45
    .byte 79
    .byte 75
)";

inline constexpr const char* kMiniDijkstra = R"(
# mini-dijkstra: 5-node shortest paths, adjacency in .data, dist on stack
.text
.frame main
.var dist, 0, 20
.var visited, 20, 20
.var saved_fp, 40, 4
.var saved_ra, 44, 4
main:
    addiu $sp,$sp,-48
    sw $ra,44($sp)
    sw $fp,40($sp)
    move $fp,$sp
    la $s0,dj_adj
    li $s1,5
    li $s2,9999
    li $t0,0
dj_init:
    slt $t1,$t0,$s1
    beq $t1,$0,dj_initd
    sll $t2,$t0,2
    addiu $t3,$fp,0
    addu $t3,$t3,$t2
    sw $s2,0($t3)
    addiu $t4,$fp,20
    addu $t4,$t4,$t2
    sw $0,0($t4)
    addiu $t0,$t0,1
    j dj_init
dj_initd:
    sw $0,0($fp)
    li $s3,0
dj_outer:
    slt $t1,$s3,$s1
    beq $t1,$0,dj_done
    li $s4,-1
    li $s5,10000
    li $t0,0
dj_find:
    slt $t1,$t0,$s1
    beq $t1,$0,dj_findd
    sll $t2,$t0,2
    addiu $t3,$fp,20
    addu $t3,$t3,$t2
    lw $t4,0($t3)
    bne $t4,$0,dj_fnext
    addiu $t5,$fp,0
    addu $t5,$t5,$t2
    lw $t6,0($t5)
    slt $t7,$t6,$s5
    beq $t7,$0,dj_fnext
    move $s5,$t6
    move $s4,$t0
dj_fnext:
    addiu $t0,$t0,1
    j dj_find
dj_findd:
    li $t0,-1
    beq $s4,$t0,dj_done
    sll $t2,$s4,2
    addiu $t3,$fp,20
    addu $t3,$t3,$t2
    li $t4,1
    sw $t4,0($t3)
    sll $t5,$s4,2
    addu $t5,$t5,$s4
    sll $t5,$t5,2
    addu $s6,$s0,$t5
    li $t0,0
dj_relax:
    slt $t1,$t0,$s1
    beq $t1,$0,dj_relaxd
    sll $t2,$t0,2
    addu $t3,$s6,$t2
    lw $t4,0($t3)
    beq $t4,$0,dj_rnext
    addiu $t5,$fp,20
    addu $t5,$t5,$t2
    lw $t6,0($t5)
    bne $t6,$0,dj_rnext
    sll $t7,$s4,2
    addiu $t8,$fp,0
    addu $t8,$t8,$t7
    lw $t9,0($t8)
    addu $t9,$t9,$t4
    addiu $t5,$fp,0
    addu $t5,$t5,$t2
    lw $t6,0($t5)
    slt $t7,$t9,$t6
    beq $t7,$0,dj_rnext
    sw $t9,0($t5)
dj_rnext:
    addiu $t0,$t0,1
    j dj_relax
dj_relaxd:
    addiu $s3,$s3,1
    j dj_outer
dj_done:
    halt
.data
dj_adj:
    .word 0
    .word 4
    .word 0
    .word 0
    .word 8
    .word 4
    .word 0
    .word 3
    .word 0
    .word 0
    .word 0
    .word 3
    .word 0
    .word 2
    .word 0
    .word 0
    .word 0
    .word 2
    .word 0
    .word 7
    .word 8
    .word 0
    .word 0
    .word 7
    .word 0
)";

inline constexpr const char* kMiniPatricia = R"(
# mini-patricia: bit-test trie lookups; mask-per-node avoids variable shifts
.text
.frame main
.var hits, 0, 4
.var results, 4, 6
.var i, 12, 4
.var saved_fp, 16, 4
.var saved_ra, 20, 4
.frame patlookup
.var p_key, 0, 4
.var p_fp, 4, 4
.var p_ra, 8, 4
main:
    addiu $sp,$sp,-24
    sw $ra,20($sp)
    sw $fp,16($sp)
    move $fp,$sp
    sw $0,0($fp)
    sw $0,12($fp)
    la $s0,pat_queries
    li $s1,6
pat_loop:
    lw $t0,12($fp)
    slt $t1,$t0,$s1
    beq $t1,$0,pat_done
    sll $t2,$t0,2
    addu $t3,$s0,$t2
    lw $a0,0($t3)
    jal patlookup
    lw $t4,0($fp)
    addu $t4,$t4,$v0
    sw $t4,0($fp)
    lw $t0,12($fp)
    addiu $t5,$fp,4
    addu $t5,$t5,$t0
    sb $v0,0($t5)
    lw $t0,12($fp)
    addiu $t0,$t0,1
    sw $t0,12($fp)
    j pat_loop
pat_done:
    halt
patlookup:
    addiu $sp,$sp,-12
    sw $ra,8($sp)
    sw $fp,4($sp)
    move $fp,$sp
    sw $a0,0($fp)
    la $t8,pat_nodes
    li $t9,0
pl_walk:
    sll $t0,$t9,4
    addu $t0,$t8,$t0
    lw $t1,0($t0)
    beq $t1,$0,pl_leaf
    lw $t3,0($fp)
    and $t4,$t3,$t1
    beq $t4,$0,pl_left
    lw $t9,8($t0)
    j pl_walk
pl_left:
    lw $t9,4($t0)
    j pl_walk
pl_leaf:
    lw $t5,12($t0)
    lw $t3,0($fp)
    li $v0,0
    bne $t3,$t5,pl_out
    li $v0,1
pl_out:
    lw $ra,8($fp)
    lw $fp,4($fp)
    addiu $sp,$sp,12
    jr $ra
.data
pat_nodes:
    .word 8
    .word 1
    .word 2
    .word 0
    .word 4
    .word 3
    .word 4
    .word 0
    .word 4
    .word 5
    .word 6
    .word 0
    .word 0
    .word 0
    .word 0
    .word 2
    .word 0
    .word 0
    .word 0
    .word 5
    .word 0
    .word 0
    .word 0
    .word 9
    .word 0
    .word 0
    .word 0
    .word 12
pat_queries:
    .word 2
    .word 5
    .word 9
    .word 12
    .word 7
    .word 15
)";

// ---------------------------------------------------------------------------
// Attack corpus
// ---------------------------------------------------------------------------

// Constant out-of-bounds index: the store lands 24 bytes past a 24-byte
// array, inside the frame but in no record.
inline constexpr const char* kAttackConstIndex = R"(
.text
.frame main
.var init, 0, 4
.var buf, 8, 24
.var saved_fp, 32, 4
.var saved_ra, 36, 4
main:
    addiu $sp,$sp,-64
    sw $ra,36($sp)
    sw $fp,32($sp)
    move $fp,$sp
    sw $0,0($fp)
    addiu $t0,$fp,8
    li $t1,0
    li $t2,24
ci_fill:
    slt $t3,$t1,$t2
    beq $t3,$0,ci_done
    addu $t4,$t0,$t1
    sb $t1,0($t4)
    addiu $t1,$t1,1
    j ci_fill
ci_done:
    li $t5,88
    sb $t5,56($fp)
    sw $t5,0($fp)
    halt
)";

// Pointer walk past a 6-byte buffer: the computed address leaves the
// buffer's record and crosses into the neighbouring pointer slot.
inline constexpr const char* kAttackLoopOverflow = R"(
.text
.frame main
.var idx, 0, 4
.var xbuf, 4, 6
.var pbase, 12, 4
.var saved_fp, 16, 4
.var saved_ra, 20, 4
main:
    addiu $sp,$sp,-24
    sw $ra,20($sp)
    sw $fp,16($sp)
    move $fp,$sp
    sw $0,0($fp)
    addiu $t0,$fp,4
    sw $t0,12($fp)
    li $s0,10
lo_loop:
    lw $t1,0($fp)
    slt $t2,$t1,$s0
    beq $t2,$0,lo_done
    lw $t3,12($fp)
    lw $t1,0($fp)
    addu $t3,$t3,$t1
    sb $0,0($t3)
    lw $t1,0($fp)
    addiu $t1,$t1,1
    sw $t1,0($fp)
    j lo_loop
lo_done:
    halt
)";

// Return hijack to a function entry: the attacker rewrites its saved return
// address to main's start; the post-return prologue allocation betrays it.
inline constexpr const char* kAttackRetToStart = R"(
.text
.frame main
.var v_data, 0, 8
.var saved_fp, 8, 4
.var saved_ra, 12, 4
main:
    addiu $sp,$sp,-16
    sw $ra,12($sp)
    sw $fp,8($sp)
    move $fp,$sp
    li $t0,7
    sw $t0,0($fp)
    jal attacker
    sw $0,4($fp)
    halt
attacker:
    addiu $sp,$sp,-8
    sw $ra,4($sp)
    la $t8,main
    sw $t8,4($sp)
    lw $ra,4($sp)
    addiu $sp,$sp,8
    jr $ra
)";

// Return hijack to an arbitrary location: the first post-return load
// matches no record of the expected caller.
inline constexpr const char* kAttackRetToArbitrary = R"(
.text
.frame main
.var v_data, 0, 8
.var saved_fp, 8, 4
.var saved_ra, 12, 4
main:
    addiu $sp,$sp,-16
    sw $ra,12($sp)
    sw $fp,8($sp)
    move $fp,$sp
    li $t0,7
    sw $t0,0($fp)
    jal attacker
    sw $0,4($fp)
    halt
attacker:
    addiu $sp,$sp,-8
    sw $ra,4($sp)
    la $t8,gadget
    sw $t8,4($sp)
    lw $ra,4($sp)
    addiu $sp,$sp,8
    jr $ra
gadget:
    lui $t9,0x12
    ori $t9,$t9,0x3456
    lb $t0,0($t9)
    halt
)";

// Desk-scale Spectre shape: a bounds-check branch is trained not-taken;
// its final mispredict runs the two-load gadget on the wrong path, tagging
// the secret slot and table2 dirty. The uninstrumented probe then touches
// the dirty line. Needs branch.resolve_latency=8 so the second load
// completes before the squash.
inline constexpr const char* kAttackSpeculativeProbe = R"(
.text
.frame main
.var table2, 0, 256
.var table1, 256, 8
.var secret, 264, 1
.var saved_fp, 268, 4
.var saved_ra, 272, 4
main:
    addiu $sp,$sp,-280
    sw $ra,272($sp)
    sw $fp,268($sp)
    move $fp,$sp
    li $t0,5
    sb $t0,264($fp)
    addiu $s0,$fp,256
    addiu $s1,$fp,0
    li $s2,8
    li $s3,9
    li $t0,0
sp_loop:
    slt $t1,$t0,$s2
    beq $t1,$0,sp_skip
    addu $t2,$s0,$t0
    lb $t3,0($t2)
    sll $t4,$t3,5
    addu $t5,$s1,$t4
    lb $t6,0($t5)
sp_skip:
    addiu $t0,$t0,1
    bne $t0,$s3,sp_loop
    nop
    nop
    nop
    nop
    nop
    nop
    nop
    nop
    nop
    nop
    addiu $a0,$fp,24
    jal probe
    lw $ra,272($fp)
    lw $fp,268($fp)
    addiu $sp,$sp,280
    halt
probe:
    lb $v0,0($a0)
    jr $ra
)";

// Two-frame demo program: the caller records two variables, the callee six
// (including two far blocks), then halts with both frames live so the
// table dump shows the caller rows de-associated.
inline constexpr const char* kTableDemo = R"(
.text
.frame main
.var caller_buf, -368, 24
.var caller_ctx, -384, 16
.frame active
.var a_buf, -96, 24
.var a_x, -132, 4
.var a_y, -136, 4
.var a_z, -140, 4
.var h_blk, -4194448, 24
.var h_arr, -4194712, 256
main:
    addiu $sp,$sp,-16
    jal active
    halt
active:
    addiu $sp,$sp,-32
    halt
)";

struct BenchProgram {
  const char* id;
  const char* source;
};

inline constexpr BenchProgram kBenchmarks[] = {
    {"mini-basicmath", kMiniBasicmath},
    {"mini-bitcount", kMiniBitcount},
    {"mini-qsort", kMiniQsort},
    {"mini-crc32", kMiniCrc32},
    {"mini-dijkstra", kMiniDijkstra},
    {"mini-patricia", kMiniPatricia},
};
inline constexpr size_t kBenchmarkCount = sizeof(kBenchmarks) / sizeof(kBenchmarks[0]);

enum class AttackCategory {
  ConstIndexOverflow,
  LoopOverflow,
  RetToFunctionStart,
  RetToArbitrary,
  SpeculativeProbe,
};

inline const char* category_name(AttackCategory c) {
  switch (c) {
    case AttackCategory::ConstIndexOverflow: return "ConstIndexOverflow";
    case AttackCategory::LoopOverflow:       return "LoopOverflow";
    case AttackCategory::RetToFunctionStart: return "RetToFunctionStart";
    case AttackCategory::RetToArbitrary:     return "RetToArbitrary";
    case AttackCategory::SpeculativeProbe:   return "SpeculativeProbe";
  }
  return "?";
}

struct AttackCase {
  const char* id;
  AttackCategory category;
  const char* source;
  EventKind expected_kind;
  int expected_scenario;          // BackEdgeCfiViolation only
  const char* config_overrides;   // flat key=value lines, may be empty
};

inline constexpr AttackCase kAttacks[] = {
    {"const-index-overflow", AttackCategory::ConstIndexOverflow, kAttackConstIndex,
     EventKind::SpatialViolation, 0, ""},
    {"loop-overflow", AttackCategory::LoopOverflow, kAttackLoopOverflow,
     EventKind::SpatialViolation, 0, ""},
    {"ret-to-function-start", AttackCategory::RetToFunctionStart, kAttackRetToStart,
     EventKind::BackEdgeCfiViolation, 1, ""},
    {"ret-to-arbitrary", AttackCategory::RetToArbitrary, kAttackRetToArbitrary,
     EventKind::BackEdgeCfiViolation, 2, ""},
    {"speculative-probe", AttackCategory::SpeculativeProbe, kAttackSpeculativeProbe,
     EventKind::SpeculativeProbe, 0, "branch.resolve_latency = 8\n"},
};
inline constexpr size_t kAttackCount = sizeof(kAttacks) / sizeof(kAttacks[0]);

inline const char* find_builtin(const std::string& name) {
  for (const auto& b : kBenchmarks)
    if (name == b.id) return b.source;
  for (const auto& a : kAttacks)
    if (name == a.id) return a.source;
  if (name == "table-demo") return kTableDemo;
  return nullptr;
}

}  // namespace vrtsim::corpus
