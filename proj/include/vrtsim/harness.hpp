#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vrtsim/assembler.hpp"
#include "vrtsim/config.hpp"
#include "vrtsim/corpus.hpp"
#include "vrtsim/pipeline.hpp"
#include "vrtsim/report.hpp"

namespace vrtsim {

struct RunOptions {
  SimConfig config;
  std::function<void(const std::string&)> trace_sink;  // optional per-cycle trace
  bool want_vrt_dump = false;
};

struct RunResult {
  RunReport report;
  std::string vrt_dump;  // final table state when requested
};

inline RunResult run_source(const std::string& name, const std::string& source,
                            const RunOptions& opts = {}) {
  ProgramImage image = assemble(source);
  Simulator sim(image, opts.config);
  if (opts.trace_sink) sim.set_trace_sink(opts.trace_sink);
  sim.run();
  RunResult r;
  r.report = make_report(name, sim, opts.config);
  if (opts.want_vrt_dump) r.vrt_dump = sim.vrt().dump();
  return r;
}

struct CaseResult {
  std::string id;
  std::string category;
  std::string expected;
  bool detected = false;   // exactly the expected kind occurred
  bool clean_pass = false; // clean programs: no events at all
  size_t event_count = 0;
  std::vector<SecurityEvent> events;
};

struct SuiteReport {
  std::vector<CaseResult> attacks;
  std::vector<CaseResult> clean;
  int attacks_detected = 0;
  int clean_quiet = 0;
  bool passed = false;
};

// A case passes when exactly the expected event kind occurs (and, for CFI,
// the expected scenario); the clean half passes with zero events.
inline SuiteReport attack_suite(const SimConfig& base) {
  SuiteReport suite;
  for (const auto& atk : corpus::kAttacks) {
    SimConfig cfg = base;
    if (atk.config_overrides[0] != '\0')
      cfg = parse_config(atk.config_overrides, cfg);
    RunOptions opts;
    opts.config = cfg;
    RunResult rr = run_source(atk.id, atk.source, opts);
    CaseResult cr;
    cr.id = atk.id;
    cr.category = corpus::category_name(atk.category);
    cr.expected = kind_name(atk.expected_kind);
    cr.events = rr.report.events;
    cr.event_count = rr.report.events.size();
    bool all_expected = !rr.report.events.empty();
    for (const auto& e : rr.report.events) {
      if (e.kind != atk.expected_kind) all_expected = false;
      if (atk.expected_kind == EventKind::BackEdgeCfiViolation &&
          e.scenario != atk.expected_scenario)
        all_expected = false;
    }
    cr.detected = all_expected;
    if (cr.detected) suite.attacks_detected++;
    suite.attacks.push_back(std::move(cr));
  }
  for (const auto& bench : corpus::kBenchmarks) {
    RunOptions opts;
    opts.config = base;
    RunResult rr = run_source(bench.id, bench.source, opts);
    CaseResult cr;
    cr.id = bench.id;
    cr.category = "clean";
    cr.expected = "no events";
    cr.events = rr.report.events;
    cr.event_count = rr.report.events.size();
    cr.clean_pass = rr.report.events.empty() &&
                    rr.report.status == TerminalStatus::Halted;
    if (cr.clean_pass) suite.clean_quiet++;
    suite.clean.push_back(std::move(cr));
  }
  suite.passed = suite.attacks_detected == int(corpus::kAttackCount) &&
                 suite.clean_quiet == int(corpus::kBenchmarkCount);
  return suite;
}

struct OverheadResult {
  bool refused = false;
  std::string refusal_reason;
  uint64_t cycles_on = 0, cycles_off = 0;
  uint64_t retired_on = 0, retired_off = 0;
  bool equal = false;
};

// Runs the program with the detectors on and off; equal counts are the
// zero-overhead witness. Programs that raise events are refused, since the
// comparison is undefined once an intervention changes the run.
inline OverheadResult overhead_check(const std::string& name, const std::string& source,
                                     const SimConfig& base) {
  OverheadResult r;
  SimConfig on = base;
  on.detectors = true;
  RunOptions opts_on;
  opts_on.config = on;
  RunResult rr_on = run_source(name, source, opts_on);
  if (!rr_on.report.events.empty()) {
    r.refused = true;
    r.refusal_reason = "program raises security events; overhead comparison undefined";
    return r;
  }
  SimConfig off = base;
  off.detectors = false;
  RunOptions opts_off;
  opts_off.config = off;
  RunResult rr_off = run_source(name, source, opts_off);
  r.cycles_on = rr_on.report.cycles;
  r.cycles_off = rr_off.report.cycles;
  r.retired_on = rr_on.report.instruction_count;
  r.retired_off = rr_off.report.instruction_count;
  r.equal = r.cycles_on == r.cycles_off && r.retired_on == r.retired_off;
  return r;
}

}  // namespace vrtsim
