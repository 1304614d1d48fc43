#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "vrtsim/config.hpp"
#include "vrtsim/memory.hpp"
#include "vrtsim/pipeline.hpp"
#include "vrtsim/security.hpp"
#include "vrtsim/vrt.hpp"

namespace vrtsim {

inline std::string hex32(uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "0x%X", v);
  return buf;
}

struct RunReport {
  std::string program;
  TerminalStatus status = TerminalStatus::Running;
  std::string error;
  uint64_t cycles = 0;
  uint64_t instruction_count = 0;
  uint32_t variable_count = 0;   // distinct declared slots activated
  uint32_t vrt_high_water = 0;   // peak simultaneous live entries
  uint64_t mispeculated_branches = 0;
  uint64_t branches_executed = 0;
  uint64_t branches_mispredicted = 0;
  bool attack_detected = false;
  std::vector<SecurityEvent> events;
  uint64_t vrt_memory_bits = 0;
  std::string vrt_entry_width_breakdown;
  CacheStats cache_stats;
  uint64_t mem_touched_bytes = 0;
  SimConfig config;
};

inline RunReport make_report(const std::string& program, const Simulator& sim,
                             const SimConfig& cfg) {
  RunReport r;
  r.program = program;
  r.status = sim.status();
  r.error = sim.error();
  r.cycles = sim.machine().cycle;
  r.instruction_count = sim.machine().retired;
  r.variable_count = uint32_t(sim.machine().activated_slots.size());
  r.vrt_high_water = sim.vrt().high_water();
  r.mispeculated_branches = sim.machine().mispeculated_branches;
  r.branches_executed = sim.machine().branch_stats.executed;
  r.branches_mispredicted = sim.machine().branch_stats.mispredicted;
  r.attack_detected = sim.monitor().attack_detected();
  r.events = sim.monitor().events();
  r.vrt_memory_bits = memory_bits(cfg.vrt_capacity, cfg.vrt_entry_width_bits);
  r.vrt_entry_width_breakdown = entry_width_breakdown(cfg.vrt_entry_width_bits);
  r.cache_stats = sim.cache().stats();
  r.mem_touched_bytes = sim.machine().mem.touched_bytes();
  r.config = cfg;
  return r;
}

inline nlohmann::ordered_json event_to_json(const SecurityEvent& e) {
  nlohmann::ordered_json j;
  j["kind"] = kind_name(e.kind);
  if (e.kind == EventKind::BackEdgeCfiViolation) j["scenario"] = e.scenario;
  j["pc"] = hex32(e.pc);
  j["addr"] = e.addr ? nlohmann::ordered_json(hex32(*e.addr)) : nlohmann::ordered_json(nullptr);
  j["cycle"] = e.cycle;
  j["entry"] = e.entry ? nlohmann::ordered_json(*e.entry) : nlohmann::ordered_json(nullptr);
  j["detail"] = e.detail;
  return j;
}

inline nlohmann::ordered_json report_to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["program"] = r.program;
  j["terminal_status"] = status_name(r.status);
  if (r.status == TerminalStatus::Error) j["error"] = r.error;
  j["cycles"] = r.cycles;
  j["instruction_count"] = r.instruction_count;
  j["variable_count"] = r.variable_count;
  j["vrt_high_water"] = r.vrt_high_water;
  j["mispeculative_branches"] = r.mispeculated_branches;
  nlohmann::ordered_json bs;
  bs["executed"] = r.branches_executed;
  bs["mispredicted"] = r.branches_mispredicted;
  bs["accuracy"] = r.branches_executed == 0
      ? 1.0
      : double(r.branches_executed - r.branches_mispredicted) / double(r.branches_executed);
  j["branch_stats"] = bs;
  j["attack_detected"] = r.attack_detected;
  nlohmann::ordered_json evs = nlohmann::ordered_json::array();
  for (const auto& e : r.events) evs.push_back(event_to_json(e));
  j["events"] = evs;
  j["vrt_memory_bits"] = r.vrt_memory_bits;
  j["vrt_memory_units"] = "bits";
  j["vrt_entry_width_breakdown"] = r.vrt_entry_width_breakdown;
  nlohmann::ordered_json cs;
  cs["accesses"] = r.cache_stats.accesses;
  cs["hits"] = r.cache_stats.hits;
  cs["misses"] = r.cache_stats.misses;
  cs["evictions"] = r.cache_stats.evictions;
  j["cache_stats"] = cs;
  j["mem_touched_bytes"] = r.mem_touched_bytes;
  nlohmann::ordered_json ce;
  for (const auto& [k, v] : config_items(r.config)) ce[k] = v;
  j["config_echo"] = ce;
  return j;
}

inline std::string report_to_json_text(const RunReport& r) {
  return report_to_json(r).dump(2) + "\n";
}

// One field per row; events go to a companion file.
inline std::string report_to_csv(const RunReport& r) {
  std::string out = "field,value\n";
  auto row = [&](const std::string& k, const std::string& v) {
    out += k + "," + v + "\n";
  };
  row("program", r.program);
  row("terminal_status", status_name(r.status));
  row("cycles", std::to_string(r.cycles));
  row("instruction_count", std::to_string(r.instruction_count));
  row("variable_count", std::to_string(r.variable_count));
  row("vrt_high_water", std::to_string(r.vrt_high_water));
  row("mispeculative_branches", std::to_string(r.mispeculated_branches));
  row("branches_executed", std::to_string(r.branches_executed));
  row("branches_mispredicted", std::to_string(r.branches_mispredicted));
  row("attack_detected", r.attack_detected ? "true" : "false");
  row("event_count", std::to_string(r.events.size()));
  row("vrt_memory_bits", std::to_string(r.vrt_memory_bits));
  row("vrt_memory_units", "bits");
  row("vrt_entry_width_breakdown", r.vrt_entry_width_breakdown);
  row("cache_accesses", std::to_string(r.cache_stats.accesses));
  row("cache_hits", std::to_string(r.cache_stats.hits));
  row("cache_misses", std::to_string(r.cache_stats.misses));
  row("cache_evictions", std::to_string(r.cache_stats.evictions));
  row("mem_touched_bytes", std::to_string(r.mem_touched_bytes));
  for (const auto& [k, v] : config_items(r.config)) row("config." + k, v);
  return out;
}

inline std::string events_to_csv(const std::vector<SecurityEvent>& events) {
  std::string out = "kind,scenario,pc,addr,cycle,entry,detail\n";
  for (const auto& e : events) {
    out += std::string(kind_name(e.kind)) + ",";
    out += (e.kind == EventKind::BackEdgeCfiViolation ? std::to_string(e.scenario) : "") + ",";
    out += hex32(e.pc) + ",";
    out += (e.addr ? hex32(*e.addr) : "") + ",";
    out += std::to_string(e.cycle) + ",";
    out += (e.entry ? std::to_string(*e.entry) : "") + ",";
    out += "\"" + e.detail + "\"\n";
  }
  return out;
}

}  // namespace vrtsim
