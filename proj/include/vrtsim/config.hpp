#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vrtsim/security.hpp"

namespace vrtsim {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SimConfig {
  // VRT
  uint32_t vrt_capacity = 512;
  uint32_t vrt_entry_width_bits = 49;
  uint64_t vrt_sweep_interval = 0;  // 0 disables the periodic dirty sweep
  bool vrt_raw_mode = false;        // record on first fp-relative access instead of frame layouts

  // cache
  uint32_t cache_size = 2048;
  uint32_t cache_line_size = 32;
  uint32_t cache_hit_latency = 1;
  uint32_t cache_miss_latency = 10;

  // branch handling
  uint32_t branch_resolve_latency = 0;  // extra cycles after EX, 0..8

  // machine
  uint32_t mem_capacity = 65536;
  uint32_t stack_top = 0x7FFFF0;
  uint32_t stack_region_size = 65536;

  // security policy
  Policy policy;
  uint32_t stall_penalty = 20;
  bool detectors = true;

  uint64_t max_cycles = 1000000;
};

namespace detail {

inline uint64_t parse_uint(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    uint64_t n = std::stoull(v, &pos, 0);
    if (pos != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for " + key + ": " + v);
  }
}

inline bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw ConfigError("bad boolean value for " + key + ": " + v);
}

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

}  // namespace detail

inline void apply_config_line(SimConfig& cfg, const std::string& key,
                              const std::string& value) {
  using detail::parse_bool;
  using detail::parse_uint;
  if (key == "vrt.capacity") {
    cfg.vrt_capacity = uint32_t(parse_uint(value, key));
    if (cfg.vrt_capacity == 0) throw ConfigError("vrt.capacity must be >= 1");
  } else if (key == "vrt.entry_width_bits") {
    cfg.vrt_entry_width_bits = uint32_t(parse_uint(value, key));
  } else if (key == "vrt.sweep_interval") {
    cfg.vrt_sweep_interval = parse_uint(value, key);
  } else if (key == "vrt.raw_mode") {
    cfg.vrt_raw_mode = parse_bool(value, key);
  } else if (key == "cache.size") {
    cfg.cache_size = uint32_t(parse_uint(value, key));
  } else if (key == "cache.line_size") {
    cfg.cache_line_size = uint32_t(parse_uint(value, key));
  } else if (key == "cache.hit_latency") {
    cfg.cache_hit_latency = uint32_t(parse_uint(value, key));
  } else if (key == "cache.miss_latency") {
    cfg.cache_miss_latency = uint32_t(parse_uint(value, key));
  } else if (key == "branch.resolve_latency") {
    uint64_t n = parse_uint(value, key);
    if (n > 8) throw ConfigError("branch.resolve_latency must be 0..8");
    cfg.branch_resolve_latency = uint32_t(n);
  } else if (key == "mem.capacity") {
    cfg.mem_capacity = uint32_t(parse_uint(value, key));
  } else if (key == "machine.stack_top") {
    cfg.stack_top = uint32_t(parse_uint(value, key));
  } else if (key == "machine.stack_region_size") {
    cfg.stack_region_size = uint32_t(parse_uint(value, key));
  } else if (key == "policy.stall_penalty") {
    cfg.stall_penalty = uint32_t(parse_uint(value, key));
  } else if (key == "policy.SpatialViolation") {
    cfg.policy.set(EventKind::SpatialViolation, parse_action(value));
  } else if (key == "policy.BackEdgeCfiViolation") {
    cfg.policy.set(EventKind::BackEdgeCfiViolation, parse_action(value));
  } else if (key == "policy.SpeculativeProbe") {
    cfg.policy.set(EventKind::SpeculativeProbe, parse_action(value));
  } else if (key == "policy.VrtCapacityExceeded") {
    cfg.policy.set(EventKind::VrtCapacityExceeded, parse_action(value));
  } else if (key == "policy.ReturnUnderflow") {
    cfg.policy.set(EventKind::ReturnUnderflow, parse_action(value));
  } else if (key == "detectors") {
    cfg.detectors = parse_bool(value, key);
  } else if (key == "max_cycles") {
    cfg.max_cycles = parse_uint(value, key);
  } else {
    throw ConfigError("unknown config key: " + key);
  }
}

// Flat `key = value` text, '#' comments.
inline SimConfig parse_config(const std::string& text, SimConfig base = {}) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
    apply_config_line(base, key, value);
  }
  return base;
}

// Resolved configuration as ordered key/value pairs for report echoing.
inline std::vector<std::pair<std::string, std::string>> config_items(const SimConfig& c) {
  auto b = [](bool v) { return std::string(v ? "on" : "off"); };
  std::vector<std::pair<std::string, std::string>> items;
  items.emplace_back("vrt.capacity", std::to_string(c.vrt_capacity));
  items.emplace_back("vrt.entry_width_bits", std::to_string(c.vrt_entry_width_bits));
  items.emplace_back("vrt.sweep_interval", std::to_string(c.vrt_sweep_interval));
  items.emplace_back("vrt.raw_mode", b(c.vrt_raw_mode));
  items.emplace_back("cache.size", std::to_string(c.cache_size));
  items.emplace_back("cache.line_size", std::to_string(c.cache_line_size));
  items.emplace_back("cache.hit_latency", std::to_string(c.cache_hit_latency));
  items.emplace_back("cache.miss_latency", std::to_string(c.cache_miss_latency));
  items.emplace_back("branch.resolve_latency", std::to_string(c.branch_resolve_latency));
  items.emplace_back("mem.capacity", std::to_string(c.mem_capacity));
  items.emplace_back("machine.stack_top", std::to_string(c.stack_top));
  items.emplace_back("machine.stack_region_size", std::to_string(c.stack_region_size));
  items.emplace_back("policy.SpatialViolation", action_name(c.policy.action_for(EventKind::SpatialViolation)));
  items.emplace_back("policy.BackEdgeCfiViolation", action_name(c.policy.action_for(EventKind::BackEdgeCfiViolation)));
  items.emplace_back("policy.SpeculativeProbe", action_name(c.policy.action_for(EventKind::SpeculativeProbe)));
  items.emplace_back("policy.VrtCapacityExceeded", action_name(c.policy.action_for(EventKind::VrtCapacityExceeded)));
  items.emplace_back("policy.ReturnUnderflow", action_name(c.policy.action_for(EventKind::ReturnUnderflow)));
  items.emplace_back("policy.stall_penalty", std::to_string(c.stall_penalty));
  items.emplace_back("detectors", b(c.detectors));
  items.emplace_back("max_cycles", std::to_string(c.max_cycles));
  return items;
}

// Declared bit layout of one VRT entry for the configured width.
inline std::string entry_width_breakdown(uint32_t width_bits) {
  if (width_bits == 41) return "valid:1,base:32,bound:8";
  if (width_bits == 49) return "valid:1,base:32,bound:8,dirty:1,frame_tag:7";
  return "unspecified:" + std::to_string(width_bits);
}

}  // namespace vrtsim
