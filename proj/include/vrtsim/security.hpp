#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vrtsim/vrt.hpp"

namespace vrtsim {

enum class EventKind {
  SpatialViolation,
  BackEdgeCfiViolation,
  SpeculativeProbe,
  VrtCapacityExceeded,
  ReturnUnderflow,
};

inline constexpr size_t kEventKindCount = 5;

inline const char* kind_name(EventKind k) {
  switch (k) {
    case EventKind::SpatialViolation:     return "SpatialViolation";
    case EventKind::BackEdgeCfiViolation: return "BackEdgeCfiViolation";
    case EventKind::SpeculativeProbe:     return "SpeculativeProbe";
    case EventKind::VrtCapacityExceeded:  return "VrtCapacityExceeded";
    case EventKind::ReturnUnderflow:      return "ReturnUnderflow";
  }
  return "?";
}

inline bool is_attack_kind(EventKind k) {
  return k == EventKind::SpatialViolation || k == EventKind::BackEdgeCfiViolation ||
         k == EventKind::SpeculativeProbe;
}

struct SecurityEvent {
  EventKind kind;
  int scenario = 0;  // BackEdgeCfiViolation only: 1 or 2
  uint32_t pc = 0;
  std::optional<uint32_t> addr;
  uint64_t cycle = 0;
  std::optional<uint32_t> entry;
  std::string detail;
};

enum class PolicyAction { Report, Stall, Halt };

inline const char* action_name(PolicyAction a) {
  switch (a) {
    case PolicyAction::Report: return "report";
    case PolicyAction::Stall:  return "stall";
    case PolicyAction::Halt:   return "halt";
  }
  return "?";
}

inline PolicyAction parse_action(const std::string& s) {
  if (s == "report") return PolicyAction::Report;
  if (s == "stall") return PolicyAction::Stall;
  if (s == "halt") return PolicyAction::Halt;
  throw std::invalid_argument("unknown policy action: " + s);
}

// Response per event kind. Probes stall (the access is cancelled so no data
// leaks); overflow and CFI hits halt before corruption lands; table
// overflow is an anomaly to report, not a reason to kill the run.
struct Policy {
  std::array<PolicyAction, kEventKindCount> response{
      PolicyAction::Halt,    // SpatialViolation
      PolicyAction::Halt,    // BackEdgeCfiViolation
      PolicyAction::Stall,   // SpeculativeProbe
      PolicyAction::Report,  // VrtCapacityExceeded
      PolicyAction::Halt,    // ReturnUnderflow
  };

  PolicyAction action_for(EventKind k) const { return response[size_t(k)]; }
  void set(EventKind k, PolicyAction a) { response[size_t(k)] = a; }
  void set_all(PolicyAction a) { response.fill(a); }
};

// Context of the instruction performing a memory access, for the probe
// check: which frame owns the code and whether it was instrumented.
struct AccessorContext {
  uint32_t frame_id = 0;
  bool instrumented = false;
};

// Owns the policy and the append-only event log; evaluates the
// speculative-probe rule against the VRT dirty bits.
class SecurityMonitor {
 public:
  explicit SecurityMonitor(Policy policy = {}) : policy_(policy) {}

  // A probe is a committed access that lands in a dirty entry from foreign
  // or uninstrumented code.
  std::optional<size_t> check_probe(uint32_t addr, const AccessorContext& ctx,
                                    const Vrt& vrt) const {
    auto idx = vrt.lookup(addr, Scope::AnyValid);
    if (!idx) return std::nullopt;
    const VrtEntry& e = vrt.entry(*idx);
    if (!e.dirty) return std::nullopt;
    if (!ctx.instrumented || e.frame_id != ctx.frame_id) return *idx;
    return std::nullopt;
  }

  PolicyAction emit(SecurityEvent ev) {
    events_.push_back(std::move(ev));
    return policy_.action_for(events_.back().kind);
  }

  const std::vector<SecurityEvent>& events() const { return events_; }
  const Policy& policy() const { return policy_; }

  bool attack_detected() const {
    for (const auto& e : events_)
      if (is_attack_kind(e.kind)) return true;
    return false;
  }

 private:
  Policy policy_;
  std::vector<SecurityEvent> events_;
};

}  // namespace vrtsim
