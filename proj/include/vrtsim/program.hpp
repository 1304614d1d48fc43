#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace vrtsim {

inline constexpr uint32_t kTextBase = 0x400000;
inline constexpr uint32_t kDataBase = 0x10000000;

struct FrameSlot {
  std::string name;
  int64_t fp_offset = 0;  // relative to the frame base (sp after the prologue)
  uint32_t size = 0;      // bytes, 1..256

  bool operator==(const FrameSlot&) const = default;
};

// Compiler-known variable space of one function, consumed when its
// prologue stack allocation commits. Uninstrumented layouts model injected
// attack procedures whose variables are never extracted.
struct FrameLayout {
  std::string function;
  uint32_t entry_pc = 0;
  bool instrumented = true;
  std::vector<FrameSlot> slots;

  bool operator==(const FrameLayout&) const = default;
};

struct ProgramImage {
  std::map<uint32_t, uint32_t> text;   // word address -> instruction word
  std::map<uint32_t, uint8_t> data;    // byte address -> value
  uint32_t entry = kTextBase;
  std::vector<FrameLayout> frames;
  std::map<std::string, uint32_t> symbols;

  const FrameLayout* find_frame(uint32_t pc) const {
    for (const auto& f : frames)
      if (f.entry_pc == pc) return &f;
    return nullptr;
  }

  size_t image_bytes() const { return text.size() * 4 + data.size(); }

  // Loadable-content identity (symbol names are not part of it).
  bool same_image(const ProgramImage& o) const {
    return text == o.text && data == o.data && entry == o.entry && frames == o.frames;
  }
};

}  // namespace vrtsim
