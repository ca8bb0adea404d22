#include "drumscope/gm_percussion.hpp"

#include <algorithm>

namespace drumscope::gm {

namespace {

const char* builtin_label(int pitch) {
  switch (pitch) {
    case 35:
    case 36:
      return "BD";
    case 38:
    case 40:
      return "SN";
    case 42:
    case 44:
    case 46:
      return "HH";
    case 49:
    case 57:
      return "CY";
    case 45:
    case 47:
    case 48:
    case 50:
      return "TOM";
    default:
      return nullptr;
  }
}

}  // namespace

std::string label_for_pitch(int pitch, const std::map<int, std::string>& overrides) {
  auto it = overrides.find(pitch);
  if (it != overrides.end()) return it->second;
  if (const char* l = builtin_label(pitch)) return l;
  return "P" + std::to_string(pitch);
}

int lane_rank(int pitch) {
  const char* l = builtin_label(pitch);
  if (!l) return 5;
  switch (l[0]) {
    case 'C': return 0; // CY
    case 'H': return 1; // HH
    case 'T': return 2; // TOM
    case 'S': return 3; // SN
    default: return 4;  // BD
  }
}

std::vector<int> display_order(std::vector<int> pitches) {
  std::sort(pitches.begin(), pitches.end(), [](int a, int b) {
    int ra = lane_rank(a), rb = lane_rank(b);
    if (ra != rb) return ra < rb;
    return a > b;
  });
  pitches.erase(std::unique(pitches.begin(), pitches.end()), pitches.end());
  return pitches;
}

}  // namespace drumscope::gm
