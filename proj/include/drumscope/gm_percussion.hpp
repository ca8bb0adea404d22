#pragma once

#include <map>
#include <string>
#include <vector>

namespace drumscope::gm {

/// Component label for a General MIDI percussion pitch (35/36 -> BD,
/// 38/40 -> SN, 42/44/46 -> HH, 49/57 -> CY, 45/47/48/50 -> TOM).
/// Unmapped pitches get "P<pitch>". Overrides win.
std::string label_for_pitch(int pitch, const std::map<int, std::string>& overrides = {});

/// Vertical lane ordering: cymbals on top, bass drum at the bottom,
/// unmapped pitches below that. Lower rank draws higher.
int lane_rank(int pitch);

/// Pitches sorted for display: by lane rank, then by descending pitch.
std::vector<int> display_order(std::vector<int> pitches);

}  // namespace drumscope::gm
