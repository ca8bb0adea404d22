#pragma once

#include <span>
#include <vector>

#include "drumscope/types.hpp"

namespace drumscope::score {

struct GroundTruth {
  NoteList notes;
  std::vector<TempoChange> tempo_map;
  std::vector<TimeSigChange> timesig_map;
  int division = 480;
  double total_duration = 0.0; // end of the last measure, covers every note end
};

struct Beat {
  double start = 0.0;
  double end = 0.0;
};

struct Measure {
  int index = 0;
  double start = 0.0;
  double end = 0.0;
  std::vector<Beat> beats;
};

/// Duration-proportional measure/beat grid; spans are in seconds.
struct Grid {
  std::vector<Measure> measures;
};

/// Validate maps, sort notes, pad to whole measures. Throws EmptyPiece if the
/// note list is empty and MidMeasureTimesig if a time-signature change does
/// not land on a measure boundary.
GroundTruth make_ground_truth(NoteList notes,
                              std::vector<TempoChange> tempo_map,
                              std::vector<TimeSigChange> timesig_map,
                              int division);

GroundTruth load_ground_truth(std::span<const std::uint8_t> smf_bytes);

Grid compute_grid(const GroundTruth& gt);

}  // namespace drumscope::score
