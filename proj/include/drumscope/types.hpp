#pragma once

#include <cstdint>
#include <vector>

namespace drumscope {

/// One played or notated note. Times are in seconds.
struct Note {
  int pitch = 0;         // 0..127
  double onset = 0.0;    // >= 0
  double duration = 0.0; // >= 0
  int velocity = 100;    // 1..127
  int channel = 9;       // 0..15, percussion lives on 9

  friend bool operator==(const Note&, const Note&) = default;
};

/// Canonical note order: (onset, pitch, velocity, channel, duration).
bool note_less(const Note& a, const Note& b);

using NoteList = std::vector<Note>;

void sort_notes(NoteList& notes);
bool notes_sorted(const NoteList& notes);

struct TempoChange {
  std::int64_t tick = 0;
  std::int64_t microseconds_per_quarter = 500000; // 120 BPM

  friend bool operator==(const TempoChange&, const TempoChange&) = default;
};

struct TimeSigChange {
  std::int64_t tick = 0;
  int numerator = 4;
  int denominator = 4; // power of two

  friend bool operator==(const TimeSigChange&, const TimeSigChange&) = default;
};

struct SmfHeader {
  int format = 0;      // 0 or 1
  int track_count = 1; // > 0
  int division = 480;  // ticks per quarter, > 0 (SMPTE rejected)
};

}  // namespace drumscope
