#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "drumscope/types.hpp"

namespace drumscope::midi_io {

struct VlqResult {
  std::uint32_t value = 0;
  int consumed = 0;
};

/// Decode one SMF variable-length quantity starting at `offset`.
/// Throws TruncatedInput / Overlong.
VlqResult read_vlq(std::span<const std::uint8_t> bytes, std::size_t offset);

void append_vlq(std::vector<std::uint8_t>& out, std::uint32_t value);

struct RawNoteEvent {
  std::int64_t tick = 0;
  bool note_on = false; // note-on with velocity > 0; velocity-0 on arrives as note_on=false
  int channel = 0;
  int pitch = 0;
  int velocity = 0;
};

struct SmfTrack {
  std::vector<RawNoteEvent> events;
  std::int64_t end_tick = 0; // tick of the end-of-track meta (or last event)
};

struct SmfData {
  SmfHeader header;
  std::vector<SmfTrack> tracks;
  std::vector<TempoChange> tempo_map;     // non-empty, entry at tick 0 guaranteed
  std::vector<TimeSigChange> timesig_map; // non-empty, entry at tick 0 guaranteed
};

/// Parse a format 0/1 SMF. Tempo/time-signature metas are collected from all
/// tracks and merged by tick (later track wins ties). Unknown meta and sysex
/// events are skipped; running status is honored.
SmfData parse_smf(std::span<const std::uint8_t> bytes);

struct ExtractStats {
  int orphan_note_offs = 0;
  int unterminated_notes = 0;
};

/// Pair note-ons with note-offs (FIFO per pitch+channel) and convert to
/// seconds. Unterminated notes are closed at end-of-track and counted.
NoteList extract_notes(const SmfData& smf, ExtractStats* stats = nullptr);

/// Piecewise-linear tick->seconds conversion under a tempo map.
double ticks_to_seconds(double tick, std::span<const TempoChange> tempo_map, int division);
double seconds_to_ticks(double seconds, std::span<const TempoChange> tempo_map, int division);

/// Emit a format-0 SMF; onsets/offsets are quantized to the nearest tick.
std::vector<std::uint8_t> write_smf(const NoteList& notes,
                                    std::span<const TempoChange> tempo_map,
                                    std::span<const TimeSigChange> timesig_map,
                                    int division);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace drumscope::midi_io
