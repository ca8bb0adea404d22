#include "drumscope/score.hpp"

#include <algorithm>
#include <cmath>

#include "drumscope/error.hpp"
#include "drumscope/midi_io.hpp"

namespace drumscope::score {

namespace {

constexpr double kTickEps = 1e-6;

void validate_maps(const std::vector<TempoChange>& tempo_map,
                   const std::vector<TimeSigChange>& timesig_map, int division) {
  if (division <= 0)
    throw Error(Errc::UnsupportedDivision, "division must be positive");
  for (std::size_t i = 0; i < tempo_map.size(); ++i) {
    if (tempo_map[i].microseconds_per_quarter <= 0)
      throw Error(Errc::BadConfig, "tempo must be positive");
    if (i > 0 && tempo_map[i].tick <= tempo_map[i - 1].tick)
      throw Error(Errc::BadConfig, "tempo map ticks must strictly increase");
  }
  for (std::size_t i = 0; i < timesig_map.size(); ++i) {
    const TimeSigChange& ts = timesig_map[i];
    if (ts.numerator <= 0 || ts.denominator <= 0 || (ts.denominator & (ts.denominator - 1)))
      throw Error(Errc::BadConfig, "time signature must be positive with power-of-two denominator");
    if (i > 0 && ts.tick <= timesig_map[i - 1].tick)
      throw Error(Errc::BadConfig, "time-signature map ticks must strictly increase");
  }
}

double measure_len_ticks(const TimeSigChange& ts, int division) {
  return static_cast<double>(ts.numerator) * 4.0 / static_cast<double>(ts.denominator) *
         static_cast<double>(division);
}

/// Walk measures until their span covers `cover_until` seconds (at least one
/// measure). Throws MidMeasureTimesig when a signature change falls inside a
/// measure.
Grid build_grid(const std::vector<TempoChange>& tempo_map,
                const std::vector<TimeSigChange>& timesig_map, int division,
                double cover_until) {
  Grid grid;
  double measure_tick = static_cast<double>(timesig_map.front().tick);
  std::size_t sig = 0;

  while (true) {
    double start_sec = midi_io::ticks_to_seconds(measure_tick, tempo_map, division);
    if (!grid.measures.empty() && start_sec >= cover_until - 1e-12) break;

    // advance to the signature governing this measure
    while (sig + 1 < timesig_map.size()) {
      double next_tick = static_cast<double>(timesig_map[sig + 1].tick);
      if (next_tick <= measure_tick + kTickEps) {
        if (next_tick < measure_tick - kTickEps)
          throw Error(Errc::MidMeasureTimesig,
                      "time-signature change inside a measure");
        ++sig;
      } else {
        break;
      }
    }
    const double mlen = measure_len_ticks(timesig_map[sig], division);
    if (sig + 1 < timesig_map.size()) {
      double next_tick = static_cast<double>(timesig_map[sig + 1].tick);
      if (next_tick < measure_tick + mlen - kTickEps)
        throw Error(Errc::MidMeasureTimesig, "time-signature change inside a measure");
    }

    Measure m;
    m.index = static_cast<int>(grid.measures.size());
    m.start = start_sec;
    m.end = midi_io::ticks_to_seconds(measure_tick + mlen, tempo_map, division);
    const int beats = timesig_map[sig].numerator;
    m.beats.reserve(static_cast<std::size_t>(beats));
    for (int b = 0; b < beats; ++b) {
      double t0 = measure_tick + mlen * static_cast<double>(b) / static_cast<double>(beats);
      double t1 = measure_tick + mlen * static_cast<double>(b + 1) / static_cast<double>(beats);
      m.beats.push_back({midi_io::ticks_to_seconds(t0, tempo_map, division),
                         midi_io::ticks_to_seconds(t1, tempo_map, division)});
    }
    grid.measures.push_back(std::move(m));
    measure_tick += mlen;
  }
  return grid;
}

}  // namespace

GroundTruth make_ground_truth(NoteList notes, std::vector<TempoChange> tempo_map,
                              std::vector<TimeSigChange> timesig_map, int division) {
  if (notes.empty()) throw Error(Errc::EmptyPiece, "ground truth has no notes");
  if (tempo_map.empty() || tempo_map.front().tick != 0)
    tempo_map.insert(tempo_map.begin(), TempoChange{});
  if (timesig_map.empty() || timesig_map.front().tick != 0)
    timesig_map.insert(timesig_map.begin(), TimeSigChange{});
  validate_maps(tempo_map, timesig_map, division);
  sort_notes(notes);

  double max_end = 0.0;
  for (const Note& n : notes) max_end = std::max(max_end, n.onset + std::max(0.0, n.duration));

  Grid grid = build_grid(tempo_map, timesig_map, division, max_end);

  GroundTruth gt;
  gt.notes = std::move(notes);
  gt.tempo_map = std::move(tempo_map);
  gt.timesig_map = std::move(timesig_map);
  gt.division = division;
  gt.total_duration = grid.measures.back().end;
  return gt;
}

GroundTruth load_ground_truth(std::span<const std::uint8_t> smf_bytes) {
  midi_io::SmfData smf = midi_io::parse_smf(smf_bytes);
  NoteList notes = midi_io::extract_notes(smf);
  return make_ground_truth(std::move(notes), std::move(smf.tempo_map),
                           std::move(smf.timesig_map), smf.header.division);
}

Grid compute_grid(const GroundTruth& gt) {
  return build_grid(gt.tempo_map, gt.timesig_map, gt.division, gt.total_duration);
}

}  // namespace drumscope::score
