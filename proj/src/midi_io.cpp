#include "drumscope/midi_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <fstream>
#include <map>

#include "drumscope/error.hpp"

namespace drumscope {

bool note_less(const Note& a, const Note& b) {
  if (a.onset != b.onset) return a.onset < b.onset;
  if (a.pitch != b.pitch) return a.pitch < b.pitch;
  if (a.velocity != b.velocity) return a.velocity < b.velocity;
  if (a.channel != b.channel) return a.channel < b.channel;
  return a.duration < b.duration;
}

void sort_notes(NoteList& notes) { std::stable_sort(notes.begin(), notes.end(), note_less); }

bool notes_sorted(const NoteList& notes) {
  return std::is_sorted(notes.begin(), notes.end(), note_less);
}

}  // namespace drumscope

namespace drumscope::midi_io {

namespace {

constexpr std::int64_t kDefaultTempo = 500000; // 120 BPM

class Reader {
public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  void require(std::size_t n, const char* what) const {
    if (remaining() < n)
      throw Error(Errc::TruncatedChunk,
                  std::string("truncated input while reading ") + what,
                  static_cast<std::int64_t>(pos_));
  }

  std::uint8_t u8(const char* what) {
    require(1, what);
    return bytes_[pos_++];
  }

  std::uint16_t u16(const char* what) {
    require(2, what);
    std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_] << 8 | bytes_[pos_ + 1]);
    pos_ += 2;
    return v;
  }

  std::uint32_t u32(const char* what) {
    require(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = v << 8 | bytes_[pos_ + i];
    pos_ += 4;
    return v;
  }

  std::uint32_t vlq() {
    VlqResult r = read_vlq(bytes_, pos_);
    pos_ += static_cast<std::size_t>(r.consumed);
    return r.value;
  }

  void skip(std::size_t n, const char* what) {
    require(n, what);
    pos_ += n;
  }

  std::uint8_t peek(const char* what) const {
    require(1, what);
    return bytes_[pos_];
  }

private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

struct TempoEntry {
  std::int64_t tick;
  std::int64_t value;
  int track;
};

struct TimesigEntry {
  std::int64_t tick;
  int numerator;
  int denominator;
  int track;
};

// Merge per-track meta entries by tick; on a tick collision the entry from
// the later track (or later position in the same track) wins.
template <typename Entry, typename Out, typename Make>
std::vector<Out> merge_meta(std::vector<Entry> entries, Make make) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) {
                     if (a.tick != b.tick) return a.tick < b.tick;
                     return a.track < b.track;
                   });
  std::vector<Out> out;
  for (const Entry& e : entries) {
    if (!out.empty() && out.back().tick == e.tick)
      out.back() = make(e);
    else
      out.push_back(make(e));
  }
  return out;
}

void parse_track(Reader& r, std::size_t chunk_len, int track_index, SmfTrack& track,
                 std::vector<TempoEntry>& tempos_out, std::vector<TimesigEntry>& timesigs_out) {
  const std::size_t end_pos = r.pos() + chunk_len;
  std::int64_t tick = 0;
  int running_status = -1;
  bool saw_end = false;

  while (r.pos() < end_pos && !saw_end) {
    tick += r.vlq();
    std::uint8_t first = r.peek("event status");
    int status;
    if (first & 0x80) {
      status = r.u8("event status");
      if (status < 0xF0) running_status = status;
    } else {
      if (running_status < 0)
        throw Error(Errc::TruncatedChunk, "data byte without running status",
                    static_cast<std::int64_t>(r.pos()));
      status = running_status;
    }

    if (status == 0xFF) {
      std::uint8_t type = r.u8("meta type");
      std::uint32_t len = r.vlq();
      if (type == 0x2F) {
        r.skip(len, "end of track");
        track.end_tick = std::max(track.end_tick, tick);
        saw_end = true;
      } else if (type == 0x51 && len == 3) {
        std::int64_t mpq = 0;
        for (int i = 0; i < 3; ++i) mpq = mpq << 8 | r.u8("tempo");
        if (mpq > 0) tempos_out.push_back({tick, mpq, track_index});
      } else if (type == 0x58 && len == 4) {
        int nn = r.u8("timesig numerator");
        int dd = r.u8("timesig denominator");
        r.skip(2, "timesig cc/bb");
        if (nn > 0 && dd >= 0 && dd < 16)
          timesigs_out.push_back({tick, nn, 1 << dd, track_index});
      } else {
        r.skip(len, "meta data");
      }
      running_status = -1;
      continue;
    }

    if (status == 0xF0 || status == 0xF7) {
      std::uint32_t len = r.vlq();
      r.skip(len, "sysex data");
      running_status = -1;
      continue;
    }

    const int kind = status >> 4;
    const int channel = status & 0x0F;
    switch (kind) {
      case 0x8: {
        int pitch = r.u8("note-off pitch") & 0x7F;
        int velocity = r.u8("note-off velocity") & 0x7F;
        track.events.push_back({tick, false, channel, pitch, velocity});
        break;
      }
      case 0x9: {
        int pitch = r.u8("note-on pitch") & 0x7F;
        int velocity = r.u8("note-on velocity") & 0x7F;
        // velocity 0 is a note-off by MIDI convention
        track.events.push_back({tick, velocity > 0, channel, pitch, velocity});
        break;
      }
      case 0xA:
      case 0xB:
      case 0xE:
        r.skip(2, "channel event data");
        break;
      case 0xC:
      case 0xD:
        r.skip(1, "channel event data");
        break;
      default:
        throw Error(Errc::TruncatedChunk, "unexpected status byte",
                    static_cast<std::int64_t>(r.pos()));
    }
    track.end_tick = std::max(track.end_tick, tick);
  }

  // trust the declared chunk length over trailing garbage
  if (r.pos() < end_pos) r.skip(end_pos - r.pos(), "track padding");
}

}  // namespace

VlqResult read_vlq(std::span<const std::uint8_t> bytes, std::size_t offset) {
  std::uint32_t value = 0;
  for (int i = 0; i < 4; ++i) {
    if (offset + static_cast<std::size_t>(i) >= bytes.size())
      throw Error(Errc::TruncatedInput, "variable-length quantity runs past end of input",
                  static_cast<std::int64_t>(offset));
    std::uint8_t b = bytes[offset + static_cast<std::size_t>(i)];
    value = value << 7 | (b & 0x7F);
    if (!(b & 0x80)) return {value, i + 1};
  }
  throw Error(Errc::Overlong, "variable-length quantity longer than 4 bytes",
              static_cast<std::int64_t>(offset));
}

void append_vlq(std::vector<std::uint8_t>& out, std::uint32_t value) {
  if (value > 0x0FFFFFFF)
    throw Error(Errc::Overlong, "value does not fit a 4-byte variable-length quantity");
  std::uint8_t buf[4];
  int n = 0;
  do {
    buf[n++] = static_cast<std::uint8_t>(value & 0x7F);
    value >>= 7;
  } while (value != 0);
  for (int i = n - 1; i >= 0; --i)
    out.push_back(i == 0 ? buf[i] : static_cast<std::uint8_t>(buf[i] | 0x80));
}

SmfData parse_smf(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  r.require(8, "header chunk");
  if (std::memcmp(bytes.data(), "MThd", 4) != 0)
    throw Error(Errc::BadMagic, "input does not start with MThd", 0);
  r.skip(4, "header id");
  std::uint32_t header_len = r.u32("header length");
  if (header_len < 6)
    throw Error(Errc::TruncatedChunk, "MThd shorter than 6 bytes",
                static_cast<std::int64_t>(r.pos()));

  SmfData smf;
  smf.header.format = r.u16("format");
  smf.header.track_count = r.u16("track count");
  std::uint16_t division = r.u16("division");
  if (header_len > 6) r.skip(header_len - 6, "header extension");

  if (division & 0x8000)
    throw Error(Errc::UnsupportedDivision, "SMPTE division is not supported", 12);
  if (division == 0)
    throw Error(Errc::UnsupportedDivision, "division must be positive", 12);
  smf.header.division = division;

  if (smf.header.format == 2)
    throw Error(Errc::UnsupportedFormat, "SMF format 2 is not supported", 8);
  if (smf.header.format != 0 && smf.header.format != 1)
    throw Error(Errc::UnsupportedFormat, "unknown SMF format", 8);
  if (smf.header.format == 0 && smf.header.track_count != 1)
    throw Error(Errc::UnsupportedFormat, "format 0 must declare exactly one track", 10);

  std::vector<TempoEntry> tempos;
  std::vector<TimesigEntry> timesigs;

  while (r.remaining() >= 8) {
    char id[4];
    std::memcpy(id, bytes.data() + r.pos(), 4);
    r.skip(4, "chunk id");
    std::uint32_t len = r.u32("chunk length");
    if (std::memcmp(id, "MTrk", 4) == 0) {
      r.require(len, "track chunk");
      SmfTrack track;
      parse_track(r, len, static_cast<int>(smf.tracks.size()), track, tempos, timesigs);
      smf.tracks.push_back(std::move(track));
    } else {
      r.skip(len, "unknown chunk"); // per the SMF spec, skip alien chunks
    }
  }
  if (r.remaining() != 0)
    throw Error(Errc::TruncatedChunk, "trailing bytes do not form a chunk header",
                static_cast<std::int64_t>(r.pos()));

  smf.tempo_map = merge_meta<TempoEntry, TempoChange>(
      std::move(tempos), [](const TempoEntry& e) { return TempoChange{e.tick, e.value}; });
  smf.timesig_map = merge_meta<TimesigEntry, TimeSigChange>(
      std::move(timesigs),
      [](const TimesigEntry& e) { return TimeSigChange{e.tick, e.numerator, e.denominator}; });

  if (smf.tempo_map.empty() || smf.tempo_map.front().tick != 0)
    smf.tempo_map.insert(smf.tempo_map.begin(), TempoChange{0, kDefaultTempo});
  if (smf.timesig_map.empty() || smf.timesig_map.front().tick != 0)
    smf.timesig_map.insert(smf.timesig_map.begin(), TimeSigChange{0, 4, 4});

  return smf;
}

NoteList extract_notes(const SmfData& smf, ExtractStats* stats) {
  ExtractStats local;
  NoteList notes;
  const int division = smf.header.division;
  const auto& tempo = smf.tempo_map;

  for (const SmfTrack& track : smf.tracks) {
    // open note-ons per (channel, pitch), FIFO so the earliest on pairs with
    // the earliest subsequent off
    std::map<std::pair<int, int>, std::deque<std::pair<std::int64_t, int>>> open;
    for (const RawNoteEvent& ev : track.events) {
      auto key = std::make_pair(ev.channel, ev.pitch);
      if (ev.note_on) {
        open[key].emplace_back(ev.tick, ev.velocity);
      } else {
        auto it = open.find(key);
        if (it == open.end() || it->second.empty()) {
          ++local.orphan_note_offs;
          continue;
        }
        auto [on_tick, velocity] = it->second.front();
        it->second.pop_front();
        double onset = ticks_to_seconds(static_cast<double>(on_tick), tempo, division);
        double off = ticks_to_seconds(static_cast<double>(ev.tick), tempo, division);
        notes.push_back({ev.pitch, onset, off - onset, velocity, ev.channel});
      }
    }
    for (auto& [key, queue] : open) {
      for (auto [on_tick, velocity] : queue) {
        ++local.unterminated_notes;
        double onset = ticks_to_seconds(static_cast<double>(on_tick), tempo, division);
        double off = ticks_to_seconds(static_cast<double>(track.end_tick), tempo, division);
        notes.push_back({key.second, onset, std::max(0.0, off - onset), velocity, key.first});
      }
    }
  }

  sort_notes(notes);
  if (stats) *stats = local;
  return notes;
}

double ticks_to_seconds(double tick, std::span<const TempoChange> tempo_map, int division) {
  double scaled = 0.0; // accumulated mpq*ticks
  double seg_tick = 0.0;
  std::int64_t mpq = kDefaultTempo;
  for (const TempoChange& tc : tempo_map) {
    double t = static_cast<double>(tc.tick);
    if (t >= tick) break;
    scaled += (t - seg_tick) * static_cast<double>(mpq);
    seg_tick = t;
    mpq = tc.microseconds_per_quarter;
  }
  scaled += (tick - seg_tick) * static_cast<double>(mpq);
  return scaled / (static_cast<double>(division) * 1e6);
}

double seconds_to_ticks(double seconds, std::span<const TempoChange> tempo_map, int division) {
  const double target = seconds * static_cast<double>(division) * 1e6;
  double acc = 0.0; // microseconds*division units, same scale as target
  double seg_tick = 0.0;
  std::int64_t mpq = tempo_map.empty() ? kDefaultTempo : tempo_map.front().microseconds_per_quarter;
  for (std::size_t i = 1; i < tempo_map.size(); ++i) {
    double next_tick = static_cast<double>(tempo_map[i].tick);
    double seg_end = acc + (next_tick - seg_tick) * static_cast<double>(mpq);
    if (seg_end >= target) break;
    acc = seg_end;
    seg_tick = next_tick;
    mpq = tempo_map[i].microseconds_per_quarter;
  }
  return seg_tick + (target - acc) / static_cast<double>(mpq);
}

namespace {

struct WireEvent {
  std::int64_t tick;
  int order; // 0 tempo, 1 timesig, 2 note-off, 3 note-on
  int pitch;
  int channel;
  int velocity;
  std::int64_t tempo_value;
  int numerator;
  int denominator;
};

}  // namespace

std::vector<std::uint8_t> write_smf(const NoteList& notes,
                                    std::span<const TempoChange> tempo_map,
                                    std::span<const TimeSigChange> timesig_map,
                                    int division) {
  if (division <= 0 || division > 0x7FFF)
    throw Error(Errc::UnsupportedDivision, "division must be in (0, 32767]");

  std::vector<TempoChange> tempos(tempo_map.begin(), tempo_map.end());
  if (tempos.empty() || tempos.front().tick != 0)
    tempos.insert(tempos.begin(), TempoChange{0, kDefaultTempo});
  std::vector<TimeSigChange> timesigs(timesig_map.begin(), timesig_map.end());
  if (timesigs.empty() || timesigs.front().tick != 0)
    timesigs.insert(timesigs.begin(), TimeSigChange{0, 4, 4});

  std::vector<WireEvent> events;
  events.reserve(notes.size() * 2 + tempos.size() + timesigs.size());
  for (const TempoChange& tc : tempos)
    events.push_back({tc.tick, 0, 0, 0, 0, tc.microseconds_per_quarter, 0, 0});
  for (const TimeSigChange& ts : timesigs)
    events.push_back({ts.tick, 1, 0, 0, 0, 0, ts.numerator, ts.denominator});

  for (const Note& n : notes) {
    std::int64_t on = std::llround(seconds_to_ticks(n.onset, tempos, division));
    std::int64_t off = std::llround(seconds_to_ticks(n.onset + n.duration, tempos, division));
    on = std::max<std::int64_t>(0, on);
    off = std::max(on, off);
    int velocity = std::clamp(n.velocity, 1, 127);
    int channel = std::clamp(n.channel, 0, 15);
    int pitch = std::clamp(n.pitch, 0, 127);
    events.push_back({on, 3, pitch, channel, velocity, 0, 0, 0});
    events.push_back({off, 2, pitch, channel, 0, 0, 0, 0});
  }

  std::stable_sort(events.begin(), events.end(), [](const WireEvent& a, const WireEvent& b) {
    if (a.tick != b.tick) return a.tick < b.tick;
    if (a.order != b.order) return a.order < b.order;
    if (a.pitch != b.pitch) return a.pitch < b.pitch;
    if (a.channel != b.channel) return a.channel < b.channel;
    return a.velocity < b.velocity;
  });

  std::vector<std::uint8_t> track;
  std::int64_t prev_tick = 0;
  for (const WireEvent& ev : events) {
    append_vlq(track, static_cast<std::uint32_t>(ev.tick - prev_tick));
    prev_tick = ev.tick;
    switch (ev.order) {
      case 0:
        track.push_back(0xFF);
        track.push_back(0x51);
        track.push_back(0x03);
        track.push_back(static_cast<std::uint8_t>(ev.tempo_value >> 16 & 0xFF));
        track.push_back(static_cast<std::uint8_t>(ev.tempo_value >> 8 & 0xFF));
        track.push_back(static_cast<std::uint8_t>(ev.tempo_value & 0xFF));
        break;
      case 1: {
        int dd = 0;
        while ((1 << dd) < ev.denominator) ++dd;
        track.push_back(0xFF);
        track.push_back(0x58);
        track.push_back(0x04);
        track.push_back(static_cast<std::uint8_t>(ev.numerator));
        track.push_back(static_cast<std::uint8_t>(dd));
        track.push_back(24); // MIDI clocks per metronome click
        track.push_back(8);  // 32nd notes per quarter
        break;
      }
      case 2:
        track.push_back(static_cast<std::uint8_t>(0x80 | ev.channel));
        track.push_back(static_cast<std::uint8_t>(ev.pitch));
        track.push_back(0x00);
        break;
      case 3:
        track.push_back(static_cast<std::uint8_t>(0x90 | ev.channel));
        track.push_back(static_cast<std::uint8_t>(ev.pitch));
        track.push_back(static_cast<std::uint8_t>(ev.velocity));
        break;
    }
  }
  // end of track
  append_vlq(track, 0);
  track.push_back(0xFF);
  track.push_back(0x2F);
  track.push_back(0x00);

  std::vector<std::uint8_t> out;
  out.reserve(14 + 8 + track.size());
  auto push_u32 = [&out](std::uint32_t v) {
    for (int i = 3; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i) & 0xFF));
  };
  auto push_u16 = [&out](std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  };
  out.insert(out.end(), {'M', 'T', 'h', 'd'});
  push_u32(6);
  push_u16(0); // format 0
  push_u16(1);
  push_u16(static_cast<std::uint16_t>(division));
  out.insert(out.end(), {'M', 'T', 'r', 'k'});
  push_u32(static_cast<std::uint32_t>(track.size()));
  out.insert(out.end(), track.begin(), track.end());
  return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::BadMagic, "cannot open file: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::BadConfig, "cannot write file: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace drumscope::midi_io
