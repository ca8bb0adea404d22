#include "drumscope/session.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>

#include <json.hpp>

#include "drumscope/error.hpp"
#include "drumscope/gm_percussion.hpp"
#include "drumscope/midi_io.hpp"
#include "drumscope/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace drumscope::session {

namespace {

// exported numbers are rounded to 9 significant digits
double sig9(double v) {
  char tmp[64];
  std::snprintf(tmp, sizeof tmp, "%.9g", v);
  return std::strtod(tmp, nullptr);
}

json curve_json(const stats::DensityCurve& curve) {
  json values = json::array();
  for (double v : curve.values) values.push_back(sig9(v));
  return json{{"grid_start", sig9(curve.grid_start)},
              {"grid_step", sig9(curve.grid_step)},
              {"bandwidth", sig9(curve.bandwidth)},
              {"sample_count", curve.sample_count},
              {"values", std::move(values)}};
}

bool wildcard_match(const std::string& pattern, const std::string& text) {
  std::size_t p = 0, t = 0, star = std::string::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

score::GroundTruth load_ground_truth_file(const std::string& path) {
  try {
    return score::load_ground_truth(midi_io::read_file(path));
  } catch (const Error& e) {
    std::string where = path;
    if (e.byte_offset() >= 0) where += ": byte " + std::to_string(e.byte_offset());
    throw Error(e.code(), where + ": " + e.what(), e.byte_offset());
  }
}

matching::Recording load_recording_file(const std::string& path) {
  try {
    midi_io::SmfData smf = midi_io::parse_smf(midi_io::read_file(path));
    matching::Recording rec;
    rec.id = fs::path(path).stem().string();
    rec.source_path = path;
    rec.notes = midi_io::extract_notes(smf);
    return rec;
  } catch (const Error& e) {
    std::string where = path;
    if (e.byte_offset() >= 0) where += ": byte " + std::to_string(e.byte_offset());
    throw Error(e.code(), where + ": " + e.what(), e.byte_offset());
  }
}

struct Analysis {
  score::GroundTruth gt;
  std::vector<matching::Recording> recordings;
  std::vector<matching::MatchResult> results;
  std::vector<stats::NoteAggregate> per_note;
  std::map<int, stats::PitchSummary> per_pitch;
  std::map<int, stats::DensityCurve> onset_density;
};

Analysis run_analysis(const SessionConfig& cfg, bool need_recordings, std::ostream& err) {
  if (cfg.ground_truth_path.empty())
    throw Error(Errc::BadConfig, "a ground-truth file is required (--ground-truth)");
  Analysis a;
  a.gt = load_ground_truth_file(cfg.ground_truth_path);
  if (!need_recordings) return a;

  std::vector<std::string> paths = expand_recording_patterns(cfg.recording_patterns);
  if (paths.empty())
    throw Error(Errc::BadConfig, "no recordings matched (--recordings)");

  for (const std::string& path : paths) {
    matching::Recording rec = load_recording_file(path);
    if (cfg.align == matching::AlignMode::median_offset) {
      try {
        rec = matching::align_recording(a.gt, rec, cfg.align, cfg.tolerance);
      } catch (const Error& e) {
        if (e.code() != Errc::NoMatches) throw;
        err << "warning: " << path << ": no provisional matches, left unaligned\n";
      }
    }
    a.results.push_back(matching::match_recording(a.gt, rec, cfg.tolerance));
    a.recordings.push_back(std::move(rec));
  }

  a.per_note = stats::per_note_aggregate(a.results, a.gt);
  a.per_pitch = stats::offset_distribution_per_pitch(a.results, a.gt, {},
                                                     cfg.theme.pitch_labels);
  a.onset_density = stats::onset_density_per_pitch(a.recordings, a.gt);
  return a;
}

json analysis_json(const SessionConfig& cfg, const Analysis& a) {
  json doc;
  doc["schema"] = "drumscope-analysis/1";
  doc["tolerance"] = sig9(cfg.tolerance);
  doc["alignment"] = cfg.align == matching::AlignMode::none ? "none" : "median";
  doc["ground_truth"] = {{"path", cfg.ground_truth_path},
                         {"division", a.gt.division},
                         {"note_count", a.gt.notes.size()},
                         {"total_duration", sig9(a.gt.total_duration)}};

  json recs = json::array();
  for (std::size_t k = 0; k < a.recordings.size(); ++k) {
    const matching::Recording& rec = a.recordings[k];
    const matching::MatchResult& res = a.results[k];
    json matches = json::array();
    for (const matching::NoteMatch& m : res.matches)
      matches.push_back({{"gt", m.gt_index}, {"rec", m.rec_index}, {"offset", sig9(m.offset)}});
    recs.push_back({{"id", rec.id},
                    {"path", rec.source_path},
                    {"note_count", rec.notes.size()},
                    {"matches", std::move(matches)},
                    {"missing", res.missing},
                    {"surplus", res.surplus}});
  }
  doc["recordings"] = std::move(recs);

  json per_note = json::array();
  for (const stats::NoteAggregate& agg : a.per_note) {
    const Note& n = a.gt.notes[agg.gt_index];
    json row = {{"gt", agg.gt_index},
                {"pitch", n.pitch},
                {"onset", sig9(n.onset)},
                {"match_count", agg.match_count},
                {"recording_count", agg.recording_count},
                {"miss_fraction", sig9(agg.miss_fraction)}};
    row["mean_abs_offset"] = agg.mean_abs_offset ? json(sig9(*agg.mean_abs_offset)) : json();
    row["mean_signed_offset"] =
        agg.mean_signed_offset ? json(sig9(*agg.mean_signed_offset)) : json();
    per_note.push_back(std::move(row));
  }
  doc["per_note"] = std::move(per_note);

  json per_pitch = json::array();
  for (const auto& [pitch, s] : a.per_pitch) {
    json row = {{"pitch", pitch},
                {"label", s.label},
                {"match_count", s.offsets.size()},
                {"hit_rate", sig9(s.hit_rate)},
                {"curve", curve_json(s.curve)}};
    row["mean_offset"] = s.mean ? json(sig9(*s.mean)) : json();
    row["stddev_offset"] = s.stddev ? json(sig9(*s.stddev)) : json();
    per_pitch.push_back(std::move(row));
  }
  doc["per_pitch"] = std::move(per_pitch);

  json densities = json::array();
  for (const auto& [pitch, curve] : a.onset_density)
    densities.push_back({{"pitch", pitch},
                         {"label", gm::label_for_pitch(pitch, cfg.theme.pitch_labels)},
                         {"curve", curve_json(curve)}});
  doc["onset_density"] = std::move(densities);
  return doc;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::BadConfig, "cannot write file: " + path.string());
  out << text;
}

int exit_code_for(const Error& e) { return is_input_error(e.code()) ? 2 : 3; }

void print_error(std::ostream& err, const Error& e) {
  err << "error: " << errc_name(e.code()) << ": " << e.what() << "\n";
}

}  // namespace

const char* encoding_name(Encoding e) {
  switch (e) {
    case Encoding::gt: return "gt";
    case Encoding::overlay: return "overlay";
    case Encoding::density: return "density";
    case Encoding::heat: return "heat";
    case Encoding::summary: return "summary";
  }
  return "unknown";
}

Encoding parse_encoding(const std::string& name) {
  if (name == "gt") return Encoding::gt;
  if (name == "overlay") return Encoding::overlay;
  if (name == "density") return Encoding::density;
  if (name == "heat") return Encoding::heat;
  if (name == "summary") return Encoding::summary;
  throw Error(Errc::BadConfig, "unknown encoding: " + name);
}

std::vector<std::string> expand_recording_patterns(const std::vector<std::string>& patterns) {
  std::set<std::string> found;
  for (const std::string& pattern : patterns) {
    const fs::path p(pattern);
    const std::string name = p.filename().string();
    if (name.find('*') == std::string::npos && name.find('?') == std::string::npos) {
      found.insert(pattern);
      continue;
    }
    const fs::path dir = p.parent_path().empty() ? fs::path(".") : p.parent_path();
    if (!fs::is_directory(dir)) continue;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (!entry.is_regular_file()) continue;
      if (wildcard_match(name, entry.path().filename().string()))
        found.insert((p.parent_path() / entry.path().filename()).string());
    }
  }
  return {found.begin(), found.end()};
}

void apply_config_file(SessionConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::BadConfig, "cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(Errc::BadConfig, path + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(Errc::BadConfig, path + ": config must be a JSON object");

  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "ground_truth") {
        cfg.ground_truth_path = value.get<std::string>();
      } else if (key == "recordings") {
        cfg.recording_patterns = value.get<std::vector<std::string>>();
      } else if (key == "tolerance") {
        cfg.tolerance = value.get<double>();
      } else if (key == "align") {
        const std::string mode = value.get<std::string>();
        if (mode == "none")
          cfg.align = matching::AlignMode::none;
        else if (mode == "median")
          cfg.align = matching::AlignMode::median_offset;
        else
          throw Error(Errc::BadConfig, "align must be \"none\" or \"median\"");
      } else if (key == "out") {
        cfg.out_dir = value.get<std::string>();
      } else if (key == "session") {
        cfg.session_name = value.get<std::string>();
      } else if (key == "encodings") {
        cfg.encodings.clear();
        for (const auto& e : value) cfg.encodings.push_back(parse_encoding(e.get<std::string>()));
      } else if (key == "px_per_second") {
        cfg.theme.px_per_second = value.get<double>();
      } else if (key == "offset_px_per_second") {
        cfg.theme.offset_px_per_second = value.get<double>();
      } else if (key == "labels") {
        for (const auto& [pitch, label] : value.items())
          cfg.theme.pitch_labels[std::stoi(pitch)] = label.get<std::string>();
      } else if (key == "seed") {
        cfg.model.seed = value.get<std::uint64_t>();
      } else if (key == "bias") {
        for (const auto& [pitch, seconds] : value.items())
          cfg.model.per_pitch_bias[std::stoi(pitch)] = seconds.get<double>();
      } else if (key == "jitter") {
        cfg.model.jitter_sd = value.get<double>();
      } else if (key == "miss") {
        cfg.model.miss_probability = value.get<double>();
      } else if (key == "insert") {
        cfg.model.insertion_rate = value.get<double>();
      } else if (key == "takes") {
        cfg.takes = value.get<std::size_t>();
      } else {
        throw Error(Errc::BadConfig, "unknown config key: " + key);
      }
    }
  } catch (const json::exception& e) {
    throw Error(Errc::BadConfig, path + ": " + e.what());
  }
  if (cfg.tolerance <= 0.0) throw Error(Errc::BadConfig, "tolerance must be positive");
}

int cmd_analyze(const SessionConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    Analysis a = run_analysis(cfg, /*need_recordings=*/true, err);
    fs::create_directories(cfg.out_dir);
    write_text_file(fs::path(cfg.out_dir) / "analysis.json", analysis_json(cfg, a).dump(2) + "\n");

    char line[160];
    std::snprintf(line, sizeof line, "%5s  %-6s  %8s  %8s  %9s  %10s  %7s\n", "pitch", "label",
                  "gt_notes", "hit_rate", "mean_ms", "stddev_ms", "matches");
    out << line;
    for (const auto& [pitch, s] : a.per_pitch) {
      std::size_t gt_notes = 0;
      for (const Note& n : a.gt.notes)
        if (n.pitch == pitch) ++gt_notes;
      if (s.mean)
        std::snprintf(line, sizeof line, "%5d  %-6s  %8zu  %8.3f  %+9.1f  %10.1f  %7zu\n", pitch,
                      s.label.c_str(), gt_notes, s.hit_rate, *s.mean * 1e3, *s.stddev * 1e3,
                      s.offsets.size());
      else
        std::snprintf(line, sizeof line, "%5d  %-6s  %8zu  %8.3f  %9s  %10s  %7zu\n", pitch,
                      s.label.c_str(), gt_notes, s.hit_rate, "-", "-", s.offsets.size());
      out << line;
    }
    std::snprintf(line, sizeof line,
                  "recordings: %zu   gt notes: %zu   tolerance: %.3f s   alignment: %s\n",
                  a.recordings.size(), a.gt.notes.size(), cfg.tolerance,
                  cfg.align == matching::AlignMode::none ? "none" : "median");
    out << line;
    return 0;
  } catch (const Error& e) {
    print_error(err, e);
    return exit_code_for(e);
  }
}

int cmd_render(const SessionConfig& cfg, std::ostream& err) {
  try {
    std::vector<Encoding> encodings = cfg.encodings;
    if (encodings.empty())
      encodings = {Encoding::gt, Encoding::overlay, Encoding::density, Encoding::heat,
                   Encoding::summary};
    const bool need_recordings =
        std::any_of(encodings.begin(), encodings.end(),
                    [](Encoding e) { return e != Encoding::gt; });

    Analysis a = run_analysis(cfg, need_recordings, err);
    fs::create_directories(cfg.out_dir);

    for (Encoding e : encodings) {
      std::string svg;
      switch (e) {
        case Encoding::gt:
          svg = render::render_ground_truth(a.gt, score::compute_grid(a.gt), cfg.theme);
          break;
        case Encoding::overlay:
          svg = render::render_overlay(a.gt, a.recordings, a.results, cfg.theme);
          break;
        case Encoding::density:
          svg = render::render_density(a.gt, a.onset_density, cfg.theme);
          break;
        case Encoding::heat:
          svg = render::render_gt_heat(a.gt, a.per_note, cfg.tolerance, cfg.theme);
          break;
        case Encoding::summary:
          svg = render::render_pitch_summary(a.per_pitch, cfg.tolerance, cfg.theme);
          break;
      }
      const fs::path file =
          fs::path(cfg.out_dir) / (cfg.session_name + "_" + encoding_name(e) + ".svg");
      write_text_file(file, svg);
    }
    return 0;
  } catch (const Error& e) {
    print_error(err, e);
    return exit_code_for(e);
  }
}

int cmd_simulate(const SessionConfig& cfg, std::ostream& err) {
  // invalid model parameter ranges are an input error for this command
  if (cfg.model.miss_probability < 0.0 || cfg.model.miss_probability >= 1.0 ||
      cfg.model.jitter_sd < 0.0 || cfg.model.insertion_rate < 0.0 || cfg.takes < 1) {
    err << "error: invalid model parameters (require 0 <= miss < 1, jitter >= 0, "
           "insert >= 0, takes >= 1)\n";
    return 2;
  }
  try {
    Analysis a = run_analysis(cfg, /*need_recordings=*/false, err);
    std::vector<matching::Recording> takes =
        simulator::simulate_session(a.gt, cfg.model, cfg.takes);

    fs::create_directories(cfg.out_dir);
    json manifest;
    manifest["schema"] = "drumscope-session/1";
    manifest["ground_truth"] = cfg.ground_truth_path;
    manifest["seed"] = cfg.model.seed;
    manifest["takes"] = cfg.takes;
    manifest["jitter_sd"] = sig9(cfg.model.jitter_sd);
    manifest["miss_probability"] = sig9(cfg.model.miss_probability);
    manifest["insertion_rate"] = sig9(cfg.model.insertion_rate);
    json bias = json::object();
    for (const auto& [pitch, seconds] : cfg.model.per_pitch_bias)
      bias[std::to_string(pitch)] = sig9(seconds);
    manifest["bias"] = std::move(bias);

    json files = json::array();
    for (const matching::Recording& take : takes) {
      const std::string name = take.id + ".mid";
      midi_io::write_file(fs::path(cfg.out_dir) / name,
                          midi_io::write_smf(take.notes, a.gt.tempo_map, a.gt.timesig_map,
                                             a.gt.division));
      files.push_back(name);
    }
    manifest["files"] = std::move(files);
    write_text_file(fs::path(cfg.out_dir) / "manifest.json", manifest.dump(2) + "\n");
    return 0;
  } catch (const Error& e) {
    print_error(err, e);
    return exit_code_for(e);
  }
}

}  // namespace drumscope::session
