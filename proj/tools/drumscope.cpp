// drumscope: compare MIDI practice takes against a reference piece, aggregate
// timing errors, and render the comparison views as SVG.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "drumscope/error.hpp"
#include "drumscope/session.hpp"

namespace {

using drumscope::Error;
using drumscope::session::SessionConfig;

int error_exit_code(const Error& e) { return drumscope::is_input_error(e.code()) ? 2 : 3; }

void parse_bias_entries(const std::vector<std::string>& entries, SessionConfig& cfg) {
  for (const std::string& entry : entries) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos)
      throw Error(drumscope::Errc::BadConfig, "--bias expects pitch=seconds: " + entry);
    try {
      cfg.model.per_pitch_bias[std::stoi(entry.substr(0, eq))] =
          std::stod(entry.substr(eq + 1));
    } catch (const std::exception&) {
      throw Error(drumscope::Errc::BadConfig, "--bias expects pitch=seconds: " + entry);
    }
  }
}

struct CommonFlags {
  std::string config;
  std::string ground_truth;
  std::string out;
  std::string session;
  CLI::Option* o_ground_truth = nullptr;
  CLI::Option* o_out = nullptr;
  CLI::Option* o_session = nullptr;

  void add(CLI::App& cmd) {
    cmd.add_option("--config", config, "JSON config file; explicit flags win");
    o_ground_truth =
        cmd.add_option("--ground-truth", ground_truth, "reference piece (.mid)");
    o_out = cmd.add_option("--out", out, "output directory (default .)");
    o_session = cmd.add_option("--session", session, "session name used in file names");
  }

  void apply(SessionConfig& cfg) const {
    if (!config.empty()) drumscope::session::apply_config_file(cfg, config);
    if (o_ground_truth->count()) cfg.ground_truth_path = ground_truth;
    if (o_out->count()) cfg.out_dir = out;
    if (o_session->count()) cfg.session_name = session;
  }
};

struct AnalysisFlags {
  std::vector<std::string> recordings;
  double tolerance = 0.25;
  std::string align = "none";
  double px_per_second = 100.0;
  CLI::Option* o_recordings = nullptr;
  CLI::Option* o_tolerance = nullptr;
  CLI::Option* o_align = nullptr;
  CLI::Option* o_pps = nullptr;

  void add(CLI::App& cmd) {
    o_recordings = cmd.add_option("--recordings", recordings,
                                  "recording files or globs (repeatable)");
    o_tolerance =
        cmd.add_option("--tolerance", tolerance, "match window in seconds (default 0.25)");
    o_align = cmd.add_option("--align", align, "start alignment: none|median")
                  ->check(CLI::IsMember({"none", "median"}));
    o_pps = cmd.add_option("--px-per-second", px_per_second,
                           "timeline scale for rendering (default 100)");
  }

  void apply(SessionConfig& cfg) const {
    if (o_recordings->count()) cfg.recording_patterns = recordings;
    if (o_tolerance->count()) cfg.tolerance = tolerance;
    if (o_align->count())
      cfg.align = align == "median" ? drumscope::matching::AlignMode::median_offset
                                    : drumscope::matching::AlignMode::none;
    if (o_pps->count()) cfg.theme.px_per_second = px_per_second;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"drumscope: per-note feedback for MIDI drum practice"};
  app.require_subcommand(1);
  int rc = 0;

  // analyze
  auto* analyze = app.add_subcommand("analyze", "match recordings and write analysis.json");
  auto common_a = std::make_shared<CommonFlags>();
  auto flags_a = std::make_shared<AnalysisFlags>();
  common_a->add(*analyze);
  flags_a->add(*analyze);
  analyze->callback([&rc, common_a, flags_a] {
    try {
      SessionConfig cfg;
      common_a->apply(cfg);
      flags_a->apply(cfg);
      rc = drumscope::session::cmd_analyze(cfg, std::cout, std::cerr);
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      rc = error_exit_code(e);
    }
  });

  // render
  auto* render = app.add_subcommand("render", "write the comparison views as SVG");
  auto common_r = std::make_shared<CommonFlags>();
  auto flags_r = std::make_shared<AnalysisFlags>();
  auto encodings = std::make_shared<std::vector<std::string>>();
  common_r->add(*render);
  flags_r->add(*render);
  auto* o_encodings = render->add_option(
      "--encodings", *encodings, "subset of gt,overlay,density,heat,summary (default all)");
  render->callback([&rc, common_r, flags_r, encodings, o_encodings] {
    try {
      SessionConfig cfg;
      common_r->apply(cfg);
      flags_r->apply(cfg);
      if (o_encodings->count()) {
        cfg.encodings.clear();
        for (const std::string& entry : *encodings) {
          // accept both "--encodings gt overlay" and "--encodings gt,overlay"
          std::size_t from = 0;
          while (from <= entry.size()) {
            const std::size_t comma = entry.find(',', from);
            const std::string name = entry.substr(
                from, comma == std::string::npos ? std::string::npos : comma - from);
            if (!name.empty())
              cfg.encodings.push_back(drumscope::session::parse_encoding(name));
            if (comma == std::string::npos) break;
            from = comma + 1;
          }
        }
      }
      rc = drumscope::session::cmd_render(cfg, std::cerr);
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      rc = error_exit_code(e);
    }
  });

  // simulate
  auto* simulate = app.add_subcommand("simulate", "generate synthetic takes from a piece");
  auto common_s = std::make_shared<CommonFlags>();
  common_s->add(*simulate);
  auto seed = std::make_shared<std::uint64_t>(0);
  auto jitter = std::make_shared<double>(0.0);
  auto miss = std::make_shared<double>(0.0);
  auto insert = std::make_shared<double>(0.0);
  auto takes = std::make_shared<std::size_t>(10);
  auto bias = std::make_shared<std::vector<std::string>>();
  auto* o_seed = simulate->add_option("--seed", *seed, "base RNG seed (default 0)");
  auto* o_jitter = simulate->add_option("--jitter", *jitter, "onset jitter sd in seconds");
  auto* o_miss = simulate->add_option("--miss", *miss, "per-note miss probability [0,1)");
  auto* o_insert =
      simulate->add_option("--insert", *insert, "surplus notes per second (Poisson rate)");
  auto* o_takes = simulate->add_option("--takes", *takes, "number of takes (default 10)");
  simulate->add_option("--bias", *bias, "per-pitch onset bias, pitch=seconds (repeatable)");
  simulate->callback([&rc, common_s, seed, jitter, miss, insert, takes, bias, o_seed, o_jitter,
                      o_miss, o_insert, o_takes] {
    try {
      SessionConfig cfg;
      common_s->apply(cfg);
      if (o_seed->count()) cfg.model.seed = *seed;
      if (o_jitter->count()) cfg.model.jitter_sd = *jitter;
      if (o_miss->count()) cfg.model.miss_probability = *miss;
      if (o_insert->count()) cfg.model.insertion_rate = *insert;
      if (o_takes->count()) cfg.takes = *takes;
      parse_bias_entries(*bias, cfg);
      rc = drumscope::session::cmd_simulate(cfg, std::cerr);
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      rc = e.code() == drumscope::Errc::BadConfig ? 2 : error_exit_code(e);
    }
  });

  CLI11_PARSE(app, argc, argv);
  return rc;
}
