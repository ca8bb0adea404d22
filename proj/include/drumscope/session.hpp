#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "drumscope/matching.hpp"
#include "drumscope/render.hpp"
#include "drumscope/simulator.hpp"

namespace drumscope::session {

enum class Encoding { gt, overlay, density, heat, summary };

const char* encoding_name(Encoding e);
/// Parses "gt", "overlay", "density", "heat", "summary"; throws BadConfig.
Encoding parse_encoding(const std::string& name);

/// Everything the CLI commands need; file config fills it first, flags win.
struct SessionConfig {
  std::string ground_truth_path;
  std::vector<std::string> recording_patterns; // literal paths or globs
  double tolerance = 0.25;
  matching::AlignMode align = matching::AlignMode::none;
  std::string out_dir = ".";
  std::string session_name = "session";
  std::vector<Encoding> encodings; // empty -> all five
  render::Theme theme;

  // simulate
  simulator::ErrorModel model;
  std::size_t takes = 10;
};

/// Merge a JSON config file into `cfg`. Throws BadConfig on unknown keys or
/// malformed values.
void apply_config_file(SessionConfig& cfg, const std::string& path);

/// '*' and '?' wildcards in the filename component; directories literal.
/// Result is sorted for deterministic recording order.
std::vector<std::string> expand_recording_patterns(const std::vector<std::string>& patterns);

// Command entry points used by both the CLI binary and the test suites.
// Each returns the process exit code: 0 ok, 2 input/parse error, 3 semantic.
int cmd_analyze(const SessionConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_render(const SessionConfig& cfg, std::ostream& err);
int cmd_simulate(const SessionConfig& cfg, std::ostream& err);

}  // namespace drumscope::session
