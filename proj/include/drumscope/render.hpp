#pragma once

#include <map>
#include <string>
#include <vector>

#include "drumscope/matching.hpp"
#include "drumscope/score.hpp"
#include "drumscope/stats.hpp"

namespace drumscope::render {

/// Colors and scale factors for all five encodings. Every field has a
/// deterministic default; overriding any of them is supported through the
/// session config.
struct Theme {
  double px_per_second = 100.0;        // piece-timeline x scale
  double offset_px_per_second = 1000.0; // offset-axis x scale (summary view)
  double lane_height = 24.0;
  double margin_left = 64.0;
  double margin_top = 24.0;
  double margin_right = 16.0;
  double margin_bottom = 24.0;
  std::size_t max_overlay_recordings = 10;

  std::string color_missing = "#D62728";
  std::string color_surplus = "#E69F00";
  std::string correct_dark = "#00441B";  // |offset| == 0
  std::string correct_light = "#A1D99B"; // |offset| >= tolerance
  std::string heat_low = "#FEE8C8";      // mean error 0
  std::string heat_high = "#B30000";     // mean error >= tolerance
  std::string density_fill = "#4C78A8";
  std::string grid_line = "#BBBBBB";
  std::string gt_note = "#555555";
  std::string text_color = "#222222";
  std::string font_family = "Helvetica, Arial, sans-serif";
  double font_size = 11.0;

  std::map<int, std::string> pitch_labels; // label overrides

  /// Correct-note green, t = clamp(|offset|/tolerance, 0, 1): 0 -> dark.
  std::string correct_color(double t) const;
  /// Heat scale for the gt overview, t = clamp(mean_abs/tolerance, 0, 1).
  std::string heat_color(double t) const;
};

std::string render_ground_truth(const score::GroundTruth& gt, const score::Grid& grid,
                                const Theme& theme);

std::string render_overlay(const score::GroundTruth& gt,
                           const std::vector<matching::Recording>& recordings,
                           const std::vector<matching::MatchResult>& results,
                           const Theme& theme);

std::string render_density(const score::GroundTruth& gt,
                           const std::map<int, stats::DensityCurve>& density_map,
                           const Theme& theme);

std::string render_gt_heat(const score::GroundTruth& gt,
                           const std::vector<stats::NoteAggregate>& aggregates,
                           double tolerance, const Theme& theme);

std::string render_pitch_summary(const std::map<int, stats::PitchSummary>& summaries,
                                 double tolerance, const Theme& theme);

}  // namespace drumscope::render
