#include "drumscope/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "drumscope/error.hpp"
#include "drumscope/gm_percussion.hpp"

namespace drumscope::render {

namespace {

// Fixed-point with up to 3 decimals, trailing zeros trimmed. Keeps output
// byte-stable across platforms.
std::string fmt(double v) {
  char tmp[64];
  std::snprintf(tmp, sizeof tmp, "%.3f", v);
  std::string s(tmp);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

std::string escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

class Svg {
public:
  Svg(double width, double height) {
    buf_ += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    buf_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) +
            "\" height=\"" + fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " +
            fmt(height) + "\">\n";
  }

  void rect(double x, double y, double w, double h, const std::string& cls,
            const std::string& fill, const std::string& stroke = "", double rx = 0.0,
            double stroke_width = 1.0) {
    buf_ += "<rect class=\"" + cls + "\" x=\"" + fmt(x) + "\" y=\"" + fmt(y) +
            "\" width=\"" + fmt(w) + "\" height=\"" + fmt(h) + "\"";
    if (rx > 0.0) buf_ += " rx=\"" + fmt(rx) + "\"";
    buf_ += " fill=\"" + escape(fill) + "\"";
    if (!stroke.empty())
      buf_ += " stroke=\"" + escape(stroke) + "\" stroke-width=\"" + fmt(stroke_width) + "\"";
    buf_ += "/>\n";
  }

  void line(double x1, double y1, double x2, double y2, const std::string& cls,
            const std::string& stroke, double width = 1.0) {
    buf_ += "<line class=\"" + cls + "\" x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) +
            "\" x2=\"" + fmt(x2) + "\" y2=\"" + fmt(y2) + "\" stroke=\"" + escape(stroke) +
            "\" stroke-width=\"" + fmt(width) + "\"/>\n";
  }

  void path(const std::string& d, const std::string& cls, const std::string& fill) {
    buf_ += "<path class=\"" + cls + "\" d=\"" + d + "\" fill=\"" + escape(fill) + "\"/>\n";
  }

  void text(double x, double y, const std::string& content, const std::string& cls,
            const Theme& theme, const std::string& anchor = "start") {
    buf_ += "<text class=\"" + cls + "\" x=\"" + fmt(x) + "\" y=\"" + fmt(y) +
            "\" font-family=\"" + escape(theme.font_family) + "\" font-size=\"" +
            fmt(theme.font_size) + "\" fill=\"" + escape(theme.text_color) +
            "\" text-anchor=\"" + anchor + "\">" + escape(content) + "</text>\n";
  }

  std::string finish() {
    buf_ += "</svg>\n";
    return std::move(buf_);
  }

private:
  std::string buf_;
};

struct Layout {
  const Theme* theme = nullptr;
  std::vector<int> pitches; // top to bottom
  double total_duration = 0.0;

  double x(double t) const { return theme->margin_left + t * theme->px_per_second; }
  double lane_y(std::size_t lane) const {
    return theme->margin_top + static_cast<double>(lane) * theme->lane_height;
  }
  std::size_t lane_of(int pitch) const {
    for (std::size_t i = 0; i < pitches.size(); ++i)
      if (pitches[i] == pitch) return i;
    return pitches.size();
  }
  double lanes_bottom() const { return lane_y(pitches.size()); }
  double width() const {
    return theme->margin_left + total_duration * theme->px_per_second + theme->margin_right;
  }
  double height() const { return lanes_bottom() + theme->margin_bottom; }
};

Layout make_layout(const std::set<int>& pitch_set, double total_duration, const Theme& theme) {
  Layout layout;
  layout.theme = &theme;
  layout.pitches = gm::display_order({pitch_set.begin(), pitch_set.end()});
  layout.total_duration = total_duration;
  return layout;
}

std::set<int> gt_pitches(const score::GroundTruth& gt) {
  std::set<int> pitches;
  for (const Note& n : gt.notes) pitches.insert(n.pitch);
  return pitches;
}

void emit_grid_layer(Svg& svg, const score::Grid& grid, const Layout& layout) {
  const Theme& theme = *layout.theme;
  const double top = theme.margin_top;
  const double bottom = layout.lanes_bottom();
  for (const score::Measure& m : grid.measures) {
    svg.rect(layout.x(m.start), top, (m.end - m.start) * theme.px_per_second, bottom - top,
             "measure", "none", theme.grid_line);
    for (const score::Beat& b : m.beats)
      svg.line(layout.x(b.start), top, layout.x(b.start), bottom, "beat", theme.grid_line);
  }
  if (!grid.measures.empty()) {
    const double end = grid.measures.back().end;
    svg.line(layout.x(end), top, layout.x(end), bottom, "beat", theme.grid_line);
  }
}

void emit_lane_labels(Svg& svg, const Layout& layout) {
  const Theme& theme = *layout.theme;
  for (std::size_t i = 0; i < layout.pitches.size(); ++i) {
    const double y = layout.lane_y(i) + theme.lane_height * 0.5 + theme.font_size * 0.35;
    svg.text(theme.margin_left - 8.0, y,
             gm::label_for_pitch(layout.pitches[i], theme.pitch_labels), "lane-label", theme,
             "end");
  }
}

constexpr double kGlyphWidth = 8.0;

void emit_note_glyph(Svg& svg, const Layout& layout, double onset, std::size_t lane,
                     const std::string& cls, const std::string& fill,
                     const std::string& stroke = "", double dy = 0.0, double shrink = 0.0) {
  const Theme& theme = *layout.theme;
  const double h = theme.lane_height - 12.0 - shrink;
  svg.rect(layout.x(onset), layout.lane_y(lane) + 6.0 + dy, kGlyphWidth, h, cls, fill, stroke,
           2.0, 1.5);
}

void emit_gt_notes(Svg& svg, const score::GroundTruth& gt, const Layout& layout) {
  for (const Note& n : gt.notes)
    emit_note_glyph(svg, layout, n.onset, layout.lane_of(n.pitch), "note-gt",
                    layout.theme->gt_note);
}

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  throw Error(Errc::BadConfig, "invalid hex color digit");
}

void parse_hex_color(const std::string& color, int rgb[3]) {
  if (color.size() != 7 || color[0] != '#')
    throw Error(Errc::BadConfig, "colors must be #RRGGBB: " + color);
  for (int i = 0; i < 3; ++i)
    rgb[i] = hex_nibble(color[1 + 2 * i]) * 16 + hex_nibble(color[2 + 2 * i]);
}

std::string lerp_color(const std::string& from, const std::string& to, double t) {
  t = std::clamp(t, 0.0, 1.0);
  int a[3], b[3];
  parse_hex_color(from, a);
  parse_hex_color(to, b);
  char out[8];
  std::snprintf(out, sizeof out, "#%02X%02X%02X",
                static_cast<int>(std::lround(a[0] + (b[0] - a[0]) * t)),
                static_cast<int>(std::lround(a[1] + (b[1] - a[1]) * t)),
                static_cast<int>(std::lround(a[2] + (b[2] - a[2]) * t)));
  return out;
}

}  // namespace

std::string Theme::correct_color(double t) const { return lerp_color(correct_dark, correct_light, t); }

std::string Theme::heat_color(double t) const { return lerp_color(heat_low, heat_high, t); }

std::string render_ground_truth(const score::GroundTruth& gt, const score::Grid& grid,
                                const Theme& theme) {
  if (gt.notes.empty()) throw Error(Errc::EmptyPiece, "cannot render an empty piece");
  Layout layout = make_layout(gt_pitches(gt), gt.total_duration, theme);
  Svg svg(layout.width(), layout.height());
  emit_grid_layer(svg, grid, layout);
  emit_lane_labels(svg, layout);
  emit_gt_notes(svg, gt, layout);
  return svg.finish();
}

std::string render_overlay(const score::GroundTruth& gt,
                           const std::vector<matching::Recording>& recordings,
                           const std::vector<matching::MatchResult>& results,
                           const Theme& theme) {
  if (gt.notes.empty()) throw Error(Errc::EmptyPiece, "cannot render an empty piece");
  if (recordings.size() != results.size())
    throw Error(Errc::InconsistentResult, "one match result per recording required");
  if (recordings.size() > theme.max_overlay_recordings)
    throw Error(Errc::TooManyRecordings,
                "overlay is capped at " + std::to_string(theme.max_overlay_recordings) +
                    " recordings; use the density encoding for larger sessions");

  std::set<int> pitch_set = gt_pitches(gt);
  for (const auto& rec : recordings)
    for (const Note& n : rec.notes) pitch_set.insert(n.pitch);
  Layout layout = make_layout(pitch_set, gt.total_duration, theme);

  Svg svg(layout.width(), layout.height());
  emit_grid_layer(svg, score::compute_grid(gt), layout);
  emit_lane_labels(svg, layout);
  emit_gt_notes(svg, gt, layout);

  const std::size_t rec_count = recordings.size();
  for (std::size_t k = 0; k < rec_count; ++k) {
    // small per-recording vertical stagger so stacked takes stay visible
    const double dy =
        rec_count > 1 ? 6.0 * static_cast<double>(k) / static_cast<double>(rec_count - 1) : 3.0;
    const matching::MatchResult& result = results[k];
    for (std::size_t gi : result.missing)
      emit_note_glyph(svg, layout, gt.notes[gi].onset, layout.lane_of(gt.notes[gi].pitch),
                      "note-missing", theme.color_missing, "", dy, 6.0);
    for (std::size_t rj : result.surplus) {
      const Note& n = recordings[k].notes[rj];
      emit_note_glyph(svg, layout, n.onset, layout.lane_of(n.pitch), "note-surplus",
                      theme.color_surplus, "", dy, 6.0);
    }
    for (const matching::NoteMatch& m : result.matches) {
      const Note& n = recordings[k].notes[m.rec_index];
      const double t = std::abs(m.offset) / result.tolerance;
      emit_note_glyph(svg, layout, n.onset, layout.lane_of(n.pitch), "note-correct",
                      theme.correct_color(t), "", dy, 6.0);
    }
  }
  return svg.finish();
}

std::string render_density(const score::GroundTruth& gt,
                           const std::map<int, stats::DensityCurve>& density_map,
                           const Theme& theme) {
  if (gt.notes.empty()) throw Error(Errc::EmptyPiece, "cannot render an empty piece");
  std::set<int> pitch_set = gt_pitches(gt);
  for (const auto& [pitch, curve] : density_map) pitch_set.insert(pitch);
  Layout layout = make_layout(pitch_set, gt.total_duration, theme);

  Svg svg(layout.width(), layout.height());
  emit_grid_layer(svg, score::compute_grid(gt), layout);
  emit_lane_labels(svg, layout);

  for (std::size_t lane = 0; lane < layout.pitches.size(); ++lane) {
    const int pitch = layout.pitches[lane];
    const double base_y = layout.lane_y(lane) + theme.lane_height - 4.0;
    const double amp = theme.lane_height - 8.0;
    svg.line(layout.x(0.0), base_y, layout.x(gt.total_duration), base_y, "density-base",
             theme.grid_line);

    // ground-truth reference ticks
    for (const Note& n : gt.notes)
      if (n.pitch == pitch)
        svg.line(layout.x(n.onset), base_y, layout.x(n.onset), base_y + 4.0, "gt-tick",
                 theme.gt_note);

    auto it = density_map.find(pitch);
    if (it == density_map.end()) continue;
    const stats::DensityCurve& curve = it->second;
    const double vmax = curve.values.empty()
                            ? 0.0
                            : *std::max_element(curve.values.begin(), curve.values.end());
    if (vmax <= 0.0) continue; // zero curve: baseline only, no fill area

    std::string d = "M" + fmt(layout.x(curve.grid_start)) + "," + fmt(base_y);
    for (std::size_t i = 0; i < curve.values.size(); ++i) {
      const double t = curve.grid_start + static_cast<double>(i) * curve.grid_step;
      d += "L" + fmt(layout.x(t)) + "," + fmt(base_y - curve.values[i] / vmax * amp);
    }
    const double t_end =
        curve.grid_start + static_cast<double>(curve.values.size() - 1) * curve.grid_step;
    d += "L" + fmt(layout.x(t_end)) + "," + fmt(base_y) + "Z";
    svg.path(d, "density-area", theme.density_fill);
  }
  return svg.finish();
}

std::string render_gt_heat(const score::GroundTruth& gt,
                           const std::vector<stats::NoteAggregate>& aggregates,
                           double tolerance, const Theme& theme) {
  if (gt.notes.empty()) throw Error(Errc::EmptyPiece, "cannot render an empty piece");
  if (aggregates.size() != gt.notes.size())
    throw Error(Errc::InconsistentResult, "one aggregate per ground-truth note required");

  Layout layout = make_layout(gt_pitches(gt), gt.total_duration, theme);
  Svg svg(layout.width(), layout.height());
  emit_grid_layer(svg, score::compute_grid(gt), layout);
  emit_lane_labels(svg, layout);

  for (std::size_t i = 0; i < gt.notes.size(); ++i) {
    const Note& n = gt.notes[i];
    const stats::NoteAggregate& a = aggregates[i];
    // never-matched notes show as worst-case heat plus the missing stroke
    const double t = a.mean_abs_offset ? std::clamp(*a.mean_abs_offset / tolerance, 0.0, 1.0) : 1.0;
    const std::string stroke = a.miss_fraction >= 0.5 ? theme.color_missing : "";
    emit_note_glyph(svg, layout, n.onset, layout.lane_of(n.pitch), "note-heat",
                    theme.heat_color(t), stroke);
  }

  // legend: sampled heat ramp in the top margin
  const int swatches = 8;
  const double sw = 12.0, sh = 8.0;
  const double legend_x = layout.width() - theme.margin_right - swatches * sw - 40.0;
  const double legend_y = (theme.margin_top - sh) * 0.5;
  svg.text(legend_x - 6.0, legend_y + sh - 1.0, "0s", "legend-label", theme, "end");
  for (int s = 0; s < swatches; ++s)
    svg.rect(legend_x + s * sw, legend_y, sw, sh, "legend-swatch",
             theme.heat_color(static_cast<double>(s) / (swatches - 1)));
  svg.text(legend_x + swatches * sw + 6.0, legend_y + sh - 1.0,
           "≥" + fmt(tolerance) + "s", "legend-label", theme);
  return svg.finish();
}

std::string render_pitch_summary(const std::map<int, stats::PitchSummary>& summaries,
                                 double tolerance, const Theme& theme) {
  if (summaries.empty()) throw Error(Errc::EmptyPiece, "no pitch summaries to render");

  double max_abs = tolerance;
  for (const auto& [pitch, s] : summaries)
    for (double o : s.offsets) max_abs = std::max(max_abs, std::abs(o));

  std::set<int> pitch_set;
  for (const auto& [pitch, s] : summaries) pitch_set.insert(pitch);
  std::vector<int> order = gm::display_order({pitch_set.begin(), pitch_set.end()});

  const double scale = theme.offset_px_per_second;
  const double width = theme.margin_left + 2.0 * max_abs * scale + theme.margin_right;
  const double height =
      theme.margin_top + static_cast<double>(order.size()) * theme.lane_height +
      theme.margin_bottom;
  const double x_zero = theme.margin_left + max_abs * scale;

  Svg svg(width, height);
  const double rows_bottom =
      theme.margin_top + static_cast<double>(order.size()) * theme.lane_height;
  svg.line(x_zero, theme.margin_top, x_zero, rows_bottom, "zero-line", theme.grid_line, 1.5);

  for (std::size_t row = 0; row < order.size(); ++row) {
    const stats::PitchSummary& s = summaries.at(order[row]);
    const double lane_top = theme.margin_top + static_cast<double>(row) * theme.lane_height;
    const double base_y = lane_top + theme.lane_height - 4.0;
    const double amp = theme.lane_height - 8.0;

    svg.text(theme.margin_left - 8.0, lane_top + theme.lane_height * 0.5 + theme.font_size * 0.35,
             s.label, "lane-label", theme, "end");
    svg.line(theme.margin_left, base_y, theme.margin_left + 2.0 * max_abs * scale, base_y,
             "density-base", theme.grid_line);

    const stats::DensityCurve& curve = s.curve;
    double vmax = 0.0;
    std::vector<std::pair<double, double>> pts; // (offset, value) within range
    for (std::size_t i = 0; i < curve.values.size(); ++i) {
      const double t = curve.grid_start + static_cast<double>(i) * curve.grid_step;
      if (t < -max_abs || t > max_abs) continue;
      pts.emplace_back(t, curve.values[i]);
      vmax = std::max(vmax, curve.values[i]);
    }
    if (vmax > 0.0 && pts.size() >= 2) {
      std::string d = "M" + fmt(x_zero + pts.front().first * scale) + "," + fmt(base_y);
      for (const auto& [t, v] : pts)
        d += "L" + fmt(x_zero + t * scale) + "," + fmt(base_y - v / vmax * amp);
      d += "L" + fmt(x_zero + pts.back().first * scale) + "," + fmt(base_y) + "Z";
      svg.path(d, "offset-area", theme.density_fill);
    }

    if (s.mean)
      svg.line(x_zero + *s.mean * scale, lane_top + 2.0, x_zero + *s.mean * scale, base_y,
               "mean-marker", theme.color_missing, 1.5);
  }
  return svg.finish();
}

}  // namespace drumscope::render
