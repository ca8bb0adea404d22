#include <doctest.h>

#include <cmath>

#include "drumscope/error.hpp"
#include "drumscope/render.hpp"
#include "drumscope/simulator.hpp"
#include "drumscope/stats.hpp"
#include "test_support.hpp"

using namespace drumscope;
using namespace drumscope::render;
using namespace testsupport;

namespace {

// path data emitted by the renderer: "Mx,y" followed by "Lx,y" segments
std::vector<std::pair<double, double>> parse_path_points(const std::string& d) {
  std::vector<std::pair<double, double>> pts;
  std::size_t i = 0;
  while (i < d.size()) {
    if (d[i] == 'M' || d[i] == 'L') {
      const std::size_t comma = d.find(',', i);
      std::size_t end = d.find_first_of("ML Z", comma);
      if (end == std::string::npos) end = d.size();
      pts.emplace_back(std::stod(d.substr(i + 1, comma - i - 1)),
                       std::stod(d.substr(comma + 1, end - comma - 1)));
      i = end;
    } else {
      ++i;
    }
  }
  return pts;
}

}  // namespace

TEST_CASE("ground-truth view: affine layout") {
  Theme theme;
  score::GroundTruth gt = rock_beat(1);
  std::string svg = render_ground_truth(gt, score::compute_grid(gt), theme);

  CHECK(xml_well_formed(svg));
  CHECK(svg.find("width=\"") != std::string::npos);
  CHECK(svg.find("height=\"") != std::string::npos);

  auto widths = attr_values_of_class(svg, "measure", "width");
  REQUIRE(widths.size() == 1);
  CHECK(widths[0] == doctest::Approx(200.0));

  auto beat_x = attr_values_of_class(svg, "beat", "x1");
  REQUIRE(beat_x.size() == 5); // 4 beat starts + final measure end
  for (std::size_t i = 0; i < beat_x.size(); ++i)
    CHECK(beat_x[i] == doctest::Approx(theme.margin_left + 50.0 * static_cast<double>(i)));

  // one neutral glyph per gt note, one label per pitch lane
  CHECK(count_class(svg, "note-gt") == gt.notes.size());
  CHECK(count_class(svg, "lane-label") == 3);
}

TEST_CASE("ground-truth view: tempo change keeps widths proportional") {
  NoteList notes{{36, 0.0, 0.1, 100, 9}, {36, 2.5, 0.1, 100, 9}};
  score::GroundTruth gt = score::make_ground_truth(
      std::move(notes), {{0, 500000}, {1920, 250000}}, {{0, 4, 4}}, 480);
  std::string svg = render_ground_truth(gt, score::compute_grid(gt), Theme{});
  auto widths = attr_values_of_class(svg, "measure", "width");
  REQUIRE(widths.size() == 2);
  CHECK(std::abs(widths[0] / widths[1] - 2.0) < 1e-6);
}

TEST_CASE("render is deterministic byte for byte") {
  score::GroundTruth gt = rock_beat(2);
  Theme theme;
  std::string a = render_ground_truth(gt, score::compute_grid(gt), theme);
  std::string b = render_ground_truth(gt, score::compute_grid(gt), theme);
  CHECK(a == b);
}

TEST_CASE("overlay: perfect take is all darkest green") {
  score::GroundTruth gt = rock_beat(1);
  std::vector<matching::Recording> recs{as_recording(gt)};
  std::vector<matching::MatchResult> results{matching::match_recording(gt, recs[0], 0.25)};
  Theme theme;
  std::string svg = render_overlay(gt, recs, results, theme);

  CHECK(xml_well_formed(svg));
  CHECK(count_class(svg, "note-correct") == results[0].matches.size());
  CHECK(count_class(svg, "note-missing") == 0);
  CHECK(count_class(svg, "note-surplus") == 0);
  // |offset| == 0 maps to the darkest end of the green scale
  for (const std::string& fill : attr_of_class(svg, "note-correct", "fill"))
    CHECK(fill == theme.correct_dark);
}

TEST_CASE("overlay: empty take paints every gt note missing") {
  score::GroundTruth gt = rock_beat(1);
  std::vector<matching::Recording> recs{{"empty", {}, ""}};
  std::vector<matching::MatchResult> results{matching::match_recording(gt, recs[0], 0.25)};
  std::string svg = render_overlay(gt, recs, results, Theme{});
  CHECK(count_class(svg, "note-missing") == gt.notes.size());
  CHECK(count_class(svg, "note-correct") == 0);
  for (const std::string& fill : attr_of_class(svg, "note-missing", "fill"))
    CHECK(fill == Theme{}.color_missing);
}

TEST_CASE("overlay: lone surplus hi-hat at 0.75 s") {
  NoteList notes{{36, 0.0, 0.1, 100, 9}, {36, 1.0, 0.1, 100, 9}};
  score::GroundTruth gt =
      score::make_ground_truth(std::move(notes), {{0, 500000}}, {{0, 4, 4}}, 480);
  matching::Recording rec = as_recording(gt);
  rec.notes.push_back({42, 0.75, 0.05, 90, 9});
  sort_notes(rec.notes);
  std::vector<matching::Recording> recs{rec};
  std::vector<matching::MatchResult> results{matching::match_recording(gt, rec, 0.25)};
  Theme theme;
  std::string svg = render_overlay(gt, recs, results, theme);

  auto xs = attr_values_of_class(svg, "note-surplus", "x");
  REQUIRE(xs.size() == 1);
  CHECK(xs[0] == doctest::Approx(theme.margin_left + 75.0));
  for (const std::string& fill : attr_of_class(svg, "note-surplus", "fill"))
    CHECK(fill == theme.color_surplus);
}

TEST_CASE("overlay: recording cap") {
  score::GroundTruth gt = rock_beat(1);
  std::vector<matching::Recording> recs(11, as_recording(gt));
  std::vector<matching::MatchResult> results;
  for (const auto& r : recs) results.push_back(matching::match_recording(gt, r, 0.25));
  try {
    render_overlay(gt, recs, results, Theme{});
    FAIL("expected TooManyRecordings");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TooManyRecordings);
  }
}

TEST_CASE("overlay: color counts equal the match partition on a mixed take") {
  score::GroundTruth gt = rock_beat(2);
  simulator::ErrorModel model;
  model.miss_probability = 0.25;
  model.insertion_rate = 1.0;
  model.jitter_sd = 0.01;
  model.seed = 5;
  matching::Recording rec = simulator::simulate_recording(gt, model);
  rec.id = "mixed";
  std::vector<matching::MatchResult> results{matching::match_recording(gt, rec, 0.25)};
  std::string svg = render_overlay(gt, {rec}, results, Theme{});
  CHECK(count_class(svg, "note-missing") == results[0].missing.size());
  CHECK(count_class(svg, "note-surplus") == results[0].surplus.size());
  CHECK(count_class(svg, "note-correct") == results[0].matches.size());
  CHECK(xml_well_formed(svg));
}

TEST_CASE("density view") {
  score::GroundTruth gt = rock_beat(2);

  SUBCASE("zero curve leaves the baseline only") {
    matching::Recording rec = as_recording(gt);
    std::erase_if(rec.notes, [](const Note& n) { return n.pitch == 42; });
    auto curves = stats::onset_density_per_pitch({rec}, gt);
    std::string svg = render_density(gt, curves, Theme{});
    CHECK(xml_well_formed(svg));
    // three lanes but only two filled areas
    CHECK(count_class(svg, "density-base") == 3);
    CHECK(count_class(svg, "density-area") == 2);
    CHECK(count_class(svg, "gt-tick") == gt.notes.size());
  }

  SUBCASE("bias displaces the peaks by about 3 px at 100 px/s") {
    NoteList notes;
    for (int m = 0; m < 2; ++m) {
      notes.push_back({36, 2.0 * m, 0.1, 100, 9});
      notes.push_back({36, 2.0 * m + 1.0, 0.1, 100, 9});
      notes.push_back({38, 2.0 * m + 0.5, 0.1, 96, 9});
      notes.push_back({38, 2.0 * m + 1.5, 0.1, 96, 9});
    }
    score::GroundTruth bd_sn =
        score::make_ground_truth(std::move(notes), {{0, 500000}}, {{0, 4, 4}}, 480);
    simulator::ErrorModel model;
    model.per_pitch_bias[36] = 0.03;
    model.jitter_sd = 0.005;
    model.seed = 12;
    auto takes = simulator::simulate_session(bd_sn, model, 20);
    auto curves = stats::onset_density_per_pitch(takes, bd_sn);
    Theme theme;
    std::string svg = render_density(bd_sn, curves, theme);

    // lanes are SN on top, BD below, so the BD area path comes second
    auto paths = attr_of_class(svg, "density-area", "d");
    REQUIRE(paths.size() == 2);
    auto bd_points = parse_path_points(paths[1]);
    REQUIRE(!bd_points.empty());
    for (const Note& n : bd_sn.notes) {
      if (n.pitch != 36) continue;
      const double expect_x = theme.margin_left + (n.onset + 0.03) * theme.px_per_second;
      double best_x = 0.0, best_y = 1e300;
      for (const auto& [x, y] : bd_points) {
        if (std::abs(x - (theme.margin_left + n.onset * theme.px_per_second)) > 15.0) continue;
        if (y < best_y) {
          best_y = y;
          best_x = x;
        }
      }
      CHECK(std::abs(best_x - expect_x) <= 1.5);
    }
  }
}

TEST_CASE("heat view") {
  score::GroundTruth gt = rock_beat(1);
  Theme theme;

  SUBCASE("all-perfect aggregates sit at the scale minimum") {
    std::vector<matching::MatchResult> results{
        matching::match_recording(gt, as_recording(gt), 0.25)};
    auto aggs = stats::per_note_aggregate(results, gt);
    std::string svg = render_gt_heat(gt, aggs, 0.25, theme);
    CHECK(xml_well_formed(svg));
    CHECK(count_class(svg, "note-heat") == gt.notes.size());
    for (const std::string& fill : attr_of_class(svg, "note-heat", "fill"))
      CHECK(fill == theme.heat_low);
    CHECK(count_class(svg, "legend-swatch") == 8);
  }

  SUBCASE("fully-missed note carries the missing stroke") {
    matching::Recording rec = as_recording(gt);
    std::erase_if(rec.notes, [](const Note& n) { return n.pitch == 38; });
    std::vector<matching::MatchResult> results{matching::match_recording(gt, rec, 0.25)};
    auto aggs = stats::per_note_aggregate(results, gt);
    std::string svg = render_gt_heat(gt, aggs, 0.25, theme);
    auto strokes = attr_of_class(svg, "note-heat", "stroke");
    std::size_t missing_strokes = 0;
    for (const std::string& s : strokes)
      if (s == theme.color_missing) ++missing_strokes;
    CHECK(missing_strokes == 2); // the two snare notes of the measure
  }

  SUBCASE("fill samples the documented scale position") {
    // mean_abs 1/60 s at tolerance 0.25 -> position 0.0667
    NoteList notes{{36, 0.5, 0.1, 100, 9}, {38, 1.0, 0.1, 96, 9}, {42, 1.5, 0.05, 80, 9}};
    score::GroundTruth late_gt =
        score::make_ground_truth(std::move(notes), {{0, 500000}}, {{0, 4, 4}}, 480);
    std::vector<matching::MatchResult> results;
    for (double off : {0.01, -0.01, 0.03}) {
      matching::Recording rec = as_recording(late_gt);
      for (Note& n : rec.notes) n.onset += off;
      sort_notes(rec.notes);
      results.push_back(matching::match_recording(late_gt, rec, 0.25));
    }
    auto aggs = stats::per_note_aggregate(results, late_gt);
    std::string svg = render_gt_heat(late_gt, aggs, 0.25, theme);
    const std::string expected = theme.heat_color((0.05 / 3.0) / 0.25);
    for (const std::string& fill : attr_of_class(svg, "note-heat", "fill"))
      CHECK(fill == expected);
  }
}

TEST_CASE("pitch summary view") {
  Theme theme;

  SUBCASE("perfect takes: spike at zero, marker on the zero line") {
    score::GroundTruth gt = rock_beat(1);
    std::vector<matching::MatchResult> results{
        matching::match_recording(gt, as_recording(gt), 0.25)};
    auto summaries = stats::offset_distribution_per_pitch(results, gt);
    std::string svg = render_pitch_summary(summaries, 0.25, theme);
    CHECK(xml_well_formed(svg));
    auto zero_x = attr_values_of_class(svg, "zero-line", "x1");
    REQUIRE(zero_x.size() == 1);
    for (double x : attr_values_of_class(svg, "mean-marker", "x1"))
      CHECK(x == doctest::Approx(zero_x[0]).epsilon(1e-9));
    CHECK(count_class(svg, "lane-label") == summaries.size());
  }

  SUBCASE("single pitch with offsets [+0.01, -0.01, +0.03]: marker at +0.01 s") {
    NoteList notes{{36, 1.0, 0.1, 100, 9}, {36, 2.0, 0.1, 100, 9}, {36, 3.0, 0.1, 100, 9}};
    score::GroundTruth gt =
        score::make_ground_truth(std::move(notes), {{0, 500000}}, {{0, 4, 4}}, 480);
    matching::Recording rec;
    rec.id = "r";
    const double offs[3] = {0.01, -0.01, 0.03};
    for (int i = 0; i < 3; ++i) {
      Note n = gt.notes[i];
      n.onset += offs[i];
      rec.notes.push_back(n);
    }
    sort_notes(rec.notes);
    std::vector<matching::MatchResult> results{matching::match_recording(gt, rec, 0.25)};
    auto summaries = stats::offset_distribution_per_pitch(results, gt);
    std::string svg = render_pitch_summary(summaries, 0.25, theme);

    auto zero_x = attr_values_of_class(svg, "zero-line", "x1");
    auto marker_x = attr_values_of_class(svg, "mean-marker", "x1");
    REQUIRE(zero_x.size() == 1);
    REQUIRE(marker_x.size() == 1);
    CHECK(marker_x[0] - zero_x[0] ==
          doctest::Approx(0.01 * theme.offset_px_per_second).epsilon(1e-6));
  }

  SUBCASE("bass drum bias pushes only the BD marker right") {
    score::GroundTruth gt = rock_beat(2);
    simulator::ErrorModel model;
    model.per_pitch_bias[36] = 0.03;
    model.jitter_sd = 0.01;
    model.seed = 21;
    auto takes = simulator::simulate_session(gt, model, 20);
    std::vector<matching::MatchResult> results;
    for (const auto& t : takes) results.push_back(matching::match_recording(gt, t, 0.25));
    auto summaries = stats::offset_distribution_per_pitch(results, gt);
    std::string svg = render_pitch_summary(summaries, 0.25, theme);

    const double zero = attr_values_of_class(svg, "zero-line", "x1").at(0);
    auto markers = attr_values_of_class(svg, "mean-marker", "x1");
    auto labels = attr_of_class(svg, "lane-label", "x"); // lane order HH, SN, BD
    REQUIRE(markers.size() == 3);
    // rows render top to bottom: HH, SN, BD
    CHECK(std::abs(markers[0] - zero) < 5.0);           // HH unbiased
    CHECK(std::abs(markers[1] - zero) < 5.0);           // SN unbiased
    CHECK(markers[2] - zero > 25.0);                    // BD pushed right ~30 px
    CHECK(markers[2] - zero < 35.0);
    CHECK(labels.size() == 3);
  }
}
