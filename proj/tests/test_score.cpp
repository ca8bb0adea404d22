#include <doctest.h>

#include <cmath>

#include "drumscope/error.hpp"
#include "drumscope/midi_io.hpp"
#include "drumscope/score.hpp"
#include "test_support.hpp"

using namespace drumscope;
using namespace drumscope::score;
using namespace testsupport;

TEST_CASE("total_duration pads to whole measures") {
  SUBCASE("one quarter note -> one full 4/4 measure") {
    GroundTruth gt = make_ground_truth({{60, 0.0, 0.5, 100, 0}}, {{0, 500000}}, {{0, 4, 4}}, 480);
    CHECK(gt.total_duration == doctest::Approx(2.0));
  }

  SUBCASE("notes spanning 4.5 measures -> 5 measures") {
    NoteList notes{{36, 0.0, 0.1, 100, 9}, {36, 8.9, 0.05, 100, 9}};
    GroundTruth gt = make_ground_truth(std::move(notes), {{0, 500000}}, {{0, 4, 4}}, 480);
    CHECK(gt.total_duration == doctest::Approx(10.0));
    CHECK(compute_grid(gt).measures.size() == 5);
  }

  SUBCASE("covers every note end") {
    NoteList notes{{36, 1.9, 0.5, 100, 9}}; // ends at 2.4, inside measure 2
    GroundTruth gt = make_ground_truth(std::move(notes), {{0, 500000}}, {{0, 4, 4}}, 480);
    CHECK(gt.total_duration == doctest::Approx(4.0));
    CHECK(gt.total_duration >= 1.9 + 0.5);
  }
}

TEST_CASE("load_ground_truth propagates parse errors and rejects empty pieces") {
  auto empty = smf_file(0, 480, {end_of_track()});
  try {
    load_ground_truth(empty);
    FAIL("expected EmptyPiece");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptyPiece);
  }

  std::vector<std::uint8_t> garbage{'n', 'o', 'p', 'e'};
  CHECK_THROWS_AS(load_ground_truth(garbage), Error);
}

TEST_CASE("compute_grid basic shapes") {
  SUBCASE("4/4 at 120 BPM, two measures") {
    NoteList notes{{36, 0.0, 0.1, 100, 9}, {36, 3.5, 0.1, 100, 9}};
    GroundTruth gt = make_ground_truth(std::move(notes), {{0, 500000}}, {{0, 4, 4}}, 480);
    Grid grid = compute_grid(gt);
    REQUIRE(grid.measures.size() == 2);
    CHECK(grid.measures[0].start == doctest::Approx(0.0));
    CHECK(grid.measures[0].end == doctest::Approx(2.0));
    CHECK(grid.measures[1].start == doctest::Approx(2.0));
    CHECK(grid.measures[1].end == doctest::Approx(4.0));
    for (const Measure& m : grid.measures) {
      REQUIRE(m.beats.size() == 4);
      for (const Beat& b : m.beats) CHECK(b.end - b.start == doctest::Approx(0.5));
    }
  }

  SUBCASE("3/4 measure is 1.5 s with 3 beats") {
    GroundTruth gt = make_ground_truth({{36, 0.0, 0.1, 100, 9}}, {{0, 500000}}, {{0, 3, 4}}, 480);
    Grid grid = compute_grid(gt);
    REQUIRE(grid.measures.size() == 1);
    CHECK(grid.measures[0].end - grid.measures[0].start == doctest::Approx(1.5));
    CHECK(grid.measures[0].beats.size() == 3);
  }

  SUBCASE("tempo doubling at measure 2 halves its width (2:1)") {
    // 4/4, tick 1920 = start of measure 2, tempo 500000 -> 250000
    NoteList notes{{36, 0.0, 0.1, 100, 9}, {36, 2.5, 0.1, 100, 9}};
    GroundTruth gt = make_ground_truth(std::move(notes), {{0, 500000}, {1920, 250000}},
                                       {{0, 4, 4}}, 480);
    Grid grid = compute_grid(gt);
    REQUIRE(grid.measures.size() == 2);
    const double w1 = grid.measures[0].end - grid.measures[0].start;
    const double w2 = grid.measures[1].end - grid.measures[1].start;
    CHECK(w1 == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(w2 == doctest::Approx(1.0).epsilon(1e-9));
    // boundary agrees with the tick conversion
    CHECK(grid.measures[1].start ==
          doctest::Approx(midi_io::ticks_to_seconds(1920, gt.tempo_map, 480)));
  }
}

TEST_CASE("grid invariants: contiguity, beat sums, equal measures under constant tempo") {
  GroundTruth gt = rock_beat(6);
  Grid grid = compute_grid(gt);
  REQUIRE(!grid.measures.empty());
  CHECK(grid.measures.front().start == doctest::Approx(0.0));
  CHECK(grid.measures.back().end == doctest::Approx(gt.total_duration).epsilon(1e-12));

  double expected_width = grid.measures[0].end - grid.measures[0].start;
  for (std::size_t i = 0; i < grid.measures.size(); ++i) {
    const Measure& m = grid.measures[i];
    if (i > 0) CHECK(m.start == doctest::Approx(grid.measures[i - 1].end).epsilon(1e-12));
    CHECK(m.end - m.start == doctest::Approx(expected_width).epsilon(1e-12));

    double beat_sum = 0.0;
    for (std::size_t b = 0; b < m.beats.size(); ++b) {
      beat_sum += m.beats[b].end - m.beats[b].start;
      if (b > 0) CHECK(m.beats[b].start == doctest::Approx(m.beats[b - 1].end).epsilon(1e-12));
    }
    CHECK(std::abs(beat_sum - (m.end - m.start)) < 1e-9);
    CHECK(m.beats.front().start == doctest::Approx(m.start));
    CHECK(m.beats.back().end == doctest::Approx(m.end));
  }
}

TEST_CASE("mid-measure time-signature change is rejected") {
  NoteList notes{{36, 0.0, 0.1, 100, 9}, {36, 4.2, 0.1, 100, 9}};
  try {
    make_ground_truth(std::move(notes), {{0, 500000}}, {{0, 4, 4}, {960, 3, 4}}, 480);
    FAIL("expected MidMeasureTimesig");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MidMeasureTimesig);
  }

  SUBCASE("measure-aligned change is fine") {
    NoteList notes2{{36, 0.0, 0.1, 100, 9}, {36, 4.2, 0.1, 100, 9}};
    GroundTruth gt = make_ground_truth(std::move(notes2), {{0, 500000}},
                                       {{0, 4, 4}, {1920, 3, 4}}, 480);
    Grid grid = compute_grid(gt);
    REQUIRE(grid.measures.size() >= 3);
    CHECK(grid.measures[0].beats.size() == 4);
    CHECK(grid.measures[1].beats.size() == 3);
    CHECK(grid.measures[1].end - grid.measures[1].start == doctest::Approx(1.5));
  }
}

TEST_CASE("ground truth round-trips through SMF bytes") {
  GroundTruth gt = rock_beat(2);
  auto bytes = midi_io::write_smf(gt.notes, gt.tempo_map, gt.timesig_map, gt.division);
  GroundTruth loaded = load_ground_truth(bytes);
  CHECK(loaded.total_duration == doctest::Approx(gt.total_duration));
  REQUIRE(loaded.notes.size() == gt.notes.size());
  for (std::size_t i = 0; i < gt.notes.size(); ++i) {
    CHECK(loaded.notes[i].pitch == gt.notes[i].pitch);
    CHECK(loaded.notes[i].onset == doctest::Approx(gt.notes[i].onset).epsilon(1e-6));
  }
}
