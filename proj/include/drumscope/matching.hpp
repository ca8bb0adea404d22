#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "drumscope/score.hpp"
#include "drumscope/types.hpp"

namespace drumscope::matching {

struct Recording {
  std::string id;
  NoteList notes;
  std::string source_path;
};

struct NoteMatch {
  std::size_t gt_index = 0;
  std::size_t rec_index = 0;
  double offset = 0.0; // recorded onset - ground-truth onset; negative = early

  friend bool operator==(const NoteMatch&, const NoteMatch&) = default;
};

struct MatchResult {
  std::string recording_id;
  std::vector<NoteMatch> matches;     // sorted by gt_index
  std::vector<std::size_t> missing;   // gt indices, ascending
  std::vector<std::size_t> surplus;   // rec indices, ascending
  double tolerance = 0.25;
};

enum class NoteStatus { Correct, Missing, Surplus };

struct ErrorClass {
  NoteStatus status = NoteStatus::Correct;
  double offset = 0.0; // meaningful only for Correct

  friend bool operator==(const ErrorClass&, const ErrorClass&) = default;
};

enum class AlignMode { none, median_offset };

/// Per pitch, the injective assignment between gt and recorded notes that
/// maximizes matched pairs and, among those, minimizes the summed |offset|.
/// Only pairs with |onset difference| <= tolerance are eligible.
MatchResult match_recording(const score::GroundTruth& gt, const Recording& rec,
                            double tolerance);

/// Per-note error classes for both sides of a match result.
std::pair<std::vector<ErrorClass>, std::vector<ErrorClass>>
classify(const score::GroundTruth& gt, const Recording& rec, const MatchResult& result);

/// median_offset shifts every onset by the negated median offset of a
/// provisional match (clamped at 0); callers re-match afterwards.
Recording align_recording(const score::GroundTruth& gt, const Recording& rec,
                          AlignMode mode, double tolerance);

}  // namespace drumscope::matching
