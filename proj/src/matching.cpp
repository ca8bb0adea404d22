#include "drumscope/matching.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "drumscope/error.hpp"

namespace drumscope::matching {

namespace {

struct DpCell {
  int pairs = 0;
  double cost = 0.0;
};

// lexicographic: more pairs first, then lower cost
bool better(const DpCell& a, const DpCell& b) {
  if (a.pairs != b.pairs) return a.pairs > b.pairs;
  return a.cost < b.cost;
}

enum class Step : std::uint8_t { None, Match, SkipGt, SkipRec };

/// Maximum-cardinality, then minimum total |offset|, assignment between two
/// onset-sorted sequences of the same pitch. Because both sequences are
/// sorted and the cost is |difference|, a non-crossing optimum exists, so a
/// two-index DP is exact (oracle-checked in the tests).
void match_pitch(const std::vector<std::size_t>& gt_idx, const std::vector<std::size_t>& rec_idx,
                 const NoteList& gt_notes, const NoteList& rec_notes, double tolerance,
                 std::vector<NoteMatch>& out) {
  const std::size_t m = gt_idx.size();
  const std::size_t n = rec_idx.size();
  if (m == 0 || n == 0) return;

  std::vector<DpCell> dp((m + 1) * (n + 1));
  std::vector<Step> step((m + 1) * (n + 1), Step::None);
  auto at = [n](std::size_t i, std::size_t j) { return i * (n + 1) + j; };

  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const double diff =
          rec_notes[rec_idx[j - 1]].onset - gt_notes[gt_idx[i - 1]].onset;
      DpCell best = dp[at(i - 1, j)];
      Step how = Step::SkipGt;
      if (std::abs(diff) <= tolerance) {
        DpCell cand{dp[at(i - 1, j - 1)].pairs + 1, dp[at(i - 1, j - 1)].cost + std::abs(diff)};
        if (better(cand, best)) {
          best = cand;
          how = Step::Match;
        }
      }
      if (better(dp[at(i, j - 1)], best)) {
        best = dp[at(i, j - 1)];
        how = Step::SkipRec;
      }
      dp[at(i, j)] = best;
      step[at(i, j)] = how;
    }
  }

  std::size_t i = m, j = n;
  while (i > 0 && j > 0) {
    switch (step[at(i, j)]) {
      case Step::Match: {
        const double diff =
            rec_notes[rec_idx[j - 1]].onset - gt_notes[gt_idx[i - 1]].onset;
        out.push_back({gt_idx[i - 1], rec_idx[j - 1], diff});
        --i;
        --j;
        break;
      }
      case Step::SkipGt:
        --i;
        break;
      default:
        --j;
        break;
    }
  }
}

}  // namespace

MatchResult match_recording(const score::GroundTruth& gt, const Recording& rec,
                            double tolerance) {
  if (tolerance <= 0) throw Error(Errc::BadConfig, "tolerance must be positive");

  // per-pitch index lists; the note lists are onset-sorted already
  std::map<int, std::vector<std::size_t>> gt_by_pitch;
  std::map<int, std::vector<std::size_t>> rec_by_pitch;
  for (std::size_t i = 0; i < gt.notes.size(); ++i) gt_by_pitch[gt.notes[i].pitch].push_back(i);
  for (std::size_t j = 0; j < rec.notes.size(); ++j) rec_by_pitch[rec.notes[j].pitch].push_back(j);

  MatchResult result;
  result.recording_id = rec.id;
  result.tolerance = tolerance;

  for (const auto& [pitch, gt_idx] : gt_by_pitch) {
    auto it = rec_by_pitch.find(pitch);
    if (it == rec_by_pitch.end()) continue;
    match_pitch(gt_idx, it->second, gt.notes, rec.notes, tolerance, result.matches);
  }
  std::sort(result.matches.begin(), result.matches.end(),
            [](const NoteMatch& a, const NoteMatch& b) { return a.gt_index < b.gt_index; });

  std::vector<bool> gt_used(gt.notes.size(), false), rec_used(rec.notes.size(), false);
  for (const NoteMatch& m : result.matches) {
    gt_used[m.gt_index] = true;
    rec_used[m.rec_index] = true;
  }
  for (std::size_t i = 0; i < gt_used.size(); ++i)
    if (!gt_used[i]) result.missing.push_back(i);
  for (std::size_t j = 0; j < rec_used.size(); ++j)
    if (!rec_used[j]) result.surplus.push_back(j);
  return result;
}

std::pair<std::vector<ErrorClass>, std::vector<ErrorClass>>
classify(const score::GroundTruth& gt, const Recording& rec, const MatchResult& result) {
  std::vector<ErrorClass> gt_classes(gt.notes.size(), {NoteStatus::Missing, 0.0});
  std::vector<ErrorClass> rec_classes(rec.notes.size(), {NoteStatus::Surplus, 0.0});
  for (const NoteMatch& m : result.matches) {
    if (m.gt_index >= gt_classes.size() || m.rec_index >= rec_classes.size())
      throw Error(Errc::InconsistentResult, "match index out of range");
    gt_classes[m.gt_index] = {NoteStatus::Correct, m.offset};
    rec_classes[m.rec_index] = {NoteStatus::Correct, m.offset};
  }
  for (std::size_t i : result.missing)
    if (i >= gt_classes.size())
      throw Error(Errc::InconsistentResult, "missing index out of range");
  for (std::size_t j : result.surplus)
    if (j >= rec_classes.size())
      throw Error(Errc::InconsistentResult, "surplus index out of range");
  return {std::move(gt_classes), std::move(rec_classes)};
}

Recording align_recording(const score::GroundTruth& gt, const Recording& rec,
                          AlignMode mode, double tolerance) {
  if (mode == AlignMode::none) return rec;

  MatchResult provisional = match_recording(gt, rec, tolerance);
  if (provisional.matches.empty())
    throw Error(Errc::NoMatches, "cannot align: provisional match is empty");

  std::vector<double> offsets;
  offsets.reserve(provisional.matches.size());
  for (const NoteMatch& m : provisional.matches) offsets.push_back(m.offset);
  std::sort(offsets.begin(), offsets.end());
  const std::size_t n = offsets.size();
  const double median =
      n % 2 == 1 ? offsets[n / 2] : 0.5 * (offsets[n / 2 - 1] + offsets[n / 2]);

  Recording shifted = rec;
  for (Note& note : shifted.notes) note.onset = std::max(0.0, note.onset - median);
  sort_notes(shifted.notes);
  return shifted;
}

}  // namespace drumscope::matching
