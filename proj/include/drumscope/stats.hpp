#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "drumscope/matching.hpp"
#include "drumscope/score.hpp"

namespace drumscope::stats {

struct GridSpec {
  double start = 0.0;
  double step = 1.0; // > 0
  std::size_t count = 0;
};

/// Sampled kernel-density estimate; x_i = grid_start + i*grid_step.
struct DensityCurve {
  double grid_start = 0.0;
  double grid_step = 0.0;
  std::vector<double> values;
  double bandwidth = 0.0;
  std::size_t sample_count = 0;
};

struct BandwidthPolicy {
  enum class Mode { silverman, fixed };
  Mode mode = Mode::silverman;
  double fixed_bandwidth = 0.010;    // used when mode == fixed
  double fallback_bandwidth = 0.010; // used when Silverman degenerates
  std::size_t grid_points = 1000;
};

struct NoteAggregate {
  std::size_t gt_index = 0;
  int match_count = 0;
  int recording_count = 0;
  std::optional<double> mean_abs_offset;    // absent when never matched
  std::optional<double> mean_signed_offset; // absent when never matched
  double miss_fraction = 0.0;
};

struct PitchSummary {
  int pitch = 0;
  std::string label;
  std::vector<double> offsets; // pooled across recordings, sorted ascending
  DensityCurve curve;
  std::optional<double> mean;   // absent when offsets is empty
  std::optional<double> stddev; // population stddev, absent when offsets is empty
  double hit_rate = 0.0;
};

double mean_of(std::span<const double> xs);
double population_stddev(std::span<const double> xs);
/// Linear-interpolation quantile (type 7) over a sorted sample vector.
double quantile_sorted(std::span<const double> sorted, double q);

DensityCurve kde(std::span<const double> samples, double bandwidth, const GridSpec& grid);

/// h = 0.9 * min(sigma, IQR/1.34) * n^(-1/5), floored at 1 ms.
/// Throws DegenerateSamples for n < 2 or zero spread.
double silverman_bandwidth(std::span<const double> samples);

double trapezoid_integral(const DensityCurve& curve);

/// One curve over [0, total_duration] per pitch present in the ground truth
/// or any recording; recorded onsets pooled across recordings. The default
/// policy uses the fixed 10 ms bandwidth so individual hits stay resolved on
/// the piece timeline.
std::map<int, DensityCurve> onset_density_per_pitch(
    const std::vector<matching::Recording>& recordings, const score::GroundTruth& gt,
    const BandwidthPolicy& policy = {.mode = BandwidthPolicy::Mode::fixed});

/// Pooled signed offsets per ground-truth pitch with mean/stddev/hit rate and
/// a KDE over the offsets (Silverman by default).
std::map<int, PitchSummary> offset_distribution_per_pitch(
    const std::vector<matching::MatchResult>& results, const score::GroundTruth& gt,
    const BandwidthPolicy& policy = {},
    const std::map<int, std::string>& label_overrides = {});

std::vector<NoteAggregate> per_note_aggregate(
    const std::vector<matching::MatchResult>& results, const score::GroundTruth& gt);

}  // namespace drumscope::stats
