#include "drumscope/stats.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "drumscope/error.hpp"
#include "drumscope/gm_percussion.hpp"
#include "drumscope/kernels.hpp"

namespace drumscope::stats {

namespace {

constexpr double kBandwidthFloor = 0.001; // 1 ms

double resolve_bandwidth(std::span<const double> samples, const BandwidthPolicy& policy) {
  if (policy.mode == BandwidthPolicy::Mode::fixed) return policy.fixed_bandwidth;
  try {
    return silverman_bandwidth(samples);
  } catch (const Error& e) {
    if (e.code() != Errc::DegenerateSamples) throw;
    return policy.fallback_bandwidth;
  }
}

}  // namespace

double mean_of(std::span<const double> xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}

double population_stddev(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  const double m = mean_of(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(xs.size()));
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) return 0.0;
  if (sorted.size() == 1) return sorted[0];
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

DensityCurve kde(std::span<const double> samples, double bandwidth, const GridSpec& grid) {
  if (bandwidth <= 0.0) throw Error(Errc::BadConfig, "kde bandwidth must be positive");
  if (grid.count > 1 && grid.step <= 0.0)
    throw Error(Errc::BadConfig, "kde grid step must be positive");
  DensityCurve curve;
  curve.grid_start = grid.start;
  curve.grid_step = grid.step;
  curve.bandwidth = bandwidth;
  curve.sample_count = samples.size();
  curve.values.resize(grid.count);
  kernels::gaussian_density(samples, bandwidth, grid.start, grid.step, curve.values);
  return curve;
}

double silverman_bandwidth(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw Error(Errc::DegenerateSamples, "need at least two samples");
  const double sigma = population_stddev(samples);
  if (sigma == 0.0) throw Error(Errc::DegenerateSamples, "samples have zero spread");

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);

  const double spread = std::min(sigma, iqr / 1.34);
  const double h = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
  return std::max(h, kBandwidthFloor);
}

double trapezoid_integral(const DensityCurve& curve) {
  double acc = 0.0;
  for (std::size_t i = 1; i < curve.values.size(); ++i)
    acc += 0.5 * (curve.values[i - 1] + curve.values[i]) * curve.grid_step;
  return acc;
}

std::map<int, DensityCurve> onset_density_per_pitch(
    const std::vector<matching::Recording>& recordings, const score::GroundTruth& gt,
    const BandwidthPolicy& policy) {
  std::set<int> pitches;
  for (const Note& n : gt.notes) pitches.insert(n.pitch);
  for (const auto& rec : recordings)
    for (const Note& n : rec.notes) pitches.insert(n.pitch);

  const std::size_t points = std::max<std::size_t>(policy.grid_points, 1000);
  GridSpec grid{0.0, gt.total_duration / static_cast<double>(points - 1), points};

  std::map<int, DensityCurve> out;
  for (int pitch : pitches) {
    std::vector<double> onsets;
    for (const auto& rec : recordings)
      for (const Note& n : rec.notes)
        if (n.pitch == pitch) onsets.push_back(n.onset);
    std::sort(onsets.begin(), onsets.end()); // canonical pooling order
    const double h = onsets.empty() ? policy.fallback_bandwidth : resolve_bandwidth(onsets, policy);
    out.emplace(pitch, kde(onsets, h, grid));
  }
  return out;
}

std::map<int, PitchSummary> offset_distribution_per_pitch(
    const std::vector<matching::MatchResult>& results, const score::GroundTruth& gt,
    const BandwidthPolicy& policy, const std::map<int, std::string>& label_overrides) {
  std::map<int, std::size_t> gt_count;
  for (const Note& n : gt.notes) ++gt_count[n.pitch];

  std::map<int, std::vector<double>> pooled;
  for (const auto& result : results)
    for (const matching::NoteMatch& m : result.matches)
      pooled[gt.notes[m.gt_index].pitch].push_back(m.offset);

  std::map<int, PitchSummary> out;
  for (const auto& [pitch, total] : gt_count) {
    PitchSummary summary;
    summary.pitch = pitch;
    summary.label = gm::label_for_pitch(pitch, label_overrides);

    auto it = pooled.find(pitch);
    if (it != pooled.end()) summary.offsets = std::move(it->second);
    std::sort(summary.offsets.begin(), summary.offsets.end());

    const std::size_t denom = total * results.size();
    summary.hit_rate =
        denom == 0 ? 0.0 : static_cast<double>(summary.offsets.size()) / static_cast<double>(denom);

    if (!summary.offsets.empty()) {
      summary.mean = mean_of(summary.offsets);
      summary.stddev = population_stddev(summary.offsets);
    }

    const double h = summary.offsets.empty() ? policy.fallback_bandwidth
                                             : resolve_bandwidth(summary.offsets, policy);
    const double lo = (summary.offsets.empty() ? 0.0 : summary.offsets.front()) - 4.0 * h;
    const double hi = (summary.offsets.empty() ? 0.0 : summary.offsets.back()) + 4.0 * h;
    const std::size_t points = std::max<std::size_t>(policy.grid_points, 2);
    GridSpec grid{lo, (hi - lo) / static_cast<double>(points - 1), points};
    summary.curve = kde(summary.offsets, h, grid);

    out.emplace(pitch, std::move(summary));
  }
  return out;
}

std::vector<NoteAggregate> per_note_aggregate(
    const std::vector<matching::MatchResult>& results, const score::GroundTruth& gt) {
  std::vector<NoteAggregate> out(gt.notes.size());
  std::vector<double> abs_sum(gt.notes.size(), 0.0), signed_sum(gt.notes.size(), 0.0);

  for (const auto& result : results) {
    for (const matching::NoteMatch& m : result.matches) {
      if (m.gt_index >= out.size())
        throw Error(Errc::InconsistentResult, "match index out of range");
      ++out[m.gt_index].match_count;
      abs_sum[m.gt_index] += std::abs(m.offset);
      signed_sum[m.gt_index] += m.offset;
    }
  }

  const int rec_count = static_cast<int>(results.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    NoteAggregate& a = out[i];
    a.gt_index = i;
    a.recording_count = rec_count;
    if (a.match_count > 0) {
      a.mean_abs_offset = abs_sum[i] / a.match_count;
      a.mean_signed_offset = signed_sum[i] / a.match_count;
    }
    a.miss_fraction =
        rec_count == 0 ? 0.0 : 1.0 - static_cast<double>(a.match_count) / rec_count;
  }
  return out;
}

}  // namespace drumscope::stats
