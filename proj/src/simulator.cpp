#include "drumscope/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "drumscope/error.hpp"
#include "drumscope/rng.hpp"

namespace drumscope::simulator {

namespace {

constexpr double kInsertedDuration = 0.1;
constexpr int kInsertedVelocity = 100;
constexpr int kInsertedChannel = 9;

void validate(const ErrorModel& model) {
  if (model.miss_probability < 0.0 || model.miss_probability >= 1.0)
    throw Error(Errc::BadConfig, "miss probability must lie in [0, 1)");
  if (model.jitter_sd < 0.0) throw Error(Errc::BadConfig, "jitter sd must be >= 0");
  if (model.insertion_rate < 0.0) throw Error(Errc::BadConfig, "insertion rate must be >= 0");
}

}  // namespace

matching::Recording simulate_recording(const score::GroundTruth& gt, const ErrorModel& model) {
  validate(model);
  rng::SplitMix64 rng(model.seed);

  matching::Recording rec;
  rec.id = "sim";

  // Draw discipline (pinned for reproducibility): per gt note one uniform for
  // the miss decision, then one for the jitter if the note survives.
  for (const Note& n : gt.notes) {
    const double u_miss = rng.next_unit();
    if (u_miss < model.miss_probability) continue;
    const double u_jitter = rng.next_unit();
    double bias = 0.0;
    if (auto it = model.per_pitch_bias.find(n.pitch); it != model.per_pitch_bias.end())
      bias = it->second;
    Note played = n;
    played.onset =
        std::max(0.0, n.onset + bias + model.jitter_sd * rng::normal_inv_cdf(u_jitter));
    rec.notes.push_back(played);
  }

  // surplus notes: Poisson process over the piece, one uniform per
  // exponential gap plus one per inserted pitch
  if (model.insertion_rate > 0.0) {
    std::set<int> pitch_set;
    for (const Note& n : gt.notes) pitch_set.insert(n.pitch);
    const std::vector<int> pitches(pitch_set.begin(), pitch_set.end());
    double t = 0.0;
    while (true) {
      t += -std::log(rng.next_unit()) / model.insertion_rate;
      if (t >= gt.total_duration) break;
      const double u_pitch = rng.next_unit();
      const std::size_t idx = std::min(
          static_cast<std::size_t>(u_pitch * static_cast<double>(pitches.size())),
          pitches.size() - 1);
      rec.notes.push_back(
          {pitches[idx], t, kInsertedDuration, kInsertedVelocity, kInsertedChannel});
    }
  }

  sort_notes(rec.notes);
  return rec;
}

std::vector<matching::Recording> simulate_session(const score::GroundTruth& gt,
                                                  const ErrorModel& model, std::size_t n) {
  if (n < 1) throw Error(Errc::BadConfig, "need at least one take");
  std::vector<matching::Recording> takes;
  takes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ErrorModel take_model = model;
    take_model.seed = model.seed + i;
    matching::Recording rec = simulate_recording(gt, take_model);
    char id[32];
    std::snprintf(id, sizeof id, "take-%03zu", i + 1);
    rec.id = id;
    takes.push_back(std::move(rec));
  }
  return takes;
}

}  // namespace drumscope::simulator
