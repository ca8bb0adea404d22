#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "drumscope/matching.hpp"
#include "drumscope/score.hpp"

namespace drumscope::simulator {

struct ErrorModel {
  std::map<int, double> per_pitch_bias; // seconds, absent pitch -> 0
  double jitter_sd = 0.0;               // seconds, >= 0
  double miss_probability = 0.0;        // [0, 1)
  double insertion_rate = 0.0;          // expected surplus notes per second
  std::uint64_t seed = 0;
};

/// One synthetic take: per gt note, drop with miss_probability, else shift the
/// onset by bias(pitch) + Normal(0, jitter_sd) clamped at 0; surplus notes are
/// a Poisson process over [0, total_duration] with pitches drawn uniformly
/// from the gt pitch set. Deterministic given model.seed.
matching::Recording simulate_recording(const score::GroundTruth& gt, const ErrorModel& model);

/// n takes with per-take seeds model.seed + take index, ids "take-001"...
std::vector<matching::Recording> simulate_session(const score::GroundTruth& gt,
                                                  const ErrorModel& model, std::size_t n);

}  // namespace drumscope::simulator
