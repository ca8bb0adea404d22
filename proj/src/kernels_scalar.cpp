#include <cmath>
#include <numbers>

#include "drumscope/kernels.hpp"

namespace drumscope::kernels {

void gaussian_density_scalar(std::span<const double> samples, double bandwidth,
                             double grid_start, double grid_step,
                             std::span<double> out) {
  const std::size_t n = samples.size();
  if (n == 0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const double inv_h = 1.0 / bandwidth;
  const double norm = inv_h / (static_cast<double>(n) * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = grid_start + static_cast<double>(i) * grid_step;
    double acc = 0.0;
    for (double s : samples) {
      const double t = (x - s) * inv_h;
      acc += std::exp(-0.5 * t * t);
    }
    out[i] = acc * norm;
  }
}

}  // namespace drumscope::kernels
