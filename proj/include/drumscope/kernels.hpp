#pragma once

#include <span>

namespace drumscope::kernels {

// Gaussian kernel-sum over a uniform grid:
//   out[i] = 1/(n*h) * sum_j phi((x_i - s_j)/h),  x_i = grid_start + i*grid_step
// with phi the standard normal density. n == 0 writes all zeros.
//
// The scalar version is the reference semantics; SIMD variants must agree
// with it within tight floating tolerance (see tests).

void gaussian_density_scalar(std::span<const double> samples, double bandwidth,
                             double grid_start, double grid_step,
                             std::span<double> out);

#if defined(DRUMSCOPE_HAVE_AVX2)
void gaussian_density_avx2(std::span<const double> samples, double bandwidth,
                           double grid_start, double grid_step,
                           std::span<double> out);
#endif

/// Runtime-dispatched entry point (AVX2 when the CPU has it, else scalar).
void gaussian_density(std::span<const double> samples, double bandwidth,
                      double grid_start, double grid_step,
                      std::span<double> out);

bool avx2_supported();

/// Name of the backend gaussian_density() currently dispatches to.
const char* backend_name();

/// Force the scalar reference path (testing/debugging hook).
void set_force_scalar(bool force);

}  // namespace drumscope::kernels
