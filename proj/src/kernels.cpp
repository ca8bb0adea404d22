#include "drumscope/kernels.hpp"

#include <atomic>

namespace drumscope::kernels {

namespace {
std::atomic<bool> g_force_scalar{false};
}

bool avx2_supported() {
#if defined(DRUMSCOPE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

void set_force_scalar(bool force) { g_force_scalar.store(force); }

const char* backend_name() {
  if (!g_force_scalar.load() && avx2_supported()) return "avx2";
  return "scalar";
}

void gaussian_density(std::span<const double> samples, double bandwidth,
                      double grid_start, double grid_step, std::span<double> out) {
#if defined(DRUMSCOPE_HAVE_AVX2)
  if (!g_force_scalar.load() && avx2_supported()) {
    gaussian_density_avx2(samples, bandwidth, grid_start, grid_step, out);
    return;
  }
#endif
  gaussian_density_scalar(samples, bandwidth, grid_start, grid_step, out);
}

}  // namespace drumscope::kernels
