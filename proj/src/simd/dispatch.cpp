#include "cfp/simd/kernels.hpp"

#include <cassert>
#include <cstdlib>
#include <cstring>

namespace cfp::simd {

#ifdef CFP_HAVE_AVX2
const KernelTable& avx2_table_impl();
#endif

const KernelTable* avx2_kernels() {
#ifdef CFP_HAVE_AVX2
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &avx2_table_impl() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() {
  static const KernelTable& table = [&]() -> const KernelTable& {
    const char* env = std::getenv("CFP_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return *t;
    return scalar_kernels();
  }();
  return table;
}

void add(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  assert(a.size() == b.size() && out.size() >= a.size());
  active_kernels().add(a.data(), b.data(), out.data(), a.size());
}

void sub(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  assert(a.size() == b.size() && out.size() >= a.size());
  active_kernels().sub(a.data(), b.data(), out.data(), a.size());
}

void mul(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  assert(a.size() == b.size() && out.size() >= a.size());
  active_kernels().mul(a.data(), b.data(), out.data(), a.size());
}

void div(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  assert(a.size() == b.size() && out.size() >= a.size());
  active_kernels().div(a.data(), b.data(), out.data(), a.size());
}

void abs_diff_scalar(std::span<const double> a, double c, std::span<double> out) {
  assert(out.size() >= a.size());
  active_kernels().abs_diff_scalar(a.data(), c, out.data(), a.size());
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return active_kernels().max_abs_diff(a.data(), b.data(), a.size());
}

MinLoc min_loc(std::span<const double> a) { return active_kernels().min_loc(a.data(), a.size()); }

}  // namespace cfp::simd
