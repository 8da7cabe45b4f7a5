#include "cfp/simd/kernels.hpp"

#include <cmath>
#include <limits>

namespace cfp::simd {
namespace {

void add_s(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}
void sub_s(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}
void mul_s(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}
void div_s(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] / b[i];
}
void add_scalar_s(const double* a, double c, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + c;
}
void mul_scalar_s(const double* a, double c, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * c;
}
void rsub_scalar_s(const double* a, double c, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = c - a[i];
}
void rdiv_scalar_s(const double* a, double c, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = c / a[i];
}
void abs_diff_s(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(a[i] - b[i]);
}
void abs_diff_scalar_s(const double* a, double c, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(a[i] - c);
}

double max_abs_diff_s(const double* a, const double* b, std::size_t n) {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = std::fabs(a[i] - b[i]);
    if (d > best) best = d;
  }
  return best;
}

MinLoc min_loc_s(const double* a, std::size_t n) {
  MinLoc r{std::numeric_limits<double>::infinity(), 0};
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] < r.value) r = {a[i], i};
  }
  return r;
}

std::size_t count_zero_s(const double* a, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += a[i] == 0.0;
  return c;
}

void interval_mask_s(const double* a, std::size_t n, double lo, double hi, bool lo_closed, bool hi_closed,
                     std::uint8_t* mask) {
  for (std::size_t i = 0; i < n; ++i) {
    const bool above = lo_closed ? a[i] >= lo : a[i] > lo;
    const bool below = hi_closed ? a[i] <= hi : a[i] < hi;
    mask[i] = above && below;
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{
      "scalar",      add_s,     sub_s,          mul_s,         div_s,           add_scalar_s,
      mul_scalar_s,  rsub_scalar_s, rdiv_scalar_s, abs_diff_s, abs_diff_scalar_s, max_abs_diff_s,
      min_loc_s,     count_zero_s,  interval_mask_s,
  };
  return table;
}

}  // namespace cfp::simd
