// AVX2 variants. This translation unit is compiled with -mavx2 and only
// entered after a runtime CPU check.

#include "cfp/simd/kernels.hpp"

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace cfp::simd {
namespace {

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

template <class Op>
inline void binary(const double* a, const double* b, double* out, std::size_t n, Op op) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, op(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) {
    __m256d r = op(_mm256_set1_pd(a[i]), _mm256_set1_pd(b[i]));
    out[i] = _mm256_cvtsd_f64(r);
  }
}

template <class Op>
inline void with_scalar(const double* a, double c, double* out, std::size_t n, Op op) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, op(_mm256_loadu_pd(a + i), vc));
  for (; i < n; ++i) out[i] = _mm256_cvtsd_f64(op(_mm256_set1_pd(a[i]), vc));
}

void add_v(const double* a, const double* b, double* out, std::size_t n) {
  binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_add_pd(x, y); });
}
void sub_v(const double* a, const double* b, double* out, std::size_t n) {
  binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_sub_pd(x, y); });
}
void mul_v(const double* a, const double* b, double* out, std::size_t n) {
  binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_mul_pd(x, y); });
}
void div_v(const double* a, const double* b, double* out, std::size_t n) {
  binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_div_pd(x, y); });
}
void add_scalar_v(const double* a, double c, double* out, std::size_t n) {
  with_scalar(a, c, out, n, [](__m256d x, __m256d k) { return _mm256_add_pd(x, k); });
}
void mul_scalar_v(const double* a, double c, double* out, std::size_t n) {
  with_scalar(a, c, out, n, [](__m256d x, __m256d k) { return _mm256_mul_pd(x, k); });
}
void rsub_scalar_v(const double* a, double c, double* out, std::size_t n) {
  with_scalar(a, c, out, n, [](__m256d x, __m256d k) { return _mm256_sub_pd(k, x); });
}
void rdiv_scalar_v(const double* a, double c, double* out, std::size_t n) {
  with_scalar(a, c, out, n, [](__m256d x, __m256d k) { return _mm256_div_pd(k, x); });
}
void abs_diff_v(const double* a, const double* b, double* out, std::size_t n) {
  binary(a, b, out, n, [](__m256d x, __m256d y) { return abs_pd(_mm256_sub_pd(x, y)); });
}
void abs_diff_scalar_v(const double* a, double c, double* out, std::size_t n) {
  with_scalar(a, c, out, n, [](__m256d x, __m256d k) { return abs_pd(_mm256_sub_pd(x, k)); });
}

double max_abs_diff_v(const double* a, const double* b, std::size_t n) {
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    best = _mm256_max_pd(best, abs_pd(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i))));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best);
  double r = 0.0;
  for (double v : lanes)
    if (v > r) r = v;
  for (; i < n; ++i) {
    double d = std::fabs(a[i] - b[i]);
    if (d > r) r = d;
  }
  return r;
}

MinLoc min_loc_v(const double* a, std::size_t n) {
  double m = std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (n >= 4) {
    __m256d vm = _mm256_set1_pd(m);
    for (; i + 4 <= n; i += 4) vm = _mm256_min_pd(vm, _mm256_loadu_pd(a + i));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vm);
    for (double v : lanes)
      if (v < m) m = v;
  }
  for (; i < n; ++i)
    if (a[i] < m) m = a[i];
  // First index equal to the minimum, matching the scalar scan.
  const __m256d target = _mm256_set1_pd(m);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    int bits = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(a + j), target, _CMP_EQ_OQ));
    if (bits) {
      std::size_t k = j + static_cast<std::size_t>(__builtin_ctz(static_cast<unsigned>(bits)));
      return {a[k], k};
    }
  }
  for (; j < n; ++j)
    if (a[j] == m) return {a[j], j};
  return {m, 0};
}

std::size_t count_zero_v(const double* a, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    c += static_cast<std::size_t>(
        __builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(a + i), zero, _CMP_EQ_OQ)))));
  for (; i < n; ++i) c += a[i] == 0.0;
  return c;
}

void interval_mask_v(const double* a, std::size_t n, double lo, double hi, bool lo_closed, bool hi_closed,
                     std::uint8_t* mask) {
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_loadu_pd(a + i);
    __m256d above = lo_closed ? _mm256_cmp_pd(x, vlo, _CMP_GE_OQ) : _mm256_cmp_pd(x, vlo, _CMP_GT_OQ);
    __m256d below = hi_closed ? _mm256_cmp_pd(x, vhi, _CMP_LE_OQ) : _mm256_cmp_pd(x, vhi, _CMP_LT_OQ);
    int bits = _mm256_movemask_pd(_mm256_and_pd(above, below));
    for (int k = 0; k < 4; ++k) mask[i + static_cast<std::size_t>(k)] = static_cast<std::uint8_t>((bits >> k) & 1);
  }
  for (; i < n; ++i) {
    const bool above = lo_closed ? a[i] >= lo : a[i] > lo;
    const bool below = hi_closed ? a[i] <= hi : a[i] < hi;
    mask[i] = above && below;
  }
}

}  // namespace

const KernelTable& avx2_table_impl() {
  static const KernelTable table{
      "avx2",        add_v,         sub_v,         mul_v,      div_v,             add_scalar_v,
      mul_scalar_v,  rsub_scalar_v, rdiv_scalar_v, abs_diff_v, abs_diff_scalar_v, max_abs_diff_v,
      min_loc_v,     count_zero_v,  interval_mask_v,
  };
  return table;
}

}  // namespace cfp::simd
