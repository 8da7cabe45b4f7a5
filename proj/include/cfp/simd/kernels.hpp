#pragma once

// Elementwise and reduction kernels over double arrays used by the sampled
// checks. Every kernel has a scalar reference; an AVX2 variant is selected at
// runtime when the CPU supports it. Variants agree bit for bit: no FMA, no
// reassociation of reductions whose result depends on order.

#include <cstddef>
#include <cstdint>
#include <span>

namespace cfp::simd {

struct MinLoc {
  double value;
  std::size_t index;  // first index attaining the minimum
};

struct KernelTable {
  const char* name;

  void (*add)(const double* a, const double* b, double* out, std::size_t n);
  void (*sub)(const double* a, const double* b, double* out, std::size_t n);
  void (*mul)(const double* a, const double* b, double* out, std::size_t n);
  void (*div)(const double* a, const double* b, double* out, std::size_t n);

  void (*add_scalar)(const double* a, double c, double* out, std::size_t n);   // a + c
  void (*mul_scalar)(const double* a, double c, double* out, std::size_t n);   // a * c
  void (*rsub_scalar)(const double* a, double c, double* out, std::size_t n);  // c - a
  void (*rdiv_scalar)(const double* a, double c, double* out, std::size_t n);  // c / a

  void (*abs_diff)(const double* a, const double* b, double* out, std::size_t n);
  void (*abs_diff_scalar)(const double* a, double c, double* out, std::size_t n);  // |a - c|

  double (*max_abs_diff)(const double* a, const double* b, std::size_t n);  // sup distance
  MinLoc (*min_loc)(const double* a, std::size_t n);
  std::size_t (*count_zero)(const double* a, std::size_t n);

  /// mask[i] = lo <op> a[i] <op> hi, with <= or < per closedness; infinite
  /// bounds are passed as ±inf.
  void (*interval_mask)(const double* a, std::size_t n, double lo, double hi, bool lo_closed, bool hi_closed,
                        std::uint8_t* mask);
};

const KernelTable& scalar_kernels();
/// nullptr when not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_kernels();
/// AVX2 when available unless CFP_SIMD=scalar is set in the environment.
const KernelTable& active_kernels();

// Span front ends over the active table.
void add(std::span<const double> a, std::span<const double> b, std::span<double> out);
void sub(std::span<const double> a, std::span<const double> b, std::span<double> out);
void mul(std::span<const double> a, std::span<const double> b, std::span<double> out);
void div(std::span<const double> a, std::span<const double> b, std::span<double> out);
void abs_diff_scalar(std::span<const double> a, double c, std::span<double> out);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
MinLoc min_loc(std::span<const double> a);

}  // namespace cfp::simd
