// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after the runtime CPU check in dispatch.cpp.

#include "kramers/simd/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace kramers::simd {
namespace {

inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }

// Swaps re/im inside each 128-bit lane: (re0, im0, re1, im1) -> (im0, re0, im1, re1).
inline __m256d swap_pairs(__m256d v) { return _mm256_permute_pd(v, 0b0101); }
inline __m128d swap_pair(__m128d v) { return _mm_permute_pd(v, 0b01); }

// c(:, j) = sum_k a(:, k) * s_k where s_k = (sr[k], si[k]). The real and
// imaginary contributions are accumulated separately and merged once with
// addsub, which keeps the inner loop at two FMAs per complex pair.
inline void column_combination(std::size_t n, const double* a, const double* sr,
                               const double* si, double* c) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d acc_r = _mm256_setzero_pd();
    __m256d acc_i = _mm256_setzero_pd();
    for (std::size_t k = 0; k < n; ++k) {
      const __m256d av = _mm256_loadu_pd(a + 2 * (k * n + i));
      acc_r = _mm256_fmadd_pd(av, _mm256_set1_pd(sr[k]), acc_r);
      acc_i = _mm256_fmadd_pd(swap_pairs(av), _mm256_set1_pd(si[k]), acc_i);
    }
    _mm256_storeu_pd(c + 2 * i, _mm256_addsub_pd(acc_r, acc_i));
  }
  if (i < n) {
    __m128d acc_r = _mm_setzero_pd();
    __m128d acc_i = _mm_setzero_pd();
    for (std::size_t k = 0; k < n; ++k) {
      const __m128d av = _mm_loadu_pd(a + 2 * (k * n + i));
      acc_r = _mm_fmadd_pd(av, _mm_set1_pd(sr[k]), acc_r);
      acc_i = _mm_fmadd_pd(swap_pair(av), _mm_set1_pd(si[k]), acc_i);
    }
    _mm_storeu_pd(c + 2 * i, _mm_addsub_pd(acc_r, acc_i));
  }
}

constexpr std::size_t kMaxStackDim = 64;

void gemm(std::size_t n, const cplx* a, const cplx* b, cplx* c) {
  double sr[kMaxStackDim];
  double si[kMaxStackDim];
  if (n > kMaxStackDim) return scalar_kernels().gemm(n, a, b, c);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      sr[k] = b[j * n + k].real();
      si[k] = b[j * n + k].imag();
    }
    column_combination(n, as_doubles(a), sr, si, as_doubles(c + j * n));
  }
}

void gemm_adjoint_rhs(std::size_t n, const cplx* a, const cplx* b, cplx* c) {
  double sr[kMaxStackDim];
  double si[kMaxStackDim];
  if (n > kMaxStackDim) return scalar_kernels().gemm_adjoint_rhs(n, a, b, c);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      sr[k] = b[k * n + j].real();
      si[k] = -b[k * n + j].imag();
    }
    column_combination(n, as_doubles(a), sr, si, as_doubles(c + j * n));
  }
}

void scale_columns(std::size_t n, const cplx* a, const cplx* d, cplx* out) {
  const double* ad = as_doubles(a);
  double* od = as_doubles(out);
  for (std::size_t j = 0; j < n; ++j) {
    const __m256d dr = _mm256_set1_pd(d[j].real());
    const __m256d di = _mm256_set1_pd(d[j].imag());
    const double* col = ad + 2 * j * n;
    double* dst = od + 2 * j * n;
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
      const __m256d av = _mm256_loadu_pd(col + 2 * i);
      const __m256d t = _mm256_mul_pd(swap_pairs(av), di);
      _mm256_storeu_pd(dst + 2 * i, _mm256_fmaddsub_pd(av, dr, t));
    }
    if (i < n) {
      const __m128d av = _mm_loadu_pd(col + 2 * i);
      const __m128d t = _mm_mul_pd(swap_pair(av), _mm256_castpd256_pd128(di));
      _mm_storeu_pd(dst + 2 * i, _mm_fmaddsub_pd(av, _mm256_castpd256_pd128(dr), t));
    }
  }
}

void axpy(std::size_t len, double alpha, const cplx* x, cplx* y) {
  const double* xd = as_doubles(x);
  double* yd = as_doubles(y);
  const std::size_t count = 2 * len;
  const __m256d av = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4)
    _mm256_storeu_pd(yd + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(xd + i), _mm256_loadu_pd(yd + i)));
  for (; i < count; ++i) yd[i] = std::fma(alpha, xd[i], yd[i]);
}

double max_abs_diff(std::size_t len, const cplx* x, const cplx* y) {
  const double* xd = as_doubles(x);
  const double* yd = as_doubles(y);
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(xd + 2 * i), _mm256_loadu_pd(yd + 2 * i));
    const __m256d sq = _mm256_mul_pd(d, d);
    best = _mm256_max_pd(best, _mm256_hadd_pd(sq, sq));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best);
  double m2 = std::max(lanes[0], lanes[2]);
  for (; i < len; ++i) m2 = std::max(m2, std::norm(x[i] - y[i]));
  return std::sqrt(m2);
}

constexpr KernelTable kTable{Isa::Avx2, "avx2", gemm, gemm_adjoint_rhs,
                             scale_columns, axpy, max_abs_diff};

}  // namespace

const KernelTable* avx2_kernels() { return &kTable; }

}  // namespace kramers::simd
