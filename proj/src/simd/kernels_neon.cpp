// NEON (aarch64) variants. One float64x2_t holds one complex number.

#include "kramers/simd/kernels.hpp"

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

namespace kramers::simd {
namespace {

inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }

// (ar, ai) * (br, bi) = (ar br - ai bi, ai br + ar bi)
inline float64x2_t cmul(float64x2_t a, double br, double bi) {
  static const double kSign[2] = {-1.0, 1.0};
  const float64x2_t swapped = vextq_f64(a, a, 1);
  const float64x2_t t = vmulq_f64(vmulq_n_f64(swapped, bi), vld1q_f64(kSign));
  return vfmaq_n_f64(t, a, br);
}

void combine(std::size_t n, const cplx* a, const cplx* s, bool conj_s, cplx* c) {
  for (std::size_t i = 0; i < n; ++i) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double sr = s[k].real();
      const double si = conj_s ? -s[k].imag() : s[k].imag();
      acc = vaddq_f64(acc, cmul(vld1q_f64(as_doubles(a + k * n + i)), sr, si));
    }
    vst1q_f64(as_doubles(c + i), acc);
  }
}

void gemm(std::size_t n, const cplx* a, const cplx* b, cplx* c) {
  for (std::size_t j = 0; j < n; ++j) combine(n, a, b + j * n, false, c + j * n);
}

void gemm_adjoint_rhs(std::size_t n, const cplx* a, const cplx* b, cplx* c) {
  cplx row[64];
  if (n > 64) return scalar_kernels().gemm_adjoint_rhs(n, a, b, c);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) row[k] = b[k * n + j];
    combine(n, a, row, true, c + j * n);
  }
}

void scale_columns(std::size_t n, const cplx* a, const cplx* d, cplx* out) {
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      vst1q_f64(as_doubles(out + j * n + i),
                cmul(vld1q_f64(as_doubles(a + j * n + i)), d[j].real(), d[j].imag()));
}

void axpy(std::size_t len, double alpha, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < len; ++i) {
    double* yi = as_doubles(y + i);
    vst1q_f64(yi, vfmaq_n_f64(vld1q_f64(yi), vld1q_f64(as_doubles(x + i)), alpha));
  }
}

double max_abs_diff(std::size_t len, const cplx* x, const cplx* y) {
  double m2 = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const float64x2_t d = vsubq_f64(vld1q_f64(as_doubles(x + i)), vld1q_f64(as_doubles(y + i)));
    m2 = std::max(m2, vaddvq_f64(vmulq_f64(d, d)));
  }
  return std::sqrt(m2);
}

constexpr KernelTable kTable{Isa::Neon, "neon", gemm, gemm_adjoint_rhs,
                             scale_columns, axpy, max_abs_diff};

}  // namespace

const KernelTable* neon_kernels() { return &kTable; }

}  // namespace kramers::simd
