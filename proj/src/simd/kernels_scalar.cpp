#include "kramers/simd/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace kramers::simd {
namespace {

void gemm(std::size_t n, const cplx* a, const cplx* b, cplx* c) {
  for (std::size_t j = 0; j < n; ++j) {
    cplx* cj = c + j * n;
    std::fill(cj, cj + n, cplx{});
    for (std::size_t k = 0; k < n; ++k) {
      const cplx bkj = b[j * n + k];
      const cplx* ak = a + k * n;
      for (std::size_t i = 0; i < n; ++i) cj[i] += ak[i] * bkj;
    }
  }
}

void gemm_adjoint_rhs(std::size_t n, const cplx* a, const cplx* b, cplx* c) {
  for (std::size_t j = 0; j < n; ++j) {
    cplx* cj = c + j * n;
    std::fill(cj, cj + n, cplx{});
    for (std::size_t k = 0; k < n; ++k) {
      const cplx bjk = std::conj(b[k * n + j]);
      const cplx* ak = a + k * n;
      for (std::size_t i = 0; i < n; ++i) cj[i] += ak[i] * bjk;
    }
  }
}

void scale_columns(std::size_t n, const cplx* a, const cplx* d, cplx* out) {
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) out[j * n + i] = a[j * n + i] * d[j];
}

void axpy(std::size_t len, double alpha, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < len; ++i) y[i] += alpha * x[i];
}

double max_abs_diff(std::size_t len, const cplx* x, const cplx* y) {
  double m = 0.0;
  for (std::size_t i = 0; i < len; ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

constexpr KernelTable kTable{Isa::Scalar, "scalar", gemm, gemm_adjoint_rhs,
                             scale_columns, axpy, max_abs_diff};

}  // namespace

const KernelTable& scalar_kernels() { return kTable; }

}  // namespace kramers::simd
