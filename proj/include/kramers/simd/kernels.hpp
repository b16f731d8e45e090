#pragma once

// Dense complex kernels used in the propagation inner loop.
//
// Every matrix argument is a square n x n block stored column-major with
// interleaved (re, im) doubles, which is the layout of Eigen::MatrixXcd and
// of std::complex<double> arrays. A scalar reference implementation is always
// available; ISA-specific variants are selected once at runtime.

#include <complex>
#include <cstddef>
#include <string_view>

namespace kramers::simd {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
  Isa isa;
  const char* name;
  // c = a * b
  void (*gemm)(std::size_t n, const cplx* a, const cplx* b, cplx* c);
  // c = a * b^H
  void (*gemm_adjoint_rhs)(std::size_t n, const cplx* a, const cplx* b, cplx* c);
  // out(:, j) = a(:, j) * d[j]
  void (*scale_columns)(std::size_t n, const cplx* a, const cplx* d, cplx* out);
  // y += alpha * x over len complex entries
  void (*axpy)(std::size_t len, double alpha, const cplx* x, cplx* y);
  // max_i |x_i - y_i| over len complex entries
  double (*max_abs_diff)(std::size_t len, const cplx* x, const cplx* y);
};

const KernelTable& scalar_kernels();

/// nullptr when the variant was not compiled into this build.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

/// True when the variant is compiled in and the running CPU can execute it.
bool available(Isa isa);

/// The table used by the library. Picks the widest available ISA unless the
/// KRAMERS_LZ_SIMD environment variable names another one (scalar|avx2|neon).
const KernelTable& active_kernels();

/// Forces a table for the rest of the process (tests, benchmarks).
/// Throws kramers::InvalidInput if the ISA is not available.
void select(Isa isa);

std::string_view to_string(Isa isa);

}  // namespace kramers::simd
