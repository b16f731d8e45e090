#include "kramers/linalg.hpp"

#include "kramers/error.hpp"
#include "kramers/simd/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace kramers {
namespace {

void require_square_same(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw InvalidInput(std::string(what) + ": dimension mismatch");
}

}  // namespace

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InvalidInput("max_abs_diff: dimension mismatch");
  return simd::active_kernels().max_abs_diff(static_cast<std::size_t>(a.size()), a.data(), b.data());
}

double max_abs(const ComplexMatrix& a) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i]));
  return m;
}

double hermitian_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidInput("hermitian_defect: matrix is not square");
  const ComplexMatrix adj = a.adjoint();
  return max_abs_diff(a, adj);
}

double unitarity_defect(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) throw InvalidInput("unitarity_defect: matrix is not square");
  const ComplexMatrix gram = u.adjoint() * u;
  return max_abs_diff(gram, ComplexMatrix::Identity(u.rows(), u.cols()));
}

void multiply(const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& out) {
  require_square_same(a, b, "multiply");
  out.resize(a.rows(), a.cols());
  simd::active_kernels().gemm(static_cast<std::size_t>(a.rows()), a.data(), b.data(), out.data());
}

void multiply_adjoint(const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& out) {
  require_square_same(a, b, "multiply_adjoint");
  out.resize(a.rows(), a.cols());
  simd::active_kernels().gemm_adjoint_rhs(static_cast<std::size_t>(a.rows()), a.data(), b.data(),
                                          out.data());
}

ComplexMatrix expm_hermitian(const ComplexMatrix& h, Complex scale) {
  if (h.rows() != h.cols()) throw InvalidInput("expm_hermitian: matrix is not square");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition failed", 0.0, 0.0);
  const auto& w = solver.eigenvalues();
  Eigen::VectorXcd d(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) d[k] = std::exp(scale * w[k]);
  const ComplexMatrix& v = solver.eigenvectors();
  ComplexMatrix scaled(h.rows(), h.cols());
  simd::active_kernels().scale_columns(static_cast<std::size_t>(h.rows()), v.data(), d.data(),
                                       scaled.data());
  ComplexMatrix out;
  multiply_adjoint(scaled, v, out);
  return out;
}

UnitaryStep::UnitaryStep(Eigen::Index dim)
    : solver_(dim), phases_(dim), scaled_(dim, dim) {}

void UnitaryStep::compute(const ComplexMatrix& h, double dt, ComplexMatrix& out) {
  solver_.compute(h);
  if (solver_.info() != Eigen::Success) throw NumericalError("eigendecomposition failed", 0.0, 0.0);
  const auto& w = solver_.eigenvalues();
  for (Eigen::Index k = 0; k < w.size(); ++k) phases_[k] = std::polar(1.0, -w[k] * dt);
  const auto n = static_cast<std::size_t>(h.rows());
  const ComplexMatrix& v = solver_.eigenvectors();
  simd::active_kernels().scale_columns(n, v.data(), phases_.data(), scaled_.data());
  out.resize(h.rows(), h.cols());
  simd::active_kernels().gemm_adjoint_rhs(n, scaled_.data(), v.data(), out.data());
}

}  // namespace kramers
