#pragma once

#include <Eigen/Dense>

#include <complex>

namespace kramers {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// max_ij |a_ij - b_ij|; dimensions must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// max_ij |a_ij|.
double max_abs(const ComplexMatrix& a);

/// max_ij |a_ij - conj(a_ji)|.
double hermitian_defect(const ComplexMatrix& a);

/// max_ij |(u^H u - I)_ij|.
double unitarity_defect(const ComplexMatrix& u);

/// out = a * b through the active SIMD kernel table. out must not alias a or b.
void multiply(const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& out);

/// out = a * b^H through the active SIMD kernel table.
void multiply_adjoint(const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& out);

/// exp(scale * h) for Hermitian h via eigendecomposition h = V diag(w) V^H.
ComplexMatrix expm_hermitian(const ComplexMatrix& h, Complex scale);

/// Reusable workspace for exp(-i h dt) of Hermitian h at fixed dimension.
/// The eigenvector basis makes every result unitary to rounding.
class UnitaryStep {
 public:
  explicit UnitaryStep(Eigen::Index dim);

  /// Writes exp(-i h dt) into out.
  void compute(const ComplexMatrix& h, double dt, ComplexMatrix& out);

 private:
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver_;
  Eigen::VectorXcd phases_;
  ComplexMatrix scaled_;
};

}  // namespace kramers
