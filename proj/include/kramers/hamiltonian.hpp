#pragma once

// Time-dependent spin Hamiltonians written as sums of
//   C(t) * S^{j1}_{a1} S^{j2}_{a2} ... S^{jn}_{an}
// with real polynomial coefficients C(t), plus the parity and time-reversal
// checks that decide whether the no-scattering result applies.

#include "kramers/linalg.hpp"
#include "kramers/spin_algebra.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace kramers {

enum class Parity { Zero, Even, Odd, Mixed };

const char* parity_name(Parity p);

struct Monomial {
  int power = 0;
  double coeff = 0.0;

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Real polynomial in t kept canonical: powers strictly increasing, no zero
/// coefficients.
class TimePolynomial {
 public:
  TimePolynomial() = default;
  TimePolynomial(std::initializer_list<Monomial> monomials);

  static TimePolynomial constant(double c) { return TimePolynomial{{0, c}}; }
  static TimePolynomial linear(double slope) { return TimePolynomial{{1, slope}}; }

  /// Adds coeff * t^power, merging with an existing power. Throws on negative power.
  TimePolynomial& add(int power, double coeff);

  double evaluate(double t) const;
  Parity parity() const;
  bool is_zero() const noexcept { return monomials_.empty(); }
  std::span<const Monomial> monomials() const noexcept { return monomials_; }
  int degree() const noexcept { return monomials_.empty() ? 0 : monomials_.back().power; }

  friend bool operator==(const TimePolynomial&, const TimePolynomial&) = default;

 private:
  std::vector<Monomial> monomials_;
};

struct SpinFactor {
  std::size_t site = 0;
  Axis axis = Axis::Z;
  int exponent = 1;

  friend bool operator==(const SpinFactor&, const SpinFactor&) = default;
};

struct HamiltonianTerm {
  TimePolynomial coeff;
  std::vector<SpinFactor> factors;

  /// Number of spin operators in the product, counting exponents.
  int order() const;

  friend bool operator==(const HamiltonianTerm&, const HamiltonianTerm&) = default;
};

/// H(t) = sum_k M_k t^k with dense coefficient matrices. Every Hamiltonian in
/// this library compiles to this form before propagation.
class MatrixPolynomial {
 public:
  MatrixPolynomial() = default;
  explicit MatrixPolynomial(Eigen::Index dim) : dim_(dim) {}
  MatrixPolynomial(Eigen::Index dim, std::vector<ComplexMatrix> coeffs);

  Eigen::Index dim() const noexcept { return dim_; }
  std::span<const ComplexMatrix> coeffs() const noexcept { return coeffs_; }
  int degree() const noexcept { return coeffs_.empty() ? 0 : static_cast<int>(coeffs_.size()) - 1; }

  /// Adds m * t^power.
  void add(int power, const ComplexMatrix& m);

  ComplexMatrix at(double t) const;
  /// In-place evaluation; out is resized as needed.
  void at(double t, ComplexMatrix& out) const;

  /// H'(t) = factor * H(factor * t); propagating H' over (-T/factor, T/factor)
  /// gives the same evolution operator as H over (-T, T).
  MatrixPolynomial time_rescaled(double factor) const;

  MatrixPolynomial operator+(const MatrixPolynomial& other) const;

 private:
  Eigen::Index dim_ = 0;
  std::vector<ComplexMatrix> coeffs_;
};

class Hamiltonian {
 public:
  Hamiltonian() = default;
  /// Validates sites and exponents against the system and compiles the dense
  /// form. Throws InvalidInput on a bad site or exponent < 1.
  Hamiltonian(SpinSystem sys, std::vector<HamiltonianTerm> terms);

  const SpinSystem& system() const noexcept { return sys_; }
  std::span<const HamiltonianTerm> terms() const noexcept { return terms_; }
  const MatrixPolynomial& matrix() const noexcept { return compiled_; }

  ComplexMatrix evaluate(double t) const { return compiled_.at(t); }

  /// Concatenates term lists; systems must match.
  Hamiltonian operator+(const Hamiltonian& other) const;

 private:
  SpinSystem sys_;
  std::vector<HamiltonianTerm> terms_;
  MatrixPolynomial compiled_;
};

/// The operator product of a term's factors, in listed order.
ComplexMatrix term_operator(const SpinSystem& sys, const HamiltonianTerm& term);

struct TermVerdict {
  std::size_t index = 0;
  int order = 0;
  Parity parity = Parity::Zero;
  bool pass = false;
};

struct ParityReport {
  std::vector<TermVerdict> terms;
  bool pass = true;
};

/// A term passes when its coefficient is odd in t for an odd number of spin
/// operators and even for an even number. Mixed parity fails.
ParityReport check_parity_symmetry(const Hamiltonian& h);

struct DeviationCheck {
  bool pass = true;
  double max_deviation = 0.0;
  double worst_time = 0.0;
};

/// max over grid of |Theta H(t) Theta^{-1} - H(-t)|_max.
DeviationCheck check_dynamic_symmetry(const MatrixPolynomial& h, const TimeReversalOp& theta,
                                      std::span<const double> grid, double tol);
DeviationCheck check_dynamic_symmetry(const Hamiltonian& h, const TimeReversalOp& theta,
                                      std::span<const double> grid, double tol);

/// max over grid of |H(t) - H(t)^H|_max.
DeviationCheck check_hermitian(const MatrixPolynomial& h, std::span<const double> grid,
                               double tol = 1e-12);
DeviationCheck check_hermitian(const Hamiltonian& h, std::span<const double> grid,
                               double tol = 1e-12);

/// {0, +-0.5, +-1, +-3, +-half_span} (duplicates removed), used by the
/// default static checks.
std::vector<double> symmetric_check_grid(double half_span);

/// H(t) = A + R t in a diabatic basis.
struct LinearSweep {
  MatrixPolynomial h;
  /// Columns are the diabatic states in the input basis; identity when R was
  /// already diagonal.
  ComplexMatrix rotation;
  bool rotated = false;
  /// permutation[k] is the input basis index with the largest weight in
  /// diabatic state k.
  std::vector<std::size_t> permutation;
  RealVector slopes;
};

/// Builds A + R t. A non-diagonal R is diagonalized and A rotated into its
/// eigenbasis. Throws InvalidInput for non-Hermitian or mismatched inputs.
LinearSweep from_matrix_pair(const ComplexMatrix& a, const ComplexMatrix& r);

}  // namespace kramers
