#include "kramers/hamiltonian.hpp"

#include "kramers/error.hpp"
#include "kramers/simd/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace kramers {

const char* parity_name(Parity p) {
  switch (p) {
    case Parity::Zero:
      return "zero";
    case Parity::Even:
      return "even";
    case Parity::Odd:
      return "odd";
    case Parity::Mixed:
      return "mixed";
  }
  return "?";
}

TimePolynomial::TimePolynomial(std::initializer_list<Monomial> monomials) {
  for (const Monomial& m : monomials) add(m.power, m.coeff);
}

TimePolynomial& TimePolynomial::add(int power, double coeff) {
  if (power < 0) throw InvalidInput("polynomial power must be nonnegative");
  auto it = std::lower_bound(monomials_.begin(), monomials_.end(), power,
                             [](const Monomial& m, int p) { return m.power < p; });
  if (it != monomials_.end() && it->power == power) {
    it->coeff += coeff;
    if (it->coeff == 0.0) monomials_.erase(it);
  } else if (coeff != 0.0) {
    monomials_.insert(it, Monomial{power, coeff});
  }
  return *this;
}

double TimePolynomial::evaluate(double t) const {
  double sum = 0.0;
  for (const Monomial& m : monomials_) sum += m.coeff * std::pow(t, m.power);
  return sum;
}

Parity TimePolynomial::parity() const {
  if (monomials_.empty()) return Parity::Zero;
  bool any_even = false;
  bool any_odd = false;
  for (const Monomial& m : monomials_) (m.power % 2 ? any_odd : any_even) = true;
  if (any_even && any_odd) return Parity::Mixed;
  return any_odd ? Parity::Odd : Parity::Even;
}

int HamiltonianTerm::order() const {
  int n = 0;
  for (const SpinFactor& f : factors) n += f.exponent;
  return n;
}

MatrixPolynomial::MatrixPolynomial(Eigen::Index dim, std::vector<ComplexMatrix> coeffs)
    : dim_(dim), coeffs_(std::move(coeffs)) {
  for (const ComplexMatrix& m : coeffs_)
    if (m.rows() != dim_ || m.cols() != dim_)
      throw InvalidInput("MatrixPolynomial: coefficient dimension mismatch");
}

void MatrixPolynomial::add(int power, const ComplexMatrix& m) {
  if (power < 0) throw InvalidInput("MatrixPolynomial: negative power");
  if (m.rows() != dim_ || m.cols() != dim_)
    throw InvalidInput("MatrixPolynomial: coefficient dimension mismatch");
  while (static_cast<int>(coeffs_.size()) <= power)
    coeffs_.push_back(ComplexMatrix::Zero(dim_, dim_));
  coeffs_[static_cast<std::size_t>(power)] += m;
}

ComplexMatrix MatrixPolynomial::at(double t) const {
  ComplexMatrix out;
  at(t, out);
  return out;
}

void MatrixPolynomial::at(double t, ComplexMatrix& out) const {
  out.setZero(dim_, dim_);
  const auto& kernels = simd::active_kernels();
  const auto len = static_cast<std::size_t>(dim_ * dim_);
  double weight = 1.0;
  for (const ComplexMatrix& m : coeffs_) {
    kernels.axpy(len, weight, m.data(), out.data());
    weight *= t;
  }
}

MatrixPolynomial MatrixPolynomial::time_rescaled(double factor) const {
  MatrixPolynomial out(dim_);
  double weight = factor;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    out.add(static_cast<int>(k), coeffs_[k] * weight);
    weight *= factor;
  }
  return out;
}

MatrixPolynomial MatrixPolynomial::operator+(const MatrixPolynomial& other) const {
  if (other.dim_ != dim_) throw InvalidInput("MatrixPolynomial: dimension mismatch");
  MatrixPolynomial out = *this;
  for (std::size_t k = 0; k < other.coeffs_.size(); ++k) out.add(static_cast<int>(k), other.coeffs_[k]);
  return out;
}

ComplexMatrix term_operator(const SpinSystem& sys, const HamiltonianTerm& term) {
  const auto n = static_cast<Eigen::Index>(sys.dim());
  ComplexMatrix product = ComplexMatrix::Identity(n, n);
  for (const SpinFactor& f : term.factors) {
    if (f.exponent < 1) throw InvalidInput("spin factor exponent must be >= 1");
    const SpinMatrices site_ops = spin_matrices(sys.twice_spin(f.site));
    const ComplexMatrix& single = site_ops[f.axis];
    ComplexMatrix power = single;
    for (int e = 1; e < f.exponent; ++e) power = (power * single).eval();
    product = (product * embed(sys, f.site, power)).eval();
  }
  return product;
}

Hamiltonian::Hamiltonian(SpinSystem sys, std::vector<HamiltonianTerm> terms)
    : sys_(std::move(sys)), terms_(std::move(terms)),
      compiled_(static_cast<Eigen::Index>(sys_.dim())) {
  for (const HamiltonianTerm& term : terms_) {
    const ComplexMatrix op = term_operator(sys_, term);
    for (const Monomial& m : term.coeff.monomials()) compiled_.add(m.power, op * m.coeff);
  }
}

Hamiltonian Hamiltonian::operator+(const Hamiltonian& other) const {
  if (!(other.sys_ == sys_)) throw InvalidInput("Hamiltonian: spin systems differ");
  std::vector<HamiltonianTerm> merged = terms_;
  merged.insert(merged.end(), other.terms_.begin(), other.terms_.end());
  return Hamiltonian(sys_, std::move(merged));
}

ParityReport check_parity_symmetry(const Hamiltonian& h) {
  ParityReport report;
  const auto terms = h.terms();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    TermVerdict v;
    v.index = i;
    v.order = terms[i].order();
    v.parity = terms[i].coeff.parity();
    switch (v.parity) {
      case Parity::Zero:
        v.pass = true;
        break;
      case Parity::Mixed:
        v.pass = false;
        break;
      case Parity::Even:
        v.pass = v.order % 2 == 0;
        break;
      case Parity::Odd:
        v.pass = v.order % 2 == 1;
        break;
    }
    report.pass = report.pass && v.pass;
    report.terms.push_back(v);
  }
  return report;
}

DeviationCheck check_dynamic_symmetry(const MatrixPolynomial& h, const TimeReversalOp& theta,
                                      std::span<const double> grid, double tol) {
  if (grid.empty()) throw InvalidInput("check_dynamic_symmetry: empty time grid");
  if (h.dim() != theta.dim()) throw InvalidInput("check_dynamic_symmetry: dimension mismatch");
  DeviationCheck check;
  for (double t : grid) {
    const double d = max_abs_diff(conjugate_by_theta(theta, h.at(t)), h.at(-t));
    if (d > check.max_deviation) {
      check.max_deviation = d;
      check.worst_time = t;
    }
  }
  check.pass = check.max_deviation < tol;
  return check;
}

DeviationCheck check_dynamic_symmetry(const Hamiltonian& h, const TimeReversalOp& theta,
                                      std::span<const double> grid, double tol) {
  return check_dynamic_symmetry(h.matrix(), theta, grid, tol);
}

DeviationCheck check_hermitian(const MatrixPolynomial& h, std::span<const double> grid, double tol) {
  DeviationCheck check;
  for (double t : grid) {
    const double d = hermitian_defect(h.at(t));
    if (d > check.max_deviation) {
      check.max_deviation = d;
      check.worst_time = t;
    }
  }
  check.pass = check.max_deviation < tol;
  return check;
}

DeviationCheck check_hermitian(const Hamiltonian& h, std::span<const double> grid, double tol) {
  return check_hermitian(h.matrix(), grid, tol);
}

std::vector<double> symmetric_check_grid(double half_span) {
  std::vector<double> grid{0.0, 0.5, -0.5, 1.0, -1.0, 3.0, -3.0};
  const double t = std::abs(half_span);
  if (t != 0.0 && t != 0.5 && t != 1.0 && t != 3.0) {
    grid.push_back(t);
    grid.push_back(-t);
  }
  return grid;
}

LinearSweep from_matrix_pair(const ComplexMatrix& a, const ComplexMatrix& r) {
  if (a.rows() != a.cols() || r.rows() != r.cols() || a.rows() != r.rows())
    throw InvalidInput("from_matrix_pair: A and R must be square with equal dimension");
  const auto tol = [](const ComplexMatrix& m) { return 1e-12 * std::max(1.0, max_abs(m)); };
  if (hermitian_defect(a) > tol(a)) throw InvalidInput("from_matrix_pair: A is not Hermitian");
  if (hermitian_defect(r) > tol(r)) throw InvalidInput("from_matrix_pair: R is not Hermitian");

  const Eigen::Index n = a.rows();
  LinearSweep out;
  ComplexMatrix off = r;
  off.diagonal().setZero();
  if (max_abs(off) <= tol(r)) {
    out.rotation = ComplexMatrix::Identity(n, n);
    out.slopes = r.diagonal().real();
    out.h = MatrixPolynomial(n, {a, ComplexMatrix(out.slopes.cast<Complex>().asDiagonal())});
    for (Eigen::Index k = 0; k < n; ++k) out.permutation.push_back(static_cast<std::size_t>(k));
    return out;
  }

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(r);
  out.rotated = true;
  out.rotation = solver.eigenvectors();
  out.slopes = solver.eigenvalues();
  const ComplexMatrix rotated_a = out.rotation.adjoint() * a * out.rotation;
  out.h = MatrixPolynomial(n, {rotated_a, ComplexMatrix(out.slopes.cast<Complex>().asDiagonal())});
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index best = 0;
    out.rotation.col(k).cwiseAbs().maxCoeff(&best);
    out.permutation.push_back(static_cast<std::size_t>(best));
  }
  return out;
}

}  // namespace kramers
