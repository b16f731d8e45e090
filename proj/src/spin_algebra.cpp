#include "kramers/spin_algebra.hpp"

#include "kramers/error.hpp"

#include <cmath>
#include <numbers>

namespace kramers {

char axis_name(Axis axis) {
  switch (axis) {
    case Axis::X:
      return 'x';
    case Axis::Y:
      return 'y';
    case Axis::Z:
      return 'z';
  }
  return '?';
}

SpinSystem::SpinSystem(std::vector<int> twice_spins) : twice_spins_(std::move(twice_spins)) {
  int parity = 0;
  for (int ts : twice_spins_) {
    if (ts < 0) throw InvalidInput("spin magnitude must be nonnegative");
    dim_ *= static_cast<std::size_t>(ts) + 1;
    parity += ts;
  }
  half_integer_ = (parity % 2) == 1;
}

SpinSystem SpinSystem::from_magnitudes(std::span<const double> spins) {
  std::vector<int> twice;
  twice.reserve(spins.size());
  for (double s : spins) {
    const double ts = 2.0 * s;
    if (!(s >= 0.0) || std::abs(ts - std::round(ts)) > 1e-12)
      throw InvalidInput("spin " + std::to_string(s) + " is not a nonnegative half-integer");
    twice.push_back(static_cast<int>(std::lround(ts)));
  }
  return SpinSystem(std::move(twice));
}

int SpinSystem::twice_spin(std::size_t site) const {
  if (site >= twice_spins_.size())
    throw InvalidInput("site " + std::to_string(site) + " out of range for " +
                       std::to_string(twice_spins_.size()) + " spins");
  return twice_spins_[site];
}

std::string spin_label(int twice_spin) {
  if (twice_spin % 2 == 0) return std::to_string(twice_spin / 2);
  return std::to_string(twice_spin) + "/2";
}

std::string SpinSystem::describe() const {
  std::string out;
  for (std::size_t i = 0; i < twice_spins_.size(); ++i) {
    if (i) out += ", ";
    out += spin_label(twice_spins_[i]);
  }
  return out;
}

const ComplexMatrix& SpinMatrices::operator[](Axis axis) const {
  switch (axis) {
    case Axis::X:
      return x;
    case Axis::Y:
      return y;
    case Axis::Z:
      break;
  }
  return z;
}

SpinMatrices spin_matrices(int twice_spin) {
  if (twice_spin < 0) throw InvalidInput("spin magnitude must be nonnegative");
  const Eigen::Index d = twice_spin + 1;
  const double s = 0.5 * twice_spin;
  // S+ |m> = sqrt(s(s+1) - m(m+1)) |m+1>; index k holds m = s - k.
  Eigen::MatrixXd raise = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd sz = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double m = s - static_cast<double>(k);
    sz(k, k) = m;
    if (k > 0) raise(k - 1, k) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
  }
  const Eigen::MatrixXd lower = raise.transpose();
  SpinMatrices out;
  out.x = (0.5 * (raise + lower)).cast<Complex>();
  out.y = (Complex(0.0, -0.5) * (raise - lower).cast<Complex>());
  out.z = sz.cast<Complex>();
  return out;
}

SpinMatrices spin_matrices(double s) {
  const double ts = 2.0 * s;
  if (!(s >= 0.0) || std::abs(ts - std::round(ts)) > 1e-12)
    throw InvalidInput("spin " + std::to_string(s) + " is not a nonnegative half-integer");
  return spin_matrices(static_cast<int>(std::lround(ts)));
}

ComplexMatrix embed(const SpinSystem& sys, std::size_t site, const ComplexMatrix& op) {
  const std::size_t local = sys.site_dim(site);
  if (static_cast<std::size_t>(op.rows()) != local || static_cast<std::size_t>(op.cols()) != local)
    throw InvalidInput("embed: operator dimension " + std::to_string(op.rows()) +
                       " does not match site dimension " + std::to_string(local));
  std::size_t before = 1;
  for (std::size_t i = 0; i < site; ++i) before *= sys.site_dim(i);
  const std::size_t after = sys.dim() / (before * local);

  // Index (a, p, b) with a over earlier sites, p on this site, b over later sites.
  const auto n = static_cast<Eigen::Index>(sys.dim());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (std::size_t a = 0; a < before; ++a)
    for (std::size_t p = 0; p < local; ++p)
      for (std::size_t q = 0; q < local; ++q) {
        const Complex v = op(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
        if (v == Complex{}) continue;
        for (std::size_t b = 0; b < after; ++b) {
          const auto row = static_cast<Eigen::Index>((a * local + p) * after + b);
          const auto col = static_cast<Eigen::Index>((a * local + q) * after + b);
          out(row, col) = v;
        }
      }
  return out;
}

ComplexMatrix site_operator(const SpinSystem& sys, std::size_t site, Axis axis) {
  return embed(sys, site, spin_matrices(sys.twice_spin(site))[axis]);
}

ComplexMatrix total_spin_y(const SpinSystem& sys) {
  const auto n = static_cast<Eigen::Index>(sys.dim());
  ComplexMatrix sy = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < sys.sites(); ++i) sy += site_operator(sys, i, Axis::Y);
  return sy;
}

TimeReversalOp time_reversal(const SpinSystem& sys) {
  return TimeReversalOp{expm_hermitian(total_spin_y(sys), Complex(0.0, -std::numbers::pi)), true};
}

StateVector apply_antiunitary(const TimeReversalOp& theta, const StateVector& v) {
  if (v.size() != theta.dim()) throw InvalidInput("apply_antiunitary: dimension mismatch");
  return theta.u * v.conjugate();
}

ComplexMatrix conjugate_by_theta(const TimeReversalOp& theta, const ComplexMatrix& a) {
  if (a.rows() != theta.dim() || a.cols() != theta.dim())
    throw InvalidInput("conjugate_by_theta: dimension mismatch");
  const ComplexMatrix left = theta.u * a.conjugate();
  return left * theta.u.adjoint();
}

}  // namespace kramers
