#pragma once

// Spin operators on tensor-product Hilbert spaces and the time-reversal
// operator exp(-i pi S_y) K.
//
// Basis conventions: each site uses the S_z eigenbasis ordered by descending
// magnetic quantum number (m = s, s-1, ..., -s). Composite bases are
// lexicographic with site 0 varying slowest, so for spins (1/2, 1) the basis is
// |up,1>, |up,0>, |up,-1>, |down,1>, |down,0>, |down,-1>.

#include "kramers/linalg.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace kramers {

enum class Axis { X, Y, Z };

char axis_name(Axis axis);

/// An ordered list of spins, each stored as twice its magnitude.
class SpinSystem {
 public:
  SpinSystem() = default;
  explicit SpinSystem(std::vector<int> twice_spins);

  /// Accepts magnitudes such as 0.5, 1, 1.5; rejects anything that is not a
  /// nonnegative half-integer.
  static SpinSystem from_magnitudes(std::span<const double> spins);

  std::size_t sites() const noexcept { return twice_spins_.size(); }
  int twice_spin(std::size_t site) const;
  std::size_t site_dim(std::size_t site) const { return static_cast<std::size_t>(twice_spin(site)) + 1; }
  std::span<const int> twice_spins() const noexcept { return twice_spins_; }
  std::size_t dim() const noexcept { return dim_; }

  /// True when the total spin is half-integer (sum of 2s_i is odd).
  bool half_integer() const noexcept { return half_integer_; }

  /// "1/2, 1, 3/2" style listing.
  std::string describe() const;

  friend bool operator==(const SpinSystem&, const SpinSystem&) = default;

 private:
  std::vector<int> twice_spins_;
  std::size_t dim_ = 1;
  bool half_integer_ = false;
};

/// Formats a twice-spin value as "1/2", "1", "3/2", ...
std::string spin_label(int twice_spin);

struct SpinMatrices {
  ComplexMatrix x;
  ComplexMatrix y;
  ComplexMatrix z;

  const ComplexMatrix& operator[](Axis axis) const;
};

/// Single-spin S_x, S_y, S_z of dimension 2s+1. S_x and S_z are real, S_y is
/// purely imaginary.
SpinMatrices spin_matrices(int twice_spin);

/// Overload taking the magnitude; throws InvalidInput for negative or
/// non-half-integer s.
SpinMatrices spin_matrices(double s);

/// I (x) ... (x) op (x) ... (x) I with op acting on `site`.
ComplexMatrix embed(const SpinSystem& sys, std::size_t site, const ComplexMatrix& op);

/// Shorthand for embed(sys, site, spin_matrices(s_site)[axis]).
ComplexMatrix site_operator(const SpinSystem& sys, std::size_t site, Axis axis);

/// Sum over sites of the embedded S_y.
ComplexMatrix total_spin_y(const SpinSystem& sys);

/// Antiunitary operator u K, with K complex conjugation in the product basis.
struct TimeReversalOp {
  ComplexMatrix u;
  bool conjugates = true;

  Eigen::Index dim() const noexcept { return u.rows(); }
};

/// u = exp(-i pi S_y) for the total S_y of the system.
TimeReversalOp time_reversal(const SpinSystem& sys);

/// u * conj(v).
StateVector apply_antiunitary(const TimeReversalOp& theta, const StateVector& v);

/// Theta A Theta^{-1} = u conj(A) u^H.
ComplexMatrix conjugate_by_theta(const TimeReversalOp& theta, const ComplexMatrix& a);

}  // namespace kramers
