#pragma once

// Time-ordered evolution by piecewise-constant midpoint exponentials.
//
// On a symmetric interval the midpoints come in exact pairs t and -t, so for a
// Hamiltonian obeying Theta H(t) Theta^{-1} = H(-t) the discrete product obeys
// Theta U Theta^{-1} = U^H to rounding, not just to integration error.

#include "kramers/hamiltonian.hpp"
#include "kramers/linalg.hpp"
#include "kramers/spin_algebra.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace kramers {

class TimeGrid {
 public:
  /// (-half_span, half_span) split into 2 * steps_per_half steps; negative
  /// midpoints are the exact negations of the positive ones.
  static TimeGrid symmetric(double half_span, std::size_t steps_per_half);

  /// (start, end) split into `steps` equal steps.
  static TimeGrid interval(double start, double end, std::size_t steps);

  double start() const noexcept { return start_; }
  double end() const noexcept { return end_; }
  double dt() const noexcept { return dt_; }
  std::size_t steps() const noexcept { return midpoints_.size(); }
  bool is_symmetric() const noexcept { return symmetric_; }
  std::span<const double> midpoints() const noexcept { return midpoints_; }

  /// Same interval, twice the steps.
  TimeGrid refined() const;
  /// Twice the interval around its center at the same dt.
  TimeGrid extended() const;

 private:
  double start_ = 0.0;
  double end_ = 0.0;
  double dt_ = 0.0;
  bool symmetric_ = false;
  std::vector<double> midpoints_;
};

struct Checkpoint {
  double time = 0.0;
  ComplexMatrix u;  // U(time, start)
};

struct Propagation {
  TimeGrid grid;
  ComplexMatrix u_final;
  std::vector<Checkpoint> checkpoints;
  double unitarity_defect = 0.0;
};

struct PropagateOptions {
  /// Record U(t, start) every `checkpoint_stride` steps (0 disables). The
  /// start and the final time are always included when enabled.
  std::size_t checkpoint_stride = 0;
  /// Abort when a step Hamiltonian is further than this from Hermitian.
  double hermitian_tol = 1e-10;
  /// Apply one polar correction to the running product every this many steps
  /// (0 disables). Never applied after the final step.
  std::size_t reunitarize_stride = 1024;
  /// Abort when the final |U^H U - I|_max exceeds this.
  double unitarity_bound = 1e-10;
};

/// U = prod_k exp(-i H(t_k) dt), earliest factor rightmost. Throws
/// NumericalError on a Hermiticity or unitarity breach.
Propagation propagate(const MatrixPolynomial& h, const TimeGrid& grid,
                      const PropagateOptions& options = {});

/// |Theta U Theta^{-1} - U^H|_max for the final evolution operator.
double theta_conjugation_identity(const Propagation& p, const TimeReversalOp& theta);

/// Steps per half interval so that dt * max_t ||H(t)||_inf <= max_phase.
std::size_t default_steps_per_half(const MatrixPolynomial& h, double half_span,
                                   double max_phase = 0.05);

}  // namespace kramers
