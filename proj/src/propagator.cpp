#include "kramers/propagator.hpp"

#include "kramers/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kramers {

TimeGrid TimeGrid::symmetric(double half_span, std::size_t steps_per_half) {
  if (!(half_span > 0.0)) throw InvalidInput("time grid half span must be positive");
  if (steps_per_half == 0) throw InvalidInput("time grid needs at least one step per half");
  TimeGrid g;
  g.start_ = -half_span;
  g.end_ = half_span;
  g.dt_ = half_span / static_cast<double>(steps_per_half);
  g.symmetric_ = true;
  const auto n = steps_per_half;
  g.midpoints_.resize(2 * n);
  // t_j = j T / n for j = 1/2, 3/2, ..., n - 1/2, mirrored by negation.
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(2 * k + 1) * half_span / static_cast<double>(2 * n);
    g.midpoints_[n + k] = t;
    g.midpoints_[n - 1 - k] = -t;
  }
  return g;
}

TimeGrid TimeGrid::interval(double start, double end, std::size_t steps) {
  if (!(end > start)) throw InvalidInput("time grid end must exceed start");
  if (steps == 0) throw InvalidInput("time grid needs at least one step");
  if (start == -end && steps % 2 == 0) return symmetric(end, steps / 2);
  TimeGrid g;
  g.start_ = start;
  g.end_ = end;
  g.dt_ = (end - start) / static_cast<double>(steps);
  g.midpoints_.resize(steps);
  for (std::size_t k = 0; k < steps; ++k)
    g.midpoints_[k] = start + (static_cast<double>(k) + 0.5) * g.dt_;
  return g;
}

TimeGrid TimeGrid::refined() const {
  if (symmetric_) return symmetric(end_, steps());
  return interval(start_, end_, 2 * steps());
}

TimeGrid TimeGrid::extended() const {
  if (symmetric_) return symmetric(2.0 * end_, steps());
  const double center = 0.5 * (start_ + end_);
  const double half = end_ - start_;
  return interval(center - half, center + half, 2 * steps());
}

namespace {

double hermitian_defect_inplace(const ComplexMatrix& h) {
  double d = 0.0;
  for (Eigen::Index j = 0; j < h.cols(); ++j)
    for (Eigen::Index i = 0; i <= j; ++i) d = std::max(d, std::abs(h(i, j) - std::conj(h(j, i))));
  return d;
}

double inf_norm(const ComplexMatrix& h) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < h.rows(); ++i) best = std::max(best, h.row(i).cwiseAbs().sum());
  return best;
}

}  // namespace

Propagation propagate(const MatrixPolynomial& h, const TimeGrid& grid, const PropagateOptions& options) {
  const Eigen::Index n = h.dim();
  if (grid.steps() == 0) throw InvalidInput("propagate: empty time grid");

  Propagation out;
  out.grid = grid;
  ComplexMatrix u = ComplexMatrix::Identity(n, n);
  ComplexMatrix next(n, n);
  ComplexMatrix step(n, n);
  ComplexMatrix hmat(n, n);
  ComplexMatrix gram(n, n);
  UnitaryStep stepper(n);

  const std::size_t stride = options.checkpoint_stride;
  if (stride > 0) out.checkpoints.push_back({grid.start(), u});

  const auto midpoints = grid.midpoints();
  const double dt = grid.dt();
  for (std::size_t k = 0; k < midpoints.size(); ++k) {
    const double t = midpoints[k];
    h.at(t, hmat);
    const double defect = hermitian_defect_inplace(hmat);
    if (defect > options.hermitian_tol) {
      std::ostringstream msg;
      msg << "Hamiltonian is not Hermitian at t=" << t << " (defect " << defect << ")";
      throw NumericalError(msg.str(), t, defect);
    }
    stepper.compute(hmat, dt, step);
    multiply(step, u, next);
    u.swap(next);
    if (options.reunitarize_stride > 0 && (k + 1) % options.reunitarize_stride == 0 &&
        k + 1 != midpoints.size()) {
      // One Newton-Schulz polar step, U <- U (3I - U^H U) / 2: removes the
      // rounding drift to second order and commutes with Theta and ^H.
      gram.noalias() = u.adjoint() * u;
      gram = (3.0 * ComplexMatrix::Identity(n, n) - gram) * 0.5;
      multiply(u, gram, next);
      u.swap(next);
    }
    if (stride > 0 && ((k + 1) % stride == 0 || k + 1 == midpoints.size())) {
      const double time = (k + 1 == midpoints.size()) ? grid.end() : t + 0.5 * dt;
      out.checkpoints.push_back({time, u});
    }
  }

  out.unitarity_defect = unitarity_defect(u);
  if (out.unitarity_defect > options.unitarity_bound) {
    std::ostringstream msg;
    msg << "evolution operator lost unitarity (defect " << out.unitarity_defect << ")";
    throw NumericalError(msg.str(), grid.end(), out.unitarity_defect);
  }
  out.u_final = std::move(u);
  return out;
}

double theta_conjugation_identity(const Propagation& p, const TimeReversalOp& theta) {
  return max_abs_diff(conjugate_by_theta(theta, p.u_final), p.u_final.adjoint());
}

std::size_t default_steps_per_half(const MatrixPolynomial& h, double half_span, double max_phase) {
  if (!(half_span > 0.0) || !(max_phase > 0.0))
    throw InvalidInput("default_steps_per_half: half span and phase must be positive");
  // Entries are polynomials; sampling catches interior maxima of higher degrees.
  constexpr int kSamples = 64;
  double norm = 0.0;
  for (int i = 0; i <= kSamples; ++i) {
    const double t = -half_span + 2.0 * half_span * i / kSamples;
    norm = std::max(norm, inf_norm(h.at(t)));
  }
  if (norm == 0.0) return 1;
  return static_cast<std::size_t>(std::ceil(half_span * norm / max_phase));
}

}  // namespace kramers
