#pragma once

// Scattering matrices, no-scattering verification, probability curves, level
// diagrams, convergence control and parameter sweeps.

#include "kramers/hamiltonian.hpp"
#include "kramers/models.hpp"
#include "kramers/propagator.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace kramers {

/// Diabatic indices, 0-based. P_{from -> to} = |S_{to, from}|^2.
struct TransitionPair {
  std::size_t from = 0;
  std::size_t to = 0;

  friend bool operator==(const TransitionPair&, const TransitionPair&) = default;
};

struct PairVerdict {
  std::size_t from = 0;
  std::size_t to = 0;
  double probability = 0.0;
  bool pass = false;
};

struct ScatteringReport {
  std::vector<std::string> labels;
  ComplexMatrix s;    // s(to, from) = <to| U |from>
  Eigen::MatrixXd p;  // p(to, from) = |s(to, from)|^2
  std::vector<KramersPair> kramers_pairs;
  std::vector<PairVerdict> verdicts;
  double unitarity_defect = 0.0;
  double tol = 0.0;
  TimeGrid grid;

  double probability(std::size_t from, std::size_t to) const {
    return p(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(from));
  }
  /// max over rows and columns of |sum - 1|.
  double stochastic_defect() const;
};

/// S and P in the diabatic basis. Kramers pairs and verdicts are left empty.
ScatteringReport scattering_matrix(const Propagation& prop, const DiabaticBasis& basis);

/// Fills kramers_pairs and one verdict per state (P_{n -> partner(n)} < tol).
void attach_kramers_verdicts(ScatteringReport& report, const TimeReversalOp& theta,
                             const DiabaticBasis& basis, double tol);

enum class TheoremStatus { Pass, Fail, NotApplicable, SymmetryViolated };

const char* status_name(TheoremStatus s);

struct RandomStateVerdict {
  std::size_t index = 0;
  double probability = 0.0;  // |<Theta psi| U |psi>|^2
  bool pass = false;
};

struct VerifyOptions {
  double tol = 1e-6;
  double symmetry_tol = 1e-10;
  std::size_t random_states = 10;
  std::uint64_t seed = 1;
  PropagateOptions propagate;
};

struct TheoremReport {
  TheoremStatus status = TheoremStatus::NotApplicable;
  bool half_integer = false;
  DeviationCheck dynamic_symmetry;
  /// Present only when the problem carries spin-operator terms.
  std::optional<ParityReport> parity;
  double theta_identity_deviation = 0.0;
  ScatteringReport scattering;
  std::vector<RandomStateVerdict> random_states;
  double tol = 0.0;
  bool propagated = false;
};

/// Runs the dynamic-symmetry check on the grid's sample times and, when it
/// holds, propagates and tests every diabatic state and `random_states` random
/// states against their time-reversed partners. Integer total spin still
/// propagates but reports NotApplicable.
TheoremReport verify_no_scattering(const Problem& problem, const TimeGrid& grid,
                                   const VerifyOptions& options = {});

/// Probabilities |<to| U(t, start) |from>|^2 at every checkpoint.
struct CurveSeries {
  std::vector<double> times;
  std::vector<TransitionPair> pairs;
  Eigen::MatrixXd values;  // rows: times, cols: pairs
};

CurveSeries probability_curves(const Propagation& prop, const DiabaticBasis& basis,
                               std::span<const TransitionPair> pairs);

/// |<m| U(t, start) |psi>|^2 for every diabatic state m at every checkpoint.
CurveSeries probability_vs_time(const Propagation& prop, const DiabaticBasis& basis,
                                const StateVector& psi);

struct LevelDiagram {
  std::vector<double> times;
  Eigen::MatrixXd sorted;    // ascending eigenvalues per row
  Eigen::MatrixXd branches;  // continuity-paired branches per row
};

/// Eigenvalues of H(t) at `samples` evenly spaced times in [t0, t1].
LevelDiagram level_diagram(const MatrixPolynomial& h, double t0, double t1, std::size_t samples);

/// Largest gap inside consecutive eigenvalue pairs (0,1), (2,3), ... of the
/// ascending spectrum at time t; 0 for dimension < 2.
double kramers_pair_gap(const MatrixPolynomial& h, double t);

struct ConvergenceResult {
  TimeGrid grid;
  ScatteringReport report;
  bool converged = false;
  double max_change = 0.0;
  /// max_change / dt of the coarser grid at the last comparison.
  double rate_constant = 0.0;
  std::size_t refinements = 0;
};

/// Doubles the step count until no probability moves by tol or more.
ConvergenceResult converge_steps(const Problem& problem, const TimeGrid& initial, double tol = 1e-4,
                                 std::size_t max_refinements = 6,
                                 const PropagateOptions& options = {});

/// Doubles the interval at fixed dt until no probability moves by tol or more.
ConvergenceResult converge_interval(const Problem& problem, const TimeGrid& initial,
                                    double tol = 1e-4, std::size_t max_extensions = 3,
                                    const PropagateOptions& options = {});

/// One swept axis: every target key is set to factor * value.
struct SweepAxis {
  std::vector<std::pair<std::string, double>> targets;
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 1;

  std::vector<double> values() const;
  std::string label() const;
};

/// Parses "key[*factor][,key[*factor]...]=start:stop:count".
SweepAxis parse_sweep_axis(const std::string& text);

struct SweepPoint {
  double value = 0.0;
  std::vector<double> probabilities;  // one per requested pair
  double unitarity_defect = 0.0;
  double stochastic_defect = 0.0;
  double max_partner_probability = 0.0;
  bool theorem_applies = false;
  bool theorem_pass = true;
  bool converged = true;
  std::size_t steps_per_half = 0;
  double half_span = 0.0;
};

struct SweepOptions {
  double half_span = 200.0;
  /// 0 selects default_steps_per_half.
  std::size_t steps_per_half = 0;
  bool converge = false;
  double tol = 1e-6;
  std::size_t workers = 1;
  PropagateOptions propagate;
};

struct SweepResult {
  std::string label;
  std::vector<TransitionPair> pairs;
  std::vector<SweepPoint> points;

  bool all_pass() const;
};

/// Propagates every sweep point on `workers` threads; results are in sweep
/// order and independent of scheduling.
SweepResult sweep(const std::string& model, const ParamMap& fixed, const SweepAxis& axis,
                  std::span<const TransitionPair> pairs, const SweepOptions& options);

/// KRAMERS_LZ_WORKERS when set and positive, else hardware concurrency.
std::size_t default_workers();

}  // namespace kramers
