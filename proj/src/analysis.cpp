#include "kramers/analysis.hpp"

#include "kramers/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

namespace kramers {

double ScatteringReport::stochastic_defect() const {
  double d = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    d = std::max(d, std::abs(p.row(i).sum() - 1.0));
    d = std::max(d, std::abs(p.col(i).sum() - 1.0));
  }
  return d;
}

ScatteringReport scattering_matrix(const Propagation& prop, const DiabaticBasis& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  if (prop.u_final.rows() != n) throw InvalidInput("scattering_matrix: basis size mismatch");
  ScatteringReport r;
  r.labels = basis.names;
  r.s.resize(n, n);
  r.p.resize(n, n);
  for (Eigen::Index to = 0; to < n; ++to)
    for (Eigen::Index from = 0; from < n; ++from) {
      const Complex amp = prop.u_final(static_cast<Eigen::Index>(basis.basis_index[to]),
                                       static_cast<Eigen::Index>(basis.basis_index[from]));
      r.s(to, from) = amp;
      r.p(to, from) = std::norm(amp);
    }
  r.unitarity_defect = prop.unitarity_defect;
  r.grid = prop.grid;
  return r;
}

void attach_kramers_verdicts(ScatteringReport& report, const TimeReversalOp& theta,
                             const DiabaticBasis& basis, double tol) {
  report.kramers_pairs = kramers_pairs(theta, basis);
  report.tol = tol;
  report.verdicts.clear();
  for (const KramersPair& kp : report.kramers_pairs) {
    const double prob = report.probability(kp.state, kp.partner);
    report.verdicts.push_back({kp.state, kp.partner, prob, prob < tol});
  }
}

const char* status_name(TheoremStatus s) {
  switch (s) {
    case TheoremStatus::Pass:
      return "pass";
    case TheoremStatus::Fail:
      return "fail";
    case TheoremStatus::NotApplicable:
      return "not-applicable";
    case TheoremStatus::SymmetryViolated:
      return "dynamic-symmetry-violated";
  }
  return "?";
}

TheoremReport verify_no_scattering(const Problem& problem, const TimeGrid& grid,
                                   const VerifyOptions& options) {
  if (!grid.is_symmetric()) throw InvalidInput("verify_no_scattering needs a symmetric time grid");
  TheoremReport report;
  report.tol = options.tol;
  report.half_integer = problem.system.half_integer();
  if (problem.operator_form) report.parity = check_parity_symmetry(*problem.operator_form);

  const TimeReversalOp theta = time_reversal(problem.system);
  const std::vector<double> sample = symmetric_check_grid(grid.end());
  report.dynamic_symmetry = check_dynamic_symmetry(problem.h, theta, sample, options.symmetry_tol);
  if (!report.dynamic_symmetry.pass) {
    report.status = TheoremStatus::SymmetryViolated;
    return report;
  }

  const Propagation prop = propagate(problem.h, grid, options.propagate);
  report.propagated = true;
  report.scattering = scattering_matrix(prop, problem.basis);
  attach_kramers_verdicts(report.scattering, theta, problem.basis, options.tol);
  report.theta_identity_deviation = theta_conjugation_identity(prop, theta);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  const Eigen::Index n = prop.u_final.rows();
  for (std::size_t k = 0; k < options.random_states; ++k) {
    StateVector psi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      psi[i] = Complex(re, im);
    }
    psi.normalize();
    const StateVector reversed = apply_antiunitary(theta, psi);
    const double prob = std::norm(reversed.dot(prop.u_final * psi));
    report.random_states.push_back({k, prob, prob < options.tol});
  }

  if (!report.half_integer) {
    report.status = TheoremStatus::NotApplicable;
    return report;
  }
  bool ok = std::all_of(report.scattering.verdicts.begin(), report.scattering.verdicts.end(),
                        [](const PairVerdict& v) { return v.pass; });
  ok = ok && std::all_of(report.random_states.begin(), report.random_states.end(),
                         [](const RandomStateVerdict& v) { return v.pass; });
  report.status = ok ? TheoremStatus::Pass : TheoremStatus::Fail;
  return report;
}

CurveSeries probability_curves(const Propagation& prop, const DiabaticBasis& basis,
                               std::span<const TransitionPair> pairs) {
  if (prop.checkpoints.empty()) throw InvalidInput("probability_curves: propagation has no checkpoints");
  CurveSeries out;
  out.pairs.assign(pairs.begin(), pairs.end());
  out.values.resize(static_cast<Eigen::Index>(prop.checkpoints.size()),
                    static_cast<Eigen::Index>(pairs.size()));
  for (const TransitionPair& p : pairs)
    if (p.from >= basis.size() || p.to >= basis.size())
      throw InvalidInput("probability_curves: pair index out of range");
  for (std::size_t r = 0; r < prop.checkpoints.size(); ++r) {
    const Checkpoint& cp = prop.checkpoints[r];
    out.times.push_back(cp.time);
    for (std::size_t c = 0; c < pairs.size(); ++c) {
      const Complex amp = cp.u(static_cast<Eigen::Index>(basis.basis_index[pairs[c].to]),
                               static_cast<Eigen::Index>(basis.basis_index[pairs[c].from]));
      out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = std::norm(amp);
    }
  }
  return out;
}

CurveSeries probability_vs_time(const Propagation& prop, const DiabaticBasis& basis,
                                const StateVector& psi) {
  if (prop.checkpoints.empty()) throw InvalidInput("probability_vs_time: propagation has no checkpoints");
  if (psi.size() != prop.u_final.rows()) throw InvalidInput("probability_vs_time: dimension mismatch");
  CurveSeries out;
  const auto n = static_cast<Eigen::Index>(basis.size());
  out.values.resize(static_cast<Eigen::Index>(prop.checkpoints.size()), n);
  for (std::size_t r = 0; r < prop.checkpoints.size(); ++r) {
    out.times.push_back(prop.checkpoints[r].time);
    const StateVector evolved = prop.checkpoints[r].u * psi;
    for (Eigen::Index m = 0; m < n; ++m)
      out.values(static_cast<Eigen::Index>(r), m) =
          std::norm(evolved[static_cast<Eigen::Index>(basis.basis_index[static_cast<std::size_t>(m)])]);
  }
  return out;
}

LevelDiagram level_diagram(const MatrixPolynomial& h, double t0, double t1, std::size_t samples) {
  if (samples < 2) throw InvalidInput("level_diagram needs at least two samples");
  const Eigen::Index n = h.dim();
  LevelDiagram out;
  out.sorted.resize(static_cast<Eigen::Index>(samples), n);
  out.branches.resize(static_cast<Eigen::Index>(samples), n);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(n);
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = (k + 1 == samples) ? t1 : t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(samples - 1);
    out.times.push_back(t);
    solver.compute(h.at(t), Eigen::EigenvaluesOnly);
    out.sorted.row(static_cast<Eigen::Index>(k)) = solver.eigenvalues().transpose();
  }

  // Nearest-value continuation: predict each branch linearly from its last two
  // points and assign eigenvalues greedily by smallest distance.
  out.branches.row(0) = out.sorted.row(0);
  std::vector<std::tuple<double, Eigen::Index, Eigen::Index>> candidates;
  for (Eigen::Index k = 1; k < static_cast<Eigen::Index>(samples); ++k) {
    Eigen::VectorXd predicted = out.branches.row(k - 1).transpose();
    if (k >= 2) predicted = 2.0 * predicted - out.branches.row(k - 2).transpose();
    candidates.clear();
    for (Eigen::Index b = 0; b < n; ++b)
      for (Eigen::Index e = 0; e < n; ++e)
        candidates.emplace_back(std::abs(predicted[b] - out.sorted(k, e)), b, e);
    std::sort(candidates.begin(), candidates.end());
    std::vector<bool> branch_done(static_cast<std::size_t>(n), false);
    std::vector<bool> value_used(static_cast<std::size_t>(n), false);
    for (const auto& [dist, b, e] : candidates) {
      if (branch_done[static_cast<std::size_t>(b)] || value_used[static_cast<std::size_t>(e)]) continue;
      branch_done[static_cast<std::size_t>(b)] = true;
      value_used[static_cast<std::size_t>(e)] = true;
      out.branches(k, b) = out.sorted(k, e);
    }
  }
  return out;
}

double kramers_pair_gap(const MatrixPolynomial& h, double t) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.at(t), Eigen::EigenvaluesOnly);
  const auto& w = solver.eigenvalues();
  double gap = 0.0;
  for (Eigen::Index i = 0; i + 1 < w.size(); i += 2) gap = std::max(gap, w[i + 1] - w[i]);
  return gap;
}

namespace {

ScatteringReport run_report(const Problem& problem, const TimeGrid& grid, const PropagateOptions& options) {
  return scattering_matrix(propagate(problem.h, grid, options), problem.basis);
}

template <typename Next>
ConvergenceResult converge_with(const Problem& problem, const TimeGrid& initial, double tol,
                                std::size_t max_iterations, const PropagateOptions& options,
                                Next next) {
  ConvergenceResult out;
  out.grid = initial;
  out.report = run_report(problem, initial, options);
  for (std::size_t i = 0; i < max_iterations; ++i) {
    const TimeGrid grid = next(out.grid);
    ScatteringReport report = run_report(problem, grid, options);
    out.max_change = (report.p - out.report.p).cwiseAbs().maxCoeff();
    out.rate_constant = out.max_change / out.grid.dt();
    out.grid = grid;
    out.report = std::move(report);
    out.refinements = i + 1;
    if (out.max_change < tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace

ConvergenceResult converge_steps(const Problem& problem, const TimeGrid& initial, double tol,
                                 std::size_t max_refinements, const PropagateOptions& options) {
  return converge_with(problem, initial, tol, max_refinements, options,
                       [](const TimeGrid& g) { return g.refined(); });
}

ConvergenceResult converge_interval(const Problem& problem, const TimeGrid& initial, double tol,
                                    std::size_t max_extensions, const PropagateOptions& options) {
  return converge_with(problem, initial, tol, max_extensions, options,
                       [](const TimeGrid& g) { return g.extended(); });
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> v;
  if (count == 1) return {start};
  for (std::size_t k = 0; k < count; ++k)
    v.push_back(k + 1 == count ? stop
                               : start + (stop - start) * static_cast<double>(k) / static_cast<double>(count - 1));
  return v;
}

std::string SweepAxis::label() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (i) os << ",";
    os << targets[i].first;
    if (targets[i].second != 1.0) os << "*" << targets[i].second;
  }
  return os.str();
}

namespace {

double parse_number(const std::string& text, const std::string& context) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v))
    throw InvalidInput("malformed number '" + text + "' in " + context);
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

}  // namespace

SweepAxis parse_sweep_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw InvalidInput("sweep spec '" + text + "' lacks '='");
  SweepAxis axis;
  for (const std::string& item : split(text.substr(0, eq), ',')) {
    const auto star = item.find('*');
    const std::string key = item.substr(0, star);
    if (key.empty()) throw InvalidInput("sweep spec '" + text + "' has an empty key");
    const double factor = star == std::string::npos ? 1.0 : parse_number(item.substr(star + 1), "sweep factor");
    axis.targets.emplace_back(key, factor);
  }
  const auto range = split(text.substr(eq + 1), ':');
  if (range.size() != 3) throw InvalidInput("sweep range must be start:stop:count");
  axis.start = parse_number(range[0], "sweep start");
  axis.stop = parse_number(range[1], "sweep stop");
  const double count = parse_number(range[2], "sweep count");
  if (count < 1 || count != std::floor(count)) throw InvalidInput("sweep count must be a positive integer");
  axis.count = static_cast<std::size_t>(count);
  return axis;
}

bool SweepResult::all_pass() const {
  return std::all_of(points.begin(), points.end(), [](const SweepPoint& p) { return p.theorem_pass; });
}

namespace {

SweepPoint run_point(const std::string& model, ParamMap params, const SweepAxis& axis, double value,
                     std::span<const TransitionPair> pairs, const SweepOptions& options) {
  for (const auto& [key, factor] : axis.targets) params[key] = factor * value;
  const Problem problem = build_model(model, params);

  SweepPoint point;
  point.value = value;
  const std::size_t steps = options.steps_per_half ? options.steps_per_half
                                                   : default_steps_per_half(problem.h, options.half_span);
  TimeGrid grid = TimeGrid::symmetric(options.half_span, steps);
  ScatteringReport report;
  if (options.converge) {
    ConvergenceResult by_steps = converge_steps(problem, grid, 1e-4, 6, options.propagate);
    ConvergenceResult by_span = converge_interval(problem, by_steps.grid, 1e-4, 3, options.propagate);
    point.converged = by_steps.converged && by_span.converged;
    grid = by_span.grid;
    report = std::move(by_span.report);
  } else {
    report = run_report(problem, grid, options.propagate);
  }
  point.steps_per_half = grid.steps() / 2;
  point.half_span = grid.end();
  point.unitarity_defect = report.unitarity_defect;
  point.stochastic_defect = report.stochastic_defect();
  for (const TransitionPair& p : pairs) {
    if (p.from >= problem.basis.size() || p.to >= problem.basis.size())
      throw InvalidInput("sweep: pair index out of range");
    point.probabilities.push_back(report.probability(p.from, p.to));
  }

  const TimeReversalOp theta = time_reversal(problem.system);
  const std::vector<double> sample = symmetric_check_grid(grid.end());
  point.theorem_applies = problem.system.half_integer() &&
                          check_dynamic_symmetry(problem.h, theta, sample, 1e-10).pass;
  if (point.theorem_applies) {
    attach_kramers_verdicts(report, theta, problem.basis, options.tol);
    for (const PairVerdict& v : report.verdicts) {
      point.max_partner_probability = std::max(point.max_partner_probability, v.probability);
      point.theorem_pass = point.theorem_pass && v.pass;
    }
  }
  return point;
}

}  // namespace

SweepResult sweep(const std::string& model, const ParamMap& fixed, const SweepAxis& axis,
                  std::span<const TransitionPair> pairs, const SweepOptions& options) {
  // Validates the model name and every key before any thread starts.
  ParamMap probe = fixed;
  for (const auto& [key, factor] : axis.targets) probe[key] = factor * axis.start;
  (void)build_model(model, probe);

  SweepResult result;
  result.label = axis.label();
  result.pairs.assign(pairs.begin(), pairs.end());
  const std::vector<double> values = axis.values();
  result.points.resize(values.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    for (std::size_t i = next++; i < values.size() && !failed; i = next++) {
      try {
        result.points[i] = run_point(model, fixed, axis, values[i], pairs, options);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, std::max<std::size_t>(values.size(), 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return result;
}

std::size_t default_workers() {
  if (const char* env = std::getenv("KRAMERS_LZ_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace kramers
