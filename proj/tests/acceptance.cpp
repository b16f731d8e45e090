// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include "hamspec_fixtures.hpp"

#include "kramers/analysis.hpp"
#include "kramers/hamspec.hpp"
#include "kramers/models.hpp"
#include "kramers/propagator.hpp"
#include "kramers/simd/kernels.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace kramers;

namespace {

using Clock = std::chrono::steady_clock;

// Largest |U^H U - I| seen by any propagation in this run.
double g_unitarity = 0.0;
std::size_t g_propagations = 0;

void track(double defect) {
  g_unitarity = std::max(g_unitarity, defect);
  ++g_propagations;
}

Propagation run(const MatrixPolynomial& h, const TimeGrid& grid, const PropagateOptions& o = {}) {
  Propagation p = propagate(h, grid, o);
  track(p.unitarity_defect);
  return p;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double max_partner(const ScatteringReport& r) {
  double m = 0.0;
  for (const PairVerdict& v : r.verdicts) m = std::max(m, v.probability);
  return m;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ParamMap half_one_reference() {
  return {{"eps1", 1.0}, {"eps2", 0.2}, {"g1", 1.0}, {"g2", 1.0}, {"g4", 1.0}, {"h1", 1.0}, {"h2", 0.2}};
}
ParamMap central_weak_coupling() {
  return {{"h1", 1.0}, {"eps1", 1.0}, {"eps2", 0.5}, {"eps3", 0.1}, {"g1", 0.1}, {"g3", 0.1}, {"g4", 0.1}};
}
ParamMap central_strong_coupling() {
  return {{"h1", 0.5}, {"eps1", 1.0}, {"eps2", 0.5}, {"eps3", 0.1}, {"g1", 1.0}, {"g3", 1.0}, {"g4", 0.5}};
}
ParamMap spin32_reference() {
  return {{"h1", 1.0}, {"h2", 0.3}, {"g1", 1.0}, {"g2", 0.5}, {"phi", 0.7}};
}

// ---------------------------------------------------------------------------

Outcome two_state_oracle() {
  const auto start = Clock::now();
  double worst = 0.0;
  std::string detail;
  for (const double g : {1.0, 0.5}) {
    const Problem p = build_model("lz2", {{"g", g}, {"beta", 1.0}});
    const Propagation prop = run(p.h, TimeGrid::symmetric(200.0, 200000));
    const double got = scattering_matrix(prop, p.basis).probability(0, 1);
    const double want = 1.0 - std::exp(-std::numbers::pi * g * g);
    worst = std::max(worst, std::abs(got - want));
    detail += fmt("g=%.1f P=%.7f vs %.7f err %.2e (%s); ", g, got, want, std::abs(got - want),
                  std::abs(got - want) < 1e-3 ? "within 1e-3" : "exceeds 1e-3");
  }
  const double elapsed = seconds_since(start);
  return {worst < 1e-3 && elapsed < 10.0, detail + fmt("T=200, n=2e5, %.1f s", elapsed)};
}

Outcome spin32_zeros() {
  const auto start = Clock::now();
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst = 0.0;
  std::size_t converged = 0;
  std::size_t max_n = 0;
  for (int k = 0; k < 20; ++k) {
    ParamMap params;
    for (const char* key : {"h1", "h2", "g1", "g2", "phi", "theta"}) params[key] = u(rng);
    const Problem p = build_model("spin32", params);
    const ConvergenceResult c = converge_steps(p, TimeGrid::symmetric(50.0, 2500), 1e-4, 5);
    track(c.report.unitarity_defect);
    converged += c.converged;
    max_n = std::max(max_n, c.grid.steps() / 2);
    ScatteringReport r = c.report;
    attach_kramers_verdicts(r, time_reversal(p.system), p.basis, 1e-6);
    // |S_{3/2 -> -3/2}|^2 and |S_{1/2 -> -1/2}|^2
    worst = std::max({worst, r.probability(0, 1), r.probability(2, 3)});
  }
  const double elapsed = seconds_since(start);
  return {worst < 1e-6 && elapsed < 60.0,
          fmt("20 draws, max partner P %.2e, converged %zu/20, n up to %zu, %.1f s", worst, converged, max_n, elapsed)};
}

Outcome half_one_curves() {
  const auto start = Clock::now();
  const Problem p = build_model("half-one", half_one_reference());
  PropagateOptions o;
  o.checkpoint_stride = 100;
  const Propagation prop = run(p.h, TimeGrid::symmetric(6.0, 30000), o);
  const std::vector<TransitionPair> pairs{{0, 5}, {1, 4}, {2, 3}};
  const CurveSeries c = probability_curves(prop, p.basis, pairs);
  bool ok = true;
  double final_max = 0.0, peak_min = 1.0;
  const Eigen::Index last = c.values.rows() - 1;
  for (Eigen::Index j = 0; j < 3; ++j) {
    const double final_value = c.values(last, j);
    const double peak = c.values.col(j).head(last).maxCoeff();
    ok = ok && final_value < 1e-6 && peak > 1e-3;
    final_max = std::max(final_max, final_value);
    peak_min = std::min(peak_min, peak);
  }
  const double elapsed = seconds_since(start);
  return {ok && elapsed < 10.0, fmt("final max %.2e, smallest intermediate peak %.3f, %.1f s", final_max, peak_min, elapsed)};
}

Outcome central_spin_zeros() {
  const auto start = Clock::now();
  // Strong coupling: four partner pairs from t = -6 to 6.
  const Problem b = build_model("central-spin", central_strong_coupling());
  const TheoremReport rb = verify_no_scattering(b, TimeGrid::symmetric(6.0, 30000));
  track(rb.scattering.unitarity_defect);
  const double pb = max_partner(rb.scattering);
  bool ok = rb.status == TheoremStatus::Pass && pb < 1e-6;

  SweepOptions o;
  o.half_span = 200.0;
  o.steps_per_half = 50000;
  o.workers = default_workers();

  // Coupling sweep: g1 = g3 = g4 = 4g, initial level 3.
  const auto sweep_start = Clock::now();
  const SweepResult c = sweep("central-spin", {{"h1", 2.0}, {"eps1", 2.0}, {"eps2", 1.0}},
                              parse_sweep_axis("g1*4,g3*4,g4*4=0.05:1:20"), std::vector<TransitionPair>{{2, 5}}, o);
  const double c_time = seconds_since(sweep_start);
  // Splitting sweep: eps1 = 4 eps, eps2 = 2 eps, initial level 4.
  const auto d_start = Clock::now();
  const SweepResult d = sweep("central-spin", {{"h1", 2.0}, {"g1", 1.2}, {"g3", 1.2}, {"g4", 1.2}},
                              parse_sweep_axis("eps1*4,eps2*2=0.1:2:20"), std::vector<TransitionPair>{{3, 4}}, o);
  const double d_time = seconds_since(d_start);

  double pc = 0.0, pd = 0.0;
  for (const SweepPoint& pt : c.points) {
    pc = std::max(pc, pt.probabilities[0]);
    track(pt.unitarity_defect);
  }
  for (const SweepPoint& pt : d.points) {
    pd = std::max(pd, pt.probabilities[0]);
    track(pt.unitarity_defect);
  }
  ok = ok && pc < 1e-6 && pd < 1e-6 && c.all_pass() && d.all_pass() && c_time < 120.0 && d_time < 120.0;
  return {ok, fmt("fixed max partner P %.2e; g sweep max P_3->6 %.2e in %.1f s; eps sweep max P_4->5 %.2e in %.1f s; "
                  "T=200, n=50000, %zu workers",
                  pb, pc, c_time, pd, d_time, o.workers) +
                  fmt(", total %.1f s", seconds_since(start))};
}

Outcome algebraic_identities() {
  const auto start = Clock::now();
  double theta_sq = 0.0, odd = 0.0, forms = 0.0;
  for (const std::vector<int>& spins : std::vector<std::vector<int>>{
           {1}, {2}, {3}, {4}, {5}, {1, 1}, {1, 2}, {3, 1}, {1, 1, 1}, {2, 2}, {1, 3, 2}}) {
    const SpinSystem sys(spins);
    const TimeReversalOp theta = time_reversal(sys);
    const auto n = static_cast<Eigen::Index>(sys.dim());
    const double sign = sys.half_integer() ? -1.0 : 1.0;
    theta_sq = std::max(theta_sq, max_abs_diff(theta.u * theta.u.conjugate(), sign * ComplexMatrix::Identity(n, n)));
    for (std::size_t site = 0; site < sys.sites(); ++site)
      for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
        const ComplexMatrix s = site_operator(sys, site, a);
        odd = std::max(odd, max_abs_diff(conjugate_by_theta(theta, s), -s));
      }
  }

  auto mismatch = [](const MatrixModel& m, const Hamiltonian& op) {
    double worst = 0.0;
    for (double t : {-4.0, -1.0, 0.0, 0.3, 2.5}) {
      const ComplexMatrix a = m.h.at(t), b = op.evaluate(t);
      for (std::size_t i = 0; i < m.operator_index.size(); ++i)
        for (std::size_t j = 0; j < m.operator_index.size(); ++j)
          worst = std::max(worst, std::abs(a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                                           b(static_cast<Eigen::Index>(m.operator_index[i]),
                                             static_cast<Eigen::Index>(m.operator_index[j]))));
    }
    return worst;
  };
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 20; ++k) {
    const Spin32Params s{u(rng), u(rng), u(rng), u(rng), u(rng)};
    forms = std::max(forms, mismatch(spin32_matrix_form(s), spin32_operator_form(s, spin32_matrix_theta)));
    HalfOneParams h;
    h.eps1 = u(rng);
    h.eps2 = u(rng);
    for (double& g : h.g) g = u(rng);
    h.h1 = u(rng);
    h.h2 = u(rng);
    h.h3 = u(rng);
    forms = std::max(forms, mismatch(half_one_matrix_form(h), half_one_operator_form(h)));
    CentralSpinParams c;
    c.h1 = u(rng);
    c.eps1 = u(rng);
    c.eps2 = u(rng);
    c.eps3 = u(rng);
    for (double& g : c.g) g = u(rng);
    forms = std::max(forms, mismatch(central_spin_matrix_form(c), central_spin_operator_form(c)));
    // A propagation per draw for the unitarity record.
    run(half_one_operator_form(h).matrix(), TimeGrid::symmetric(10.0, 4000));
  }
  const bool ok = theta_sq < 1e-12 && odd < 1e-12 && forms < 1e-12 && g_unitarity < 1e-10;
  return {ok, fmt("Theta^2 dev %.1e, Theta S Theta^-1 + S dev %.1e, operator/matrix dev %.1e, "
                  "max unitarity defect %.1e over %zu propagations, %.1f s",
                  theta_sq, odd, forms, g_unitarity, g_propagations, seconds_since(start))};
}

Outcome discrete_mechanism() {
  const auto start = Clock::now();
  double symmetric = 0.0;
  const std::vector<std::pair<std::string, ParamMap>> cases{
      {"spin32", spin32_reference()}, {"half-one", half_one_reference()}, {"central-spin", central_strong_coupling()}};
  for (const auto& [name, params] : cases) {
    const Problem p = build_model(name, params);
    const Propagation prop = run(p.h, TimeGrid::symmetric(name == "spin32" ? 50.0 : 6.0, 100000));
    symmetric = std::max(symmetric, theta_conjugation_identity(prop, time_reversal(p.system)));
  }
  // H = t S_z + S_z: the odd part cancels on the grid, leaving deviation 2|sin T|.
  const SpinSystem sys({1});
  const Hamiltonian broken(sys, {{TimePolynomial{{0, 1.0}, {1, 1.0}}, {{0, Axis::Z, 1}}}});
  const double T = 50.0;
  const Propagation prop = run(broken.matrix(), TimeGrid::symmetric(T, 10000));
  const double control = theta_conjugation_identity(prop, time_reversal(sys));
  const bool ok = symmetric < 1e-8 && control > 1e-2 && std::abs(control - 2.0 * std::abs(std::sin(T))) < 1e-8;
  return {ok, fmt("symmetric max dev %.1e (n=1e5), broken control dev %.4f (analytic %.4f), %.1f s", symmetric, control,
                  2.0 * std::abs(std::sin(T)), seconds_since(start))};
}

Outcome kramers_degeneracy() {
  const auto start = Clock::now();
  double worst = 0.0;
  const std::vector<std::pair<std::string, ParamMap>> cases{{"spin32", spin32_reference()},
                                                           {"half-one", half_one_reference()},
                                                           {"central-spin", central_weak_coupling()},
                                                           {"central-spin", central_strong_coupling()}};
  for (const auto& [name, params] : cases) {
    const Problem p = build_model(name, params);
    worst = std::max(worst, kramers_pair_gap(p.h, 0.0));
    const LevelDiagram d = level_diagram(p.h, -6.0, 6.0, 601);
    for (Eigen::Index k = 0; k + 1 < d.sorted.cols(); k += 2)
      worst = std::max(worst, std::abs(d.sorted(300, k + 1) - d.sorted(300, k)));
  }
  return {worst < 1e-10, fmt("max gap inside pairs at t=0 %.1e over 4 parameter sets, %.1f s", worst, seconds_since(start))};
}

Outcome integer_spin_control() {
  const auto start = Clock::now();
  // Two spin-1/2: odd-in-t fields plus time-independent two-spin couplings.
  const SpinSystem sys({1, 1});
  const Hamiltonian h(sys, {{TimePolynomial::linear(1.0), {{0, Axis::Z, 1}}},
                            {TimePolynomial::linear(-0.6), {{1, Axis::Z, 1}}},
                            {TimePolynomial::constant(1.0), {{0, Axis::X, 1}, {1, Axis::X, 1}}},
                            {TimePolynomial::constant(0.4), {{0, Axis::Z, 1}, {1, Axis::Z, 1}}}});
  const Problem p = make_problem("control", h);
  const TheoremReport r = verify_no_scattering(p, TimeGrid::symmetric(50.0, 20000));
  track(r.scattering.unitarity_defect);
  const double worst = max_partner(r.scattering);
  const bool ok = r.dynamic_symmetry.pass && r.status == TheoremStatus::NotApplicable && worst > 1e-3;
  return {ok, fmt("symmetric (dev %.1e), total spin integer, max partner P %.4f, %.1f s", r.dynamic_symmetry.max_deviation,
                  worst, seconds_since(start))};
}

Outcome parser_round_trip() {
  const auto start = Clock::now();
  std::mt19937_64 rng(909);
  std::size_t intact = 0;
  for (int k = 0; k < 100; ++k) {
    const HamSpecDocument doc = fixtures::random_document(rng);
    try {
      if (structurally_equal(parse_hamspec(serialize(doc)), doc)) ++intact;
    } catch (const std::exception&) {
    }
  }
  std::size_t correct = 0, total = 0;
  for (const auto& c : fixtures::labeled_corpus(KRAMERS_TEST_DATA "/corpus")) {
    ++total;
    try {
      const Hamiltonian h = to_hamiltonian(load_hamspec(c.path));
      const bool herm = check_hermitian(h, symmetric_check_grid(3.0)).pass;
      const bool parity = check_parity_symmetry(h).pass;
      correct += herm == c.hermitian && parity == c.parity;
    } catch (const std::exception&) {
    }
  }
  return {intact == 100 && total == 10 && correct == 10,
          fmt("round trip %zu/100, labeled verdicts %zu/%zu, %.2f s", intact, correct, total, seconds_since(start))};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"two-state LZ oracle", two_state_oracle},
      {"spin-3/2 partner zeros", spin32_zeros},
      {"half-one partner curves", half_one_curves},
      {"central-spin partner zeros and sweeps", central_spin_zeros},
      {"exact algebraic identities", algebraic_identities},
      {"discrete Theta U Theta^-1 = U^H", discrete_mechanism},
      {"Kramers degeneracy at t = 0", kramers_degeneracy},
      {"integer-spin negative control", integer_spin_control},
      {"hamspec round trip and static verdicts", parser_round_trip},
  };
  std::printf("kernels: %s\n", std::string(simd::active_kernels().name).c_str());
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s criterion %zu: %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
