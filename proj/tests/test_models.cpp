#include <doctest.h>

#include "kramers/error.hpp"
#include "kramers/models.hpp"

#include <cmath>
#include <random>

using namespace kramers;

namespace {

double draw(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(-2.0, 2.0)(rng); }

// Largest entry difference between a matrix model and an operator form,
// compared through the model's basis mapping.
double form_mismatch(const MatrixModel& m, const Hamiltonian& op) {
  double worst = 0.0;
  for (double t : {-3.0, -0.4, 0.0, 1.1, 5.0}) {
    const ComplexMatrix a = m.h.at(t);
    const ComplexMatrix b = op.evaluate(t);
    for (std::size_t i = 0; i < m.operator_index.size(); ++i)
      for (std::size_t j = 0; j < m.operator_index.size(); ++j)
        worst = std::max(worst, std::abs(a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                                         b(static_cast<Eigen::Index>(m.operator_index[i]),
                                           static_cast<Eigen::Index>(m.operator_index[j]))));
  }
  return worst;
}

}  // namespace

TEST_CASE("two-state model and its formula") {
  const Hamiltonian h = lz_two_state(0.5, 2.0);
  const ComplexMatrix m = h.evaluate(3.0);
  CHECK(m(0, 0).real() == doctest::Approx(6.0));
  CHECK(m(1, 1).real() == doctest::Approx(-6.0));
  CHECK(m(0, 1).real() == doctest::Approx(0.5));
  CHECK(lz_probability(1.0, 1.0) == doctest::Approx(1.0 - std::exp(-M_PI)));
  CHECK(lz_probability(0.5, 1.0) == doctest::Approx(1.0 - std::exp(-M_PI / 4)));
  CHECK_THROWS_AS(lz_two_state(1.0, 0.0), InvalidInput);
}

TEST_CASE("spin-3/2 matrix form equals the operator form") {
  std::mt19937_64 rng(101);
  for (int k = 0; k < 20; ++k) {
    const Spin32Params p{draw(rng), draw(rng), draw(rng), draw(rng), draw(rng)};
    CHECK(form_mismatch(spin32_matrix_form(p), spin32_operator_form(p, spin32_matrix_theta)) < 1e-12);
  }
}

TEST_CASE("spin-3/2 derived couplings appear in the matrix") {
  const Spin32Params p{0.7, -0.3, 1.2, 0.4, 0.9};
  const Spin32Derived d = spin32_derived(p);
  const MatrixModel m = spin32_matrix_form(p);
  const ComplexMatrix a = m.h.at(0.0);
  const ComplexMatrix slope = m.h.at(1.0) - a;
  CHECK(slope(0, 0).real() == doctest::Approx(d.beta1));
  CHECK(slope(2, 2).real() == doctest::Approx(d.beta2));
  CHECK(a(0, 0).real() == doctest::Approx(d.delta1));
  CHECK(a(2, 2).real() == doctest::Approx(d.delta2));
  CHECK(hermitian_defect(a) < 1e-15);
}

TEST_CASE("half-one matrix form equals the operator form") {
  std::mt19937_64 rng(202);
  for (int k = 0; k < 20; ++k) {
    HalfOneParams p;
    p.eps1 = draw(rng);
    p.eps2 = draw(rng);
    for (double& g : p.g) g = draw(rng);
    p.h1 = draw(rng);
    p.h2 = draw(rng);
    p.h3 = draw(rng);
    CHECK(form_mismatch(half_one_matrix_form(p), half_one_operator_form(p)) < 1e-12);
  }
}

TEST_CASE("central-spin matrix form equals the operator form") {
  std::mt19937_64 rng(303);
  for (int k = 0; k < 20; ++k) {
    CentralSpinParams p;
    p.h1 = draw(rng);
    p.eps1 = draw(rng);
    p.eps2 = draw(rng);
    p.eps3 = draw(rng);
    for (double& g : p.g) g = draw(rng);
    CHECK(form_mismatch(central_spin_matrix_form(p), central_spin_operator_form(p)) < 1e-12);
  }
}

TEST_CASE("central-spin derived values") {
  CentralSpinParams p;
  p.h1 = 0.5;
  p.eps1 = 1.0;
  p.eps2 = 0.5;
  p.eps3 = 0.1;
  p.g = {1.0, 0.0, 1.0, 0.5, 0.0, 0.0};
  const CentralSpinDerived d = central_spin_derived(p);
  CHECK(d.beta == doctest::Approx(0.25));
  CHECK(d.delta[0] == doctest::Approx(0.4));
  CHECK(d.gamma[0] == doctest::Approx(0.25));
  CHECK(d.gamma[3] == doctest::Approx(0.125));
}

TEST_CASE("Kramers partners of the published bases") {
  auto partners = [](const Problem& p) {
    std::vector<std::size_t> out;
    for (const KramersPair& kp : kramers_pairs(time_reversal(p.system), p.basis)) {
      CHECK(std::abs(std::abs(kp.phase) - 1.0) < 1e-12);
      out.push_back(kp.partner);
    }
    return out;
  };
  CHECK(partners(build_model("spin32", {{"h1", 1.0}})) == std::vector<std::size_t>{1, 0, 3, 2});
  CHECK(partners(build_model("half-one", {})) == std::vector<std::size_t>{5, 4, 3, 2, 1, 0});
  CHECK(partners(build_model("central-spin", {})) == std::vector<std::size_t>{7, 6, 5, 4, 3, 2, 1, 0});
  CHECK(partners(build_model("lz2", {{"beta", 1.0}})) == std::vector<std::size_t>{1, 0});
}

TEST_CASE("Kramers pairing rejects superposition bases") {
  const SpinSystem sys({1});
  DiabaticBasis basis{{"a", "b"}, {0, 1}};
  TimeReversalOp theta = time_reversal(sys);
  theta.u = (theta.u * expm_hermitian(spin_matrices(1).x, Complex(0.0, -0.5))).eval();
  CHECK_THROWS_AS(kramers_pairs(theta, basis), InvalidInput);
}

TEST_CASE("model catalog and parameter validation") {
  CHECK(model_catalog().size() == 4);
  CHECK_THROWS_AS(build_model("nope", {}), InvalidInput);
  CHECK_THROWS_AS(build_model("spin32", {{"g9", 1.0}}), InvalidInput);
  CHECK_THROWS_AS(build_model("spin32", {{"g1", NAN}}), InvalidInput);
  const Problem p = build_model("half-one", {{"eps1", 1.0}, {"g1", 1.0}});
  CHECK(p.basis.names.size() == 6);
  CHECK(p.operator_form.has_value());
  CHECK(p.system.half_integer());
}

TEST_CASE("computational basis names") {
  const DiabaticBasis b = DiabaticBasis::computational(SpinSystem({1, 2}));
  REQUIRE(b.size() == 6);
  CHECK(b.names[0] == "(+1/2,+1)");
  CHECK(b.names[4] == "(-1/2,0)");
}

TEST_CASE("make_problem validates the basis") {
  const Hamiltonian h = lz_two_state(1.0, 1.0);
  CHECK_THROWS_AS(make_problem("x", h, DiabaticBasis{{"a", "b"}, {0, 0}}), InvalidInput);
  CHECK_THROWS_AS(make_problem("x", h, DiabaticBasis{{"a"}, {0}}), InvalidInput);
  CHECK_NOTHROW(make_problem("x", h, DiabaticBasis{{"a", "b"}, {1, 0}}));
}
