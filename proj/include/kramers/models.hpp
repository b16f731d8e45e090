#pragma once

// The concrete systems: two-state Landau-Zener, spin-3/2 with quadrupole
// anisotropy, spin-1/2 coupled to spin-1, and a central spin-1/2 with two
// satellite spins-1/2. Each has an operator form (spin-operator terms) and an
// explicit matrix form in its published diabatic basis.

#include "kramers/hamiltonian.hpp"
#include "kramers/linalg.hpp"
#include "kramers/spin_algebra.hpp"

#include <array>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace kramers {

/// Labels the scattering basis. basis_index[k] is the computational basis
/// index of diabatic state k.
struct DiabaticBasis {
  std::vector<std::string> names;
  std::vector<std::size_t> basis_index;

  std::size_t size() const noexcept { return basis_index.size(); }
  /// Identity mapping with product-state names such as "(+1/2,-1)".
  static DiabaticBasis computational(const SpinSystem& sys);
};

/// Everything needed to propagate and analyse one Hamiltonian.
struct Problem {
  std::string name;
  SpinSystem system;
  MatrixPolynomial h;
  DiabaticBasis basis;
  /// Present when the problem was built from spin-operator terms.
  std::optional<Hamiltonian> operator_form;
};

Problem make_problem(std::string name, const Hamiltonian& h, DiabaticBasis basis);
Problem make_problem(std::string name, const Hamiltonian& h);

/// A matrix form together with the mapping into the operator-form basis:
/// operator_index[k] is the operator-basis index of matrix basis state k.
struct MatrixModel {
  MatrixPolynomial h;
  std::vector<std::string> names;
  std::vector<std::size_t> operator_index;
};

// ---- two-state Landau-Zener: beta t sigma_z + g sigma_x ----

/// Throws InvalidInput for beta <= 0.
Hamiltonian lz_two_state(double g, double beta);
double lz_probability(double g, double beta);

// ---- spin-3/2 ----

struct Spin32Params {
  double h1 = 0.0;
  double h2 = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
  double phi = 0.0;
};

struct Spin32Derived {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
};

Spin32Derived spin32_derived(const Spin32Params& p);

/// g1 (n.S)^2 + h1 t S_z + h2 t S_z^3 + g2 (n_perp.S)^2 with
/// n = (cos phi, 0, sin phi), n_perp = (-sin phi sin theta, cos theta, cos phi sin theta).
Hamiltonian spin32_operator_form(const Spin32Params& p, double theta);

/// The 4x4 matrix in the basis (|3/2>, |-3/2>, |1/2>, |-1/2>). Its entries
/// coincide with spin32_operator_form at theta = pi/2, where n_perp lies in the
/// xz-plane; see spin32_matrix_theta.
MatrixModel spin32_matrix_form(const Spin32Params& p);
inline constexpr double spin32_matrix_theta = std::numbers::pi / 2;

// ---- spin-1/2 (site 0) coupled to spin-1 (site 1) ----

struct HalfOneParams {
  double eps1 = 0.0;
  double eps2 = 0.0;
  std::array<double, 8> g{};  // g[0] is g1
  double h1 = 0.0;
  double h2 = 0.0;
  double h3 = 0.0;
};

struct HalfOneDerived {
  double delta1 = 0.0;
  double delta2 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double beta3 = 0.0;
  Complex gamma1;
  Complex gamma2;
  Complex gamma3;
  Complex gamma4;
};

HalfOneDerived half_one_derived(const HalfOneParams& p);
Hamiltonian half_one_operator_form(const HalfOneParams& p);
/// Basis (up 1, up 0, up -1, down 1, down 0, down -1).
MatrixModel half_one_matrix_form(const HalfOneParams& p);

// ---- central spin-1/2 (site 0) with two spins-1/2 (sites 1, 2) ----

struct CentralSpinParams {
  double h1 = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
  double eps3 = 0.0;
  std::array<double, 6> g{};  // g[0] is g1
};

struct CentralSpinDerived {
  double beta = 0.0;
  std::array<double, 4> delta{};  // delta[0] is Delta_1
  std::array<double, 6> gamma{};  // gamma[0] is gamma_1
};

CentralSpinDerived central_spin_derived(const CentralSpinParams& p);
Hamiltonian central_spin_operator_form(const CentralSpinParams& p);
/// Basis (uuu, uud, udu, udd, duu, dud, ddu, ddd).
MatrixModel central_spin_matrix_form(const CentralSpinParams& p);

// ---- Kramers partners ----

struct KramersPair {
  std::size_t state = 0;    // diabatic index
  std::size_t partner = 0;  // diabatic index of Theta|state>
  Complex phase;            // Theta|state> = phase |partner>
};

/// One entry per diabatic state. Throws InvalidInput when Theta maps a
/// diabatic state onto a superposition of diabatic states.
std::vector<KramersPair> kramers_pairs(const TimeReversalOp& theta, const DiabaticBasis& basis);

// ---- named models with key=value parameters ----

using ParamMap = std::map<std::string, double>;

struct ModelSpec {
  std::string name;
  std::vector<std::string> keys;
};

/// lz2, spin32, half-one, central-spin.
const std::vector<ModelSpec>& model_catalog();

/// Builds the operator form with the published diabatic labels. Missing keys
/// default to 0. Throws InvalidInput for an unknown model or key.
Problem build_model(const std::string& name, const ParamMap& params);

}  // namespace kramers
