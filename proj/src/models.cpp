#include "kramers/models.hpp"

#include "kramers/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kramers {
namespace {

using std::numbers::sqrt3;
constexpr double kSqrt2 = std::numbers::sqrt2;

HamiltonianTerm term(TimePolynomial coeff, std::vector<SpinFactor> factors) {
  return HamiltonianTerm{std::move(coeff), std::move(factors)};
}

SpinFactor f(std::size_t site, Axis axis, int exponent = 1) { return SpinFactor{site, axis, exponent}; }

// Writes value at (i, j) and its conjugate at (j, i); indices are 1-based to
// match the printed matrices.
struct HermitianFill {
  ComplexMatrix& m;
  void operator()(int i, int j, Complex value) const {
    m(i - 1, j - 1) = value;
    m(j - 1, i - 1) = std::conj(value);
  }
};

std::string signed_label(int twice_m) {
  if (twice_m == 0) return "0";
  return (twice_m > 0 ? "+" : "-") + spin_label(std::abs(twice_m));
}

}  // namespace

DiabaticBasis DiabaticBasis::computational(const SpinSystem& sys) {
  DiabaticBasis basis;
  const std::size_t n = sys.dim();
  for (std::size_t k = 0; k < n; ++k) {
    std::string name = "(";
    std::size_t rest = k;
    std::size_t stride = n;
    for (std::size_t site = 0; site < sys.sites(); ++site) {
      stride /= sys.site_dim(site);
      const auto local = static_cast<int>(rest / stride);
      rest %= stride;
      if (site) name += ",";
      name += signed_label(sys.twice_spin(site) - 2 * local);
    }
    basis.names.push_back(name + ")");
    basis.basis_index.push_back(k);
  }
  return basis;
}

Problem make_problem(std::string name, const Hamiltonian& h, DiabaticBasis basis) {
  if (basis.size() != h.system().dim())
    throw InvalidInput("diabatic basis size does not match the Hilbert space");
  std::vector<std::size_t> seen = basis.basis_index;
  std::sort(seen.begin(), seen.end());
  for (std::size_t k = 0; k < seen.size(); ++k)
    if (seen[k] != k) throw InvalidInput("diabatic labels are not a permutation of the basis");
  return Problem{std::move(name), h.system(), h.matrix(), std::move(basis), h};
}

Problem make_problem(std::string name, const Hamiltonian& h) {
  return make_problem(std::move(name), h, DiabaticBasis::computational(h.system()));
}

// ---------------------------------------------------------------------------

Hamiltonian lz_two_state(double g, double beta) {
  if (!(beta > 0.0)) throw InvalidInput("lz2: beta must be positive");
  // sigma = 2 S for spin-1/2.
  return Hamiltonian(SpinSystem({1}), {term(TimePolynomial::linear(2.0 * beta), {f(0, Axis::Z)}),
                                       term(TimePolynomial::constant(2.0 * g), {f(0, Axis::X)})});
}

double lz_probability(double g, double beta) {
  if (!(beta > 0.0)) throw InvalidInput("lz2: beta must be positive");
  return -std::expm1(-std::numbers::pi * g * g / beta);
}

// ---------------------------------------------------------------------------

Spin32Derived spin32_derived(const Spin32Params& p) {
  const double c = std::cos(2.0 * p.phi);
  const double s = std::sin(2.0 * p.phi);
  Spin32Derived d;
  d.beta1 = 1.5 * p.h1 + 27.0 / 8.0 * p.h2;
  d.beta2 = 0.5 * p.h1 + 1.0 / 8.0 * p.h2;
  d.delta1 = 1.5 * (p.g1 + p.g2) - 0.75 * (p.g1 - p.g2) * c;
  d.delta2 = p.g1 + p.g2 + 0.75 * (p.g1 - p.g2) * c;
  d.gamma2 = sqrt3 / 2.0 * (p.g1 - p.g2) * s;
  d.gamma1 = sqrt3 / 4.0 * (p.g1 + p.g2 + (p.g1 - p.g2) * c);
  return d;
}

Hamiltonian spin32_operator_form(const Spin32Params& p, double theta) {
  const std::array<double, 3> n{std::cos(p.phi), 0.0, std::sin(p.phi)};
  const std::array<double, 3> n_perp{-std::sin(p.phi) * std::sin(theta), std::cos(theta),
                                     std::cos(p.phi) * std::sin(theta)};
  constexpr std::array<Axis, 3> axes{Axis::X, Axis::Y, Axis::Z};

  std::vector<HamiltonianTerm> terms;
  // (v.S)^2 = sum_ab v_a v_b S_a S_b, kept as ordered products.
  auto add_quadratic = [&](double g, const std::array<double, 3>& v) {
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) {
        const double c = g * v[a] * v[b];
        if (c == 0.0) continue;
        if (a == b)
          terms.push_back(term(TimePolynomial::constant(c), {f(0, axes[a], 2)}));
        else
          terms.push_back(term(TimePolynomial::constant(c), {f(0, axes[a]), f(0, axes[b])}));
      }
  };
  add_quadratic(p.g1, n);
  terms.push_back(term(TimePolynomial::linear(p.h1), {f(0, Axis::Z)}));
  terms.push_back(term(TimePolynomial::linear(p.h2), {f(0, Axis::Z, 3)}));
  add_quadratic(p.g2, n_perp);
  return Hamiltonian(SpinSystem({3}), std::move(terms));
}

MatrixModel spin32_matrix_form(const Spin32Params& p) {
  const Spin32Derived d = spin32_derived(p);
  ComplexMatrix a = ComplexMatrix::Zero(4, 4);
  ComplexMatrix r = ComplexMatrix::Zero(4, 4);
  r.diagonal() << d.beta1, -d.beta1, d.beta2, -d.beta2;
  a.diagonal() << d.delta1, d.delta1, d.delta2, d.delta2;
  HermitianFill set{a};
  set(1, 3, d.gamma2);
  set(1, 4, d.gamma1);
  set(2, 3, d.gamma1);
  set(2, 4, -d.gamma2);
  // Operator basis is descending m: 3/2, 1/2, -1/2, -3/2.
  return MatrixModel{MatrixPolynomial(4, {a, r}), {"3/2", "-3/2", "1/2", "-1/2"}, {0, 3, 1, 2}};
}

// ---------------------------------------------------------------------------

HalfOneDerived half_one_derived(const HalfOneParams& p) {
  const auto& g = p.g;
  const double k = 2.0 * kSqrt2;
  HalfOneDerived d;
  d.delta1 = p.eps1 / 2.0 + p.eps2;
  d.delta2 = -p.eps1 / 2.0 + p.eps2;
  d.beta1 = p.h1 / 2.0 + p.h2 + p.h3 / 2.0;
  d.beta2 = p.h1 / 2.0;
  d.beta3 = p.h1 / 2.0 - p.h2 + p.h3 / 2.0;
  d.gamma1 = Complex(g[0], -g[7]) / 2.0;
  d.gamma3 = Complex(g[1] + g[2], -g[3] + g[6]) / k;
  d.gamma2 = Complex(g[1] - g[2], -g[3] - g[6]) / k;
  d.gamma4 = Complex(g[4], -g[5]) / k;
  return d;
}

Hamiltonian half_one_operator_form(const HalfOneParams& p) {
  const auto& g = p.g;
  const auto c = TimePolynomial::constant;
  const auto lin = TimePolynomial::linear;
  // site 0: s (spin-1/2), site 1: S (spin-1)
  std::vector<HamiltonianTerm> terms{
      term(c(p.eps1), {f(0, Axis::Z), f(1, Axis::Z)}),
      term(c(p.eps2), {f(1, Axis::Z, 2)}),
      term(c(g[0]), {f(0, Axis::X), f(1, Axis::Z)}),
      term(c(g[1]), {f(0, Axis::X), f(1, Axis::X)}),
      term(c(g[2]), {f(0, Axis::Y), f(1, Axis::Y)}),
      term(c(g[3]), {f(0, Axis::Y), f(1, Axis::X)}),
      term(c(g[4]), {f(0, Axis::Z), f(1, Axis::X)}),
      term(c(g[5]), {f(0, Axis::Z), f(1, Axis::Y)}),
      term(c(g[6]), {f(0, Axis::X), f(1, Axis::Y)}),
      term(c(g[7]), {f(0, Axis::Y), f(1, Axis::Z)}),
      term(lin(p.h1), {f(0, Axis::Z)}),
      term(lin(p.h2), {f(1, Axis::Z)}),
      term(lin(p.h3), {f(0, Axis::Z), f(1, Axis::Z, 2)}),
  };
  std::erase_if(terms, [](const HamiltonianTerm& t) { return t.coeff.is_zero(); });
  return Hamiltonian(SpinSystem({1, 2}), std::move(terms));
}

MatrixModel half_one_matrix_form(const HalfOneParams& p) {
  const HalfOneDerived d = half_one_derived(p);
  ComplexMatrix a = ComplexMatrix::Zero(6, 6);
  ComplexMatrix r = ComplexMatrix::Zero(6, 6);
  r.diagonal() << d.beta1, d.beta2, d.beta3, -d.beta3, -d.beta2, -d.beta1;
  // States 3 and 4 carry +Delta_2, which is what the operator form produces.
  a.diagonal() << d.delta1, 0.0, d.delta2, d.delta2, 0.0, d.delta1;
  HermitianFill set{a};
  set(1, 2, d.gamma4);
  set(1, 4, d.gamma1);
  set(1, 5, d.gamma2);
  set(2, 3, d.gamma4);
  set(2, 4, d.gamma3);
  set(2, 6, d.gamma2);
  set(3, 5, d.gamma3);
  set(3, 6, -d.gamma1);
  set(4, 5, -d.gamma4);
  set(5, 6, -d.gamma4);
  return MatrixModel{MatrixPolynomial(6, {a, r}), {"1", "2", "3", "4", "5", "6"}, {0, 1, 2, 3, 4, 5}};
}

// ---------------------------------------------------------------------------

CentralSpinDerived central_spin_derived(const CentralSpinParams& p) {
  const auto& g = p.g;
  CentralSpinDerived d;
  d.beta = p.h1 / 2.0;
  d.delta = {(p.eps1 + p.eps2 + p.eps3) / 4.0, (p.eps1 - p.eps2 - p.eps3) / 4.0,
             (-p.eps1 + p.eps2 - p.eps3) / 4.0, (-p.eps1 - p.eps2 + p.eps3) / 4.0};
  d.gamma[0] = (g[0] + g[1]) / 4.0;
  d.gamma[4] = (g[0] - g[1]) / 4.0;
  d.gamma[1] = (g[3] - g[5]) / 4.0;
  d.gamma[3] = (g[3] + g[5]) / 4.0;
  d.gamma[2] = (g[2] - g[4]) / 4.0;
  d.gamma[5] = (g[2] + g[4]) / 4.0;
  return d;
}

Hamiltonian central_spin_operator_form(const CentralSpinParams& p) {
  const auto& g = p.g;
  const auto c = TimePolynomial::constant;
  std::vector<HamiltonianTerm> terms{
      term(TimePolynomial::linear(p.h1), {f(0, Axis::Z)}),
      term(c(p.eps1), {f(0, Axis::Z), f(1, Axis::Z)}),
      term(c(p.eps2), {f(0, Axis::Z), f(2, Axis::Z)}),
      term(c(p.eps3), {f(1, Axis::Z), f(2, Axis::Z)}),
      term(c(g[0]), {f(0, Axis::X), f(1, Axis::Z)}),
      term(c(g[1]), {f(0, Axis::X), f(2, Axis::Z)}),
      term(c(g[2]), {f(0, Axis::X), f(1, Axis::X)}),
      term(c(g[3]), {f(0, Axis::X), f(2, Axis::X)}),
      term(c(g[4]), {f(0, Axis::Y), f(1, Axis::Y)}),
      term(c(g[5]), {f(0, Axis::Y), f(2, Axis::Y)}),
  };
  std::erase_if(terms, [](const HamiltonianTerm& t) { return t.coeff.is_zero(); });
  return Hamiltonian(SpinSystem({1, 1, 1}), std::move(terms));
}

MatrixModel central_spin_matrix_form(const CentralSpinParams& p) {
  const CentralSpinDerived d = central_spin_derived(p);
  const auto& dl = d.delta;
  const auto& gm = d.gamma;
  ComplexMatrix a = ComplexMatrix::Zero(8, 8);
  ComplexMatrix r = ComplexMatrix::Zero(8, 8);
  r.diagonal() << d.beta, d.beta, d.beta, d.beta, -d.beta, -d.beta, -d.beta, -d.beta;
  a.diagonal() << dl[0], dl[1], dl[2], dl[3], dl[3], dl[2], dl[1], dl[0];
  HermitianFill set{a};
  set(1, 5, gm[0]);
  set(1, 6, gm[1]);
  set(1, 7, gm[2]);
  set(2, 5, gm[3]);
  set(2, 6, gm[4]);
  set(2, 8, gm[2]);
  set(3, 5, gm[5]);
  set(3, 7, -gm[4]);
  set(3, 8, gm[1]);
  set(4, 6, gm[5]);
  set(4, 7, gm[3]);
  set(4, 8, -gm[0]);
  return MatrixModel{MatrixPolynomial(8, {a, r}),
                     {"1", "2", "3", "4", "5", "6", "7", "8"},
                     {0, 1, 2, 3, 4, 5, 6, 7}};
}

// ---------------------------------------------------------------------------

std::vector<KramersPair> kramers_pairs(const TimeReversalOp& theta, const DiabaticBasis& basis) {
  const std::size_t n = basis.size();
  if (static_cast<std::size_t>(theta.dim()) != n)
    throw InvalidInput("kramers_pairs: basis size does not match the operator");
  std::vector<std::size_t> diabatic_of(n);
  for (std::size_t k = 0; k < n; ++k) diabatic_of[basis.basis_index[k]] = k;

  std::vector<KramersPair> pairs;
  for (std::size_t k = 0; k < n; ++k) {
    // Theta|e_b> = u conj(e_b) = column b of u.
    const auto column = theta.u.col(static_cast<Eigen::Index>(basis.basis_index[k]));
    std::size_t hits = 0;
    Eigen::Index where = 0;
    for (Eigen::Index i = 0; i < column.size(); ++i)
      if (std::abs(column[i]) > 1.0 - 1e-10) {
        ++hits;
        where = i;
      }
    if (hits != 1)
      throw InvalidInput("time reversal of diabatic state " + basis.names[k] +
                         " is not a single basis state");
    pairs.push_back({k, diabatic_of[static_cast<std::size_t>(where)], column[where]});
  }
  return pairs;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> numbered(const std::string& prefix, int count) {
  std::vector<std::string> keys;
  for (int i = 1; i <= count; ++i) keys.push_back(prefix + std::to_string(i));
  return keys;
}

std::vector<std::string> concat(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

double get(const ParamMap& params, const std::string& key) {
  auto it = params.find(key);
  return it == params.end() ? 0.0 : it->second;
}

}  // namespace

const std::vector<ModelSpec>& model_catalog() {
  static const std::vector<ModelSpec> catalog{
      {"lz2", {"g", "beta"}},
      {"spin32", {"h1", "h2", "g1", "g2", "phi", "theta"}},
      {"half-one", concat({{"eps1", "eps2"}, numbered("g", 8), {"h1", "h2", "h3"}})},
      {"central-spin", concat({{"h1", "eps1", "eps2", "eps3"}, numbered("g", 6)})},
  };
  return catalog;
}

Problem build_model(const std::string& name, const ParamMap& params) {
  const auto& catalog = model_catalog();
  auto spec = std::find_if(catalog.begin(), catalog.end(),
                           [&](const ModelSpec& s) { return s.name == name; });
  if (spec == catalog.end()) throw InvalidInput("unknown model '" + name + "'");
  for (const auto& [key, value] : params) {
    if (std::find(spec->keys.begin(), spec->keys.end(), key) == spec->keys.end())
      throw InvalidInput("model '" + name + "' has no parameter '" + key + "'");
    if (!std::isfinite(value)) throw InvalidInput("parameter '" + key + "' is not finite");
  }

  if (name == "lz2")
    return make_problem(name, lz_two_state(get(params, "g"), get(params, "beta")),
                        DiabaticBasis{{"up", "down"}, {0, 1}});
  if (name == "spin32") {
    const Spin32Params p{get(params, "h1"), get(params, "h2"), get(params, "g1"), get(params, "g2"),
                         get(params, "phi")};
    return make_problem(name, spin32_operator_form(p, get(params, "theta")),
                        DiabaticBasis{{"3/2", "-3/2", "1/2", "-1/2"}, {0, 3, 1, 2}});
  }
  if (name == "half-one") {
    HalfOneParams p;
    p.eps1 = get(params, "eps1");
    p.eps2 = get(params, "eps2");
    for (std::size_t i = 0; i < 8; ++i) p.g[i] = get(params, "g" + std::to_string(i + 1));
    p.h1 = get(params, "h1");
    p.h2 = get(params, "h2");
    p.h3 = get(params, "h3");
    return make_problem(name, half_one_operator_form(p),
                        DiabaticBasis{{"1", "2", "3", "4", "5", "6"}, {0, 1, 2, 3, 4, 5}});
  }
  CentralSpinParams p;
  p.h1 = get(params, "h1");
  p.eps1 = get(params, "eps1");
  p.eps2 = get(params, "eps2");
  p.eps3 = get(params, "eps3");
  for (std::size_t i = 0; i < 6; ++i) p.g[i] = get(params, "g" + std::to_string(i + 1));
  return make_problem(name, central_spin_operator_form(p),
                      DiabaticBasis{{"1", "2", "3", "4", "5", "6", "7", "8"}, {0, 1, 2, 3, 4, 5, 6, 7}});
}

}  // namespace kramers
