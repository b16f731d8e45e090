#pragma once

// Shared by the unit tests and the acceptance binary.

#include "kramers/hamspec.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace kramers::fixtures {

/// Canonical document: 1-3 sites, 0-6 terms, coefficients spanning many
/// orders of magnitude.
inline HamSpecDocument random_document(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> n_sites(1, 3), twice(1, 4), n_terms(0, 6), n_mono(1, 3), power(0, 4),
      n_factors(1, 3), axis(0, 2), exponent(1, 3), style(0, 3);
  std::uniform_real_distribution<double> uniform(-5.0, 5.0);
  std::normal_distribution<double> log_scale(0.0, 6.0);

  HamSpecDocument doc;
  std::vector<int> spins;
  for (int k = n_sites(rng); k > 0; --k) spins.push_back(twice(rng));
  doc.system = SpinSystem(spins);
  std::uniform_int_distribution<std::size_t> site(0, spins.size() - 1);
  for (int k = n_terms(rng); k > 0; --k) {
    HamiltonianTerm term;
    for (int m = n_mono(rng); m > 0; --m) {
      double c = 0.0;
      switch (style(rng)) {
        case 0: c = uniform(rng); break;
        case 1: c = std::round(uniform(rng) * 4.0) / 4.0; break;
        case 2: c = std::copysign(std::pow(10.0, log_scale(rng)), uniform(rng)); break;
        default: c = 1.0; break;
      }
      term.coeff.add(power(rng), c);
    }
    std::vector<SpinFactor> factors;
    for (int f = n_factors(rng); f > 0; --f)
      factors.push_back({site(rng), static_cast<Axis>(axis(rng)), exponent(rng)});
    term.factors = canonical_factors(std::move(factors));
    if (!term.coeff.is_zero()) doc.terms.push_back(std::move(term));
  }
  return doc;
}

struct CorpusCase {
  std::filesystem::path path;
  bool hermitian = false;
  bool parity = false;
};

/// Files in `dir` whose first line reads "# expect: hermitian=X parity=Y".
inline std::vector<CorpusCase> labeled_corpus(const std::filesystem::path& dir) {
  std::vector<CorpusCase> cases;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::ifstream in(entry.path());
    std::string first;
    std::getline(in, first);
    cases.push_back({entry.path(), first.find("hermitian=PASS") != std::string::npos,
                     first.find("parity=PASS") != std::string::npos});
  }
  std::sort(cases.begin(), cases.end(), [](const auto& a, const auto& b) { return a.path < b.path; });
  return cases;
}

}  // namespace kramers::fixtures
