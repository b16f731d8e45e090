#pragma once

// The .hamspec text format: a flat sum of polynomial-coefficient spin products.
//
//   # comment
//   spins: 1/2, 1
//   term: 1 + 0.5*t^2 : sz@1^2
//   term: -2*t : sz@0
//   term: 0.3 : sx@0 sx@1
//
// Operators are spin operators S (not Pauli matrices; sigma = 2S for spin-1/2).
// Sites are zero-based. Factors within a term are multiplied in the listed
// order; the parser moves factors on different sites into ascending site order
// (they commute) and merges adjacent repeats of the same operator into one
// exponent, which makes the parsed form canonical.

#include "kramers/error.hpp"
#include "kramers/hamiltonian.hpp"
#include "kramers/spin_algebra.hpp"

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace kramers {

class ParseError : public InvalidInput {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

struct HamSpecDocument {
  std::string source;
  SpinSystem system;
  std::vector<HamiltonianTerm> terms;
  std::vector<std::string> warnings;
};

/// Same spins and terms; source and warnings are ignored.
bool structurally_equal(const HamSpecDocument& a, const HamSpecDocument& b);

/// Throws ParseError (line and column are 1-based) on the first error.
HamSpecDocument parse_hamspec(std::string_view text, std::string source = "<input>");

/// Reads and parses a file; throws InvalidInput when it cannot be read.
HamSpecDocument load_hamspec(const std::filesystem::path& path);

/// Canonical text: header, then one line per term with monomials by ascending
/// power, coefficients in shortest round-trip form and exponent 1 omitted.
std::string serialize(const HamSpecDocument& doc);

Hamiltonian to_hamiltonian(const HamSpecDocument& doc);

/// Sorts factors stably by site and merges adjacent equal operators.
std::vector<SpinFactor> canonical_factors(std::vector<SpinFactor> factors);

}  // namespace kramers
