#pragma once

#include "kramers/analysis.hpp"
#include "kramers/models.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace kramers::cli {

enum ExitCode : int { Ok = 0, VerificationFailed = 1, UsageError = 2, NumericalAbort = 3 };

struct RunConfig {
  std::string command;
  std::string model;
  std::string params;
  std::string hamspec;
  double half_span = 6.0;
  /// Steps per half interval; 0 selects the default step rule.
  std::size_t steps = 0;
  double tol = 1e-6;
  std::size_t stride = 0;
  std::string pairs;
  std::string sweep;
  std::string format = "csv";
  std::string out;
  std::size_t workers = 0;
  bool converge = false;
  std::uint64_t seed = 1;
  std::size_t random_states = 10;
  std::size_t samples = 601;
  bool branches = false;
};

/// "k=v,k=v"; throws InvalidInput on malformed entries or repeated keys.
ParamMap parse_params(const std::string& text);

/// Comma-separated "a-b" items. a and b are diabatic labels or 1-based
/// indices, b may be "*" (every other state), and the item "partners" expands
/// to the Kramers partner pairs. Throws InvalidInput on unknown labels.
std::vector<TransitionPair> parse_pairs(const std::string& text, const DiabaticBasis& basis,
                                        const std::vector<KramersPair>& partners);

/// Runs one command; argv[0] is the program name. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kramers::cli
