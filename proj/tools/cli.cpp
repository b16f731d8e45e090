#include "cli.hpp"

#include "table.hpp"

#include "kramers/error.hpp"
#include "kramers/hamspec.hpp"
#include "kramers/propagator.hpp"
#include "kramers/simd/kernels.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

namespace kramers::cli {

namespace {

constexpr const char* kVersion = "kramers-lz 1.0.0";

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

std::optional<std::size_t> resolve_state(const std::string& token, const DiabaticBasis& basis) {
  for (std::size_t k = 0; k < basis.size(); ++k)
    if (basis.names[k] == token) return k;
  std::size_t index = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), index);
  if (ec == std::errc() && ptr == token.data() + token.size() && index >= 1 && index <= basis.size())
    return index - 1;
  return std::nullopt;
}

std::string pair_column(const TransitionPair& p) {
  return "P_" + std::to_string(p.from + 1) + "_" + std::to_string(p.to + 1);
}

struct Input {
  Problem problem;
  ParamMap params;
  std::vector<std::string> warnings;
};

Input load_input(const RunConfig& cfg) {
  if (cfg.model.empty() == cfg.hamspec.empty())
    throw InvalidInput("exactly one of --model or --hamspec is required");
  Input in;
  if (!cfg.model.empty()) {
    in.params = parse_params(cfg.params);
    in.problem = build_model(cfg.model, in.params);
  } else {
    if (!cfg.params.empty()) throw InvalidInput("--params applies to --model only");
    const HamSpecDocument doc = load_hamspec(cfg.hamspec);
    in.warnings = doc.warnings;
    in.problem = make_problem(std::filesystem::path(cfg.hamspec).stem().string(), to_hamiltonian(doc));
  }
  return in;
}

void validate(const RunConfig& cfg) {
  if (!(cfg.half_span > 0.0) || !std::isfinite(cfg.half_span)) throw InvalidInput("--T must be positive");
  if (!(cfg.tol > 0.0)) throw InvalidInput("--tol must be positive");
}

TimeGrid make_grid(const RunConfig& cfg, const Problem& problem) {
  const std::size_t per_half = cfg.steps ? cfg.steps : default_steps_per_half(problem.h, cfg.half_span);
  return TimeGrid::symmetric(cfg.half_span, per_half);
}

nlohmann::json base_meta(const RunConfig& cfg, const Input& in, const TimeGrid& grid) {
  nlohmann::json meta;
  meta["version"] = kVersion;
  meta["command"] = cfg.command;
  if (!cfg.model.empty()) {
    meta["model"] = cfg.model;
    meta["params"] = in.params;
  } else {
    meta["hamspec"] = cfg.hamspec;
  }
  meta["spins"] = in.problem.system.describe();
  meta["grid"] = {{"T", grid.end()}, {"n", grid.steps() / 2}, {"dt", grid.dt()}};
  meta["tol"] = cfg.tol;
  meta["simd"] = simd::active_kernels().name;
  return meta;
}

void emit(const RunConfig& cfg, const Table& table, const nlohmann::json& meta, std::ostream& out) {
  const std::string text = cfg.format == "json" ? to_json(table, meta) : to_csv(table);
  if (cfg.out.empty())
    out << text;
  else
    write_atomic(cfg.out, text);
}

std::vector<TransitionPair> default_pairs(const Problem& problem) {
  const TimeReversalOp theta = time_reversal(problem.system);
  std::vector<TransitionPair> pairs;
  if (problem.system.half_integer()) {
    for (const KramersPair& kp : kramers_pairs(theta, problem.basis))
      if (kp.state < kp.partner) pairs.push_back({kp.state, kp.partner});
    return pairs;
  }
  for (std::size_t to = 1; to < problem.basis.size(); ++to) pairs.push_back({0, to});
  return pairs;
}

std::vector<TransitionPair> requested_pairs(const RunConfig& cfg, const Problem& problem) {
  if (cfg.pairs.empty()) return default_pairs(problem);
  std::vector<KramersPair> partners;
  if (cfg.pairs.find("partners") != std::string::npos) {
    if (!problem.system.half_integer()) throw InvalidInput("'partners' needs a half-integer total spin");
    partners = kramers_pairs(time_reversal(problem.system), problem.basis);
  }
  return parse_pairs(cfg.pairs, problem.basis, partners);
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Input in = load_input(cfg);
  TimeGrid grid = make_grid(cfg, in.problem);
  VerifyOptions options;
  options.tol = cfg.tol;
  options.seed = cfg.seed;
  options.random_states = cfg.random_states;

  TheoremReport report;
  report.dynamic_symmetry = check_dynamic_symmetry(in.problem.h, time_reversal(in.problem.system),
                                                   symmetric_check_grid(grid.end()), options.symmetry_tol);
  if (report.dynamic_symmetry.pass && cfg.converge) grid = converge_steps(in.problem, grid).grid;
  report = verify_no_scattering(in.problem, grid, options);

  if (report.status == TheoremStatus::SymmetryViolated) {
    err << "verify: dynamic symmetry violated (max |Theta H(t) Theta^-1 - H(-t)| = "
        << report.dynamic_symmetry.max_deviation << " at t = " << report.dynamic_symmetry.worst_time << ")\n";
    if (report.parity)
      for (const TermVerdict& v : report.parity->terms)
        if (!v.pass)
          err << "  term " << v.index + 1 << ": " << v.order << " spin operators, coefficient parity "
              << parity_name(v.parity) << "\n";
    return VerificationFailed;
  }

  Table table{{"kind", "from", "to", "probability", "tol", "verdict"}, {}};
  const auto& labels = report.scattering.labels;
  for (const PairVerdict& v : report.scattering.verdicts)
    table.add_row({std::string("pair"), labels[v.from], labels[v.to], v.probability, cfg.tol,
                   std::string(v.pass ? "PASS" : "FAIL")});
  for (const RandomStateVerdict& v : report.random_states)
    table.add_row({std::string("random"), "psi" + std::to_string(v.index + 1), "theta psi" + std::to_string(v.index + 1),
                   v.probability, cfg.tol, std::string(v.pass ? "PASS" : "FAIL")});

  nlohmann::json meta = base_meta(cfg, in, grid);
  meta["status"] = status_name(report.status);
  meta["half_integer"] = report.half_integer;
  meta["unitarity_defect"] = report.scattering.unitarity_defect;
  meta["theta_identity_deviation"] = report.theta_identity_deviation;
  meta["dynamic_symmetry_deviation"] = report.dynamic_symmetry.max_deviation;
  meta["seed"] = cfg.seed;
  emit(cfg, table, meta, out);

  for (const std::string& w : in.warnings) err << "warning: " << w << "\n";
  err << "verify: " << status_name(report.status);
  if (report.status == TheoremStatus::NotApplicable) err << " (theorem not applicable: integer total spin)";
  err << "; T " << grid.end() << ", n " << grid.steps() / 2 << ", dt " << grid.dt() << ", unitarity defect "
      << report.scattering.unitarity_defect << ", tol " << cfg.tol << "\n";
  return report.status == TheoremStatus::Fail ? VerificationFailed : Ok;
}

int cmd_scatter(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const Input in = load_input(cfg);
  TimeGrid grid = make_grid(cfg, in.problem);
  ScatteringReport report;
  bool converged = true;
  if (cfg.converge) {
    ConvergenceResult c = converge_steps(in.problem, grid);
    grid = c.grid;
    converged = c.converged;
    report = std::move(c.report);
  } else {
    report = scattering_matrix(propagate(in.problem.h, grid), in.problem.basis);
  }
  Table table{{"from", "to", "re_S", "im_S", "P"}, {}};
  for (std::size_t from = 0; from < report.labels.size(); ++from)
    for (std::size_t to = 0; to < report.labels.size(); ++to) {
      const Complex s = report.s(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(from));
      table.add_row({report.labels[from], report.labels[to], s.real(), s.imag(), report.probability(from, to)});
    }
  nlohmann::json meta = base_meta(cfg, in, grid);
  meta["unitarity_defect"] = report.unitarity_defect;
  meta["stochastic_defect"] = report.stochastic_defect();
  meta["converged"] = converged;
  emit(cfg, table, meta, out);
  return Ok;
}

int cmd_levels(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const Input in = load_input(cfg);
  if (cfg.samples < 2) throw InvalidInput("--samples must be at least 2");
  const LevelDiagram d = level_diagram(in.problem.h, -cfg.half_span, cfg.half_span, cfg.samples);
  const Eigen::MatrixXd& values = cfg.branches ? d.branches : d.sorted;
  Table table;
  table.columns.push_back("t");
  for (Eigen::Index n = 0; n < values.cols(); ++n) table.columns.push_back("E" + std::to_string(n + 1));
  for (std::size_t k = 0; k < d.times.size(); ++k) {
    std::vector<Cell> row{d.times[k]};
    for (Eigen::Index n = 0; n < values.cols(); ++n) row.emplace_back(values(static_cast<Eigen::Index>(k), n));
    table.add_row(std::move(row));
  }
  nlohmann::json meta = base_meta(cfg, in, TimeGrid::symmetric(cfg.half_span, 1));
  meta.erase("grid");
  meta["t_range"] = {-cfg.half_span, cfg.half_span};
  meta["samples"] = cfg.samples;
  meta["pairing"] = cfg.branches ? "nearest-value continuation" : "ascending";
  meta["kramers_pair_gap_t0"] = kramers_pair_gap(in.problem.h, 0.0);
  emit(cfg, table, meta, out);
  return Ok;
}

int cmd_curve(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const Input in = load_input(cfg);
  const TimeGrid grid = make_grid(cfg, in.problem);
  const std::vector<TransitionPair> pairs = requested_pairs(cfg, in.problem);
  PropagateOptions options;
  options.checkpoint_stride = cfg.stride ? cfg.stride : std::max<std::size_t>(1, grid.steps() / 500);
  const Propagation prop = propagate(in.problem.h, grid, options);
  const CurveSeries curves = probability_curves(prop, in.problem.basis, pairs);
  Table table;
  table.columns.push_back("t");
  for (const TransitionPair& p : pairs) table.columns.push_back(pair_column(p));
  for (std::size_t k = 0; k < curves.times.size(); ++k) {
    std::vector<Cell> row{curves.times[k]};
    for (std::size_t c = 0; c < pairs.size(); ++c)
      row.emplace_back(curves.values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)));
    table.add_row(std::move(row));
  }
  nlohmann::json meta = base_meta(cfg, in, grid);
  meta["stride"] = options.checkpoint_stride;
  meta["unitarity_defect"] = prop.unitarity_defect;
  emit(cfg, table, meta, out);
  return Ok;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.model.empty()) throw InvalidInput("sweep needs --model");
  if (cfg.sweep.empty()) throw InvalidInput("sweep needs --sweep key=start:stop:count");
  const SweepAxis axis = parse_sweep_axis(cfg.sweep);
  Input in = load_input(cfg);
  for (const auto& [key, factor] : axis.targets)
    if (in.params.count(key)) throw InvalidInput("parameter '" + key + "' is both fixed and swept");
  const std::vector<TransitionPair> pairs = requested_pairs(cfg, in.problem);

  SweepOptions options;
  options.half_span = cfg.half_span;
  options.steps_per_half = cfg.steps;
  options.converge = cfg.converge;
  options.tol = cfg.tol;
  options.workers = cfg.workers ? cfg.workers : default_workers();
  const SweepResult result = sweep(cfg.model, in.params, axis, pairs, options);

  Table table;
  table.columns.push_back("value");
  for (const TransitionPair& p : pairs) table.columns.push_back(pair_column(p));
  for (const char* c : {"max_partner_P", "theorem", "converged", "n", "T", "unitarity_defect",
                        "stochastic_defect"})
    table.columns.push_back(c);
  for (const SweepPoint& p : result.points) {
    std::vector<Cell> row{p.value};
    for (double v : p.probabilities) row.emplace_back(v);
    row.emplace_back(p.max_partner_probability);
    row.emplace_back(std::string(!p.theorem_applies ? "n/a" : p.theorem_pass ? "PASS" : "FAIL"));
    row.emplace_back(static_cast<long long>(p.converged));
    row.emplace_back(static_cast<long long>(p.steps_per_half));
    row.emplace_back(p.half_span);
    row.emplace_back(p.unitarity_defect);
    row.emplace_back(p.stochastic_defect);
    table.add_row(std::move(row));
  }
  nlohmann::json meta = base_meta(cfg, in, TimeGrid::symmetric(cfg.half_span, 1));
  meta.erase("grid");
  meta["T"] = cfg.half_span;
  meta["n"] = cfg.steps;
  meta["sweep"] = {{"targets", result.label}, {"start", axis.start}, {"stop", axis.stop}, {"count", axis.count}};
  meta["workers"] = options.workers;
  emit(cfg, table, meta, out);
  const bool ok = result.all_pass();
  if (!ok) err << "sweep: theorem verdict FAIL at one or more points\n";
  return ok ? Ok : VerificationFailed;
}

int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Input in = load_input(cfg);
  const Problem& p = in.problem;
  const std::vector<double> times = symmetric_check_grid(cfg.half_span);
  const TimeReversalOp theta = time_reversal(p.system);

  Table table{{"check", "verdict", "value", "detail"}, {}};
  bool ok = true;
  auto row = [&](const std::string& name, bool pass, double value, const std::string& detail, bool counts) {
    table.add_row({name, std::string(pass ? "PASS" : "FAIL"), value, detail});
    if (counts) ok = ok && pass;
  };
  const DeviationCheck herm = check_hermitian(p.h, times);
  row("hermitian", herm.pass, herm.max_deviation, "t = " + std::to_string(herm.worst_time), true);
  if (p.operator_form) {
    const ParityReport parity = check_parity_symmetry(*p.operator_form);
    std::string detail;
    std::size_t failing = 0;
    for (const TermVerdict& v : parity.terms)
      if (!v.pass) {
        ++failing;
        if (!detail.empty()) detail += "; ";
        detail += "term " + std::to_string(v.index + 1) + " order " + std::to_string(v.order) + " coefficient " +
                  parity_name(v.parity);
      }
    row("parity", parity.pass, static_cast<double>(failing), detail, true);
  }
  const DeviationCheck dyn = check_dynamic_symmetry(p.h, theta, times, 1e-10);
  row("dynamic_symmetry", dyn.pass, dyn.max_deviation, "t = " + std::to_string(dyn.worst_time), true);
  row("half_integer_spin", p.system.half_integer(), p.system.half_integer() ? 1.0 : 0.0, p.system.describe(), false);

  nlohmann::json meta = base_meta(cfg, in, TimeGrid::symmetric(cfg.half_span, 1));
  meta.erase("grid");
  meta["check_times"] = times;
  emit(cfg, table, meta, out);
  for (const std::string& w : in.warnings) err << "warning: " << w << "\n";
  if (!dyn.pass) err << "check: dynamic symmetry violated\n";
  return ok ? Ok : VerificationFailed;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--model", cfg.model, "Built-in model: lz2, spin32, half-one, central-spin");
  sub->add_option("--params", cfg.params, "Model parameters as key=value,key=value");
  sub->add_option("--hamspec", cfg.hamspec, "Path to a .hamspec file")->excludes("--model");
  sub->add_option("-T,--T", cfg.half_span, "Half interval: evolve over (-T, T)");
  sub->add_option("--tol", cfg.tol, "Tolerance on partner probabilities");
  sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", cfg.out, "Output file (default: stdout)");
}

void add_propagation(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--steps", cfg.steps, "Steps per half interval (default: dt max|H| <= 0.05)");
  sub->add_flag("--converge", cfg.converge, "Double the step count until probabilities settle");
}

}  // namespace

ParamMap parse_params(const std::string& text) {
  ParamMap params;
  if (trim(text).empty()) return params;
  for (const std::string& item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InvalidInput("parameter '" + item + "' is not key=value");
    const std::string key = trim(item.substr(0, eq));
    const std::string value = trim(item.substr(eq + 1));
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (key.empty() || value.empty() || ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(v))
      throw InvalidInput("malformed parameter '" + item + "'");
    if (!params.emplace(key, v).second) throw InvalidInput("parameter '" + key + "' given twice");
  }
  return params;
}

std::vector<TransitionPair> parse_pairs(const std::string& text, const DiabaticBasis& basis,
                                        const std::vector<KramersPair>& partners) {
  std::vector<TransitionPair> pairs;
  for (const std::string& item : split(text, ',')) {
    if (item == "partners") {
      for (const KramersPair& kp : partners)
        if (kp.state < kp.partner) pairs.push_back({kp.state, kp.partner});
      continue;
    }
    // Labels may start with '-', so try every separator position.
    bool found = false;
    for (std::size_t pos = item.find('-', 1); pos != std::string::npos && !found; pos = item.find('-', pos + 1)) {
      const auto from = resolve_state(item.substr(0, pos), basis);
      const std::string to_text = item.substr(pos + 1);
      if (!from) continue;
      if (to_text == "*") {
        for (std::size_t to = 0; to < basis.size(); ++to)
          if (to != *from) pairs.push_back({*from, to});
        found = true;
      } else if (const auto to = resolve_state(to_text, basis)) {
        pairs.push_back({*from, *to});
        found = true;
      }
    }
    if (!found) throw InvalidInput("unknown pair '" + item + "'");
  }
  if (pairs.empty()) throw InvalidInput("no pairs selected");
  return pairs;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-reversal no-scattering verification for multistate Landau-Zener models", "kramers-lz"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  RunConfig cfg;

  auto* verify = app.add_subcommand("verify", "Check that Kramers partners never scatter into each other");
  add_common(verify, cfg);
  add_propagation(verify, cfg);
  verify->add_option("--seed", cfg.seed, "Seed for the random initial states");
  verify->add_option("--random-states", cfg.random_states, "Number of random initial states");

  auto* scatter = app.add_subcommand("scatter", "Write the scattering matrix S and probabilities P");
  add_common(scatter, cfg);
  add_propagation(scatter, cfg);

  auto* levels = app.add_subcommand("levels", "Write eigenvalues of H(t) over [-T, T]");
  add_common(levels, cfg);
  levels->add_option("--samples", cfg.samples, "Number of sample times");
  levels->add_flag("--branches", cfg.branches, "Pair eigenvalues into continuous branches");

  auto* curve = app.add_subcommand("curve", "Write transition probabilities against time");
  add_common(curve, cfg);
  add_propagation(curve, cfg);
  curve->add_option("--pairs", cfg.pairs, "Pairs such as 1-6,3-4, 1-* or partners");
  curve->add_option("--stride", cfg.stride, "Steps between rows (default: about 500 rows)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Scan a parameter and record probabilities per point");
  add_common(sweep_cmd, cfg);
  add_propagation(sweep_cmd, cfg);
  sweep_cmd->add_option("--pairs", cfg.pairs, "Pairs such as 1-6,3-4, 1-* or partners");
  sweep_cmd->add_option("--sweep", cfg.sweep, "key[*factor][,key[*factor]]=start:stop:count");
  sweep_cmd->add_option("--workers", cfg.workers, "Worker threads (default: KRAMERS_LZ_WORKERS or all cores)");

  auto* check = app.add_subcommand("check", "Static checks: Hermiticity, parity, dynamic symmetry");
  add_common(check, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? Ok : UsageError;
  }

  for (CLI::App* sub : app.get_subcommands()) cfg.command = sub->get_name();
  try {
    validate(cfg);
    if (cfg.command == "verify") return cmd_verify(cfg, out, err);
    if (cfg.command == "scatter") return cmd_scatter(cfg, out, err);
    if (cfg.command == "levels") return cmd_levels(cfg, out, err);
    if (cfg.command == "curve") return cmd_curve(cfg, out, err);
    if (cfg.command == "sweep") return cmd_sweep(cfg, out, err);
    return cmd_check(cfg, out, err);
  } catch (const NumericalError& e) {
    err << "kramers-lz: numerical abort: " << e.what() << " (t = " << e.time() << ", defect " << e.defect() << ")\n";
    return NumericalAbort;
  } catch (const InvalidInput& e) {
    err << "kramers-lz: " << e.what() << "\n";
    return UsageError;
  } catch (const std::exception& e) {
    err << "kramers-lz: " << e.what() << "\n";
    return UsageError;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"kramers-lz"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace kramers::cli
