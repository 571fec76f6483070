#include "oschalf/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <vector>

#include <CLI11.hpp>

#include "oschalf/errors.hpp"
#include "oschalf/parallel.hpp"
#include "oschalf/report.hpp"
#include "oschalf/suite.hpp"

namespace oschalf {

namespace {

const std::vector<std::string> kCommands{"solve",      "verify-pohozaev", "extremal-scan",
                                         "bubble-fit", "decay",           "oracle-check",
                                         "full-suite"};

struct Outcome {
  Json checks = Json::array();
  Json result;
  CsvTable table;
  bool passed = true;

  void check(const std::string& name, bool ok, Json value, Json threshold) {
    Json c;
    c["name"] = name;
    c["passed"] = ok;
    c["value"] = std::move(value);
    c["threshold"] = std::move(threshold);
    checks.push_back(std::move(c));
    passed = passed && ok;
  }
};

ProblemSpec problem_spec(const RunConfig& cfg) {
  ProblemSpec spec;
  spec.dim = cfg.dim;
  spec.max_degree = cfg.max_degree;
  spec.order = cfg.order;
  spec.tolerances.gradient = cfg.tol_grad;
  spec.nonlinearity = cfg.lambda ? Nonlinearity::critical_plus(*cfg.lambda, cfg.q.value_or(2.0), cfg.dim)
                                 : Nonlinearity::power(cfg.power, cfg.dim);
  if (cfg.theta) spec.nonlinearity.set_theta(*cfg.theta);
  spec.validate();
  return spec;
}

Json config_json(const RunConfig& cfg, const ProblemSpec* spec) {
  Json j;
  j["command"] = cfg.command;
  j["dim"] = cfg.dim;
  j["K"] = cfg.max_degree;
  j["order"] = spec ? spec->quadrature_order() : (cfg.order > 0 ? cfg.order : default_order(cfg.max_degree));
  j["seed"] = cfg.seed;
  j["format"] = cfg.format;
  j["out"] = cfg.out;
  if (spec) {
    j["nonlinearity"] = to_json(spec->nonlinearity);
    j["tolerances"] = to_json(spec->tolerances);
    j["max_iterations"] = spec->max_iterations;
  } else {
    j["power"] = cfg.power;
    j["lambda"] = cfg.lambda ? Json(*cfg.lambda) : Json(nullptr);
    j["q"] = cfg.q ? Json(*cfg.q) : Json(nullptr);
    j["tol_grad"] = cfg.tol_grad;
  }
  if (cfg.command == "decay") j["inner_radius"] = cfg.inner_radius;
  return j;
}

void add_solve_checks(Outcome& o, const SolveReport& r, const Nonlinearity& nl) {
  if (r.status == SolveStatus::Refused) {
    o.check("solve_not_refused", false, r.message, nullptr);
    return;
  }
  o.check("converged", r.converged(), to_string(r.status), nullptr);
  if (nl.kind() == NonlinearityKind::CriticalPlus) {
    o.check("level_below_bound", r.mp_level_estimate < r.level_bound, number(r.mp_level_estimate),
            number(r.level_bound));
  } else {
    o.check("pohozaev_rel", r.pohozaev_rel < r.tolerances.pohozaev, number(r.pohozaev_rel),
            r.tolerances.pohozaev);
    if (nl.kind() == NonlinearityKind::Power) {
      o.check("power_identity_rel", r.power_identity_rel < r.tolerances.power_identity,
              number(r.power_identity_rel), r.tolerances.power_identity);
    }
  }
}

SolveReport solve_for(const ProblemSpec& spec, std::uint64_t seed, Json& extra) {
  if (spec.nonlinearity.kind() == NonlinearityKind::CriticalPlus) {
    const ScanReport scan = default_scan(spec.dim);
    extra["sobolev_estimate"] = scan.sobolev_estimate;
    return solve_critical_perturbed(spec, seed, scan.sobolev_estimate);
  }
  return solve_subcritical(spec, seed);
}

Outcome run_solve(const RunConfig& cfg, const ProblemSpec& spec) {
  Outcome o;
  Json extra;
  const SolveReport r = solve_for(spec, cfg.seed, extra);
  o.result = to_json(r, true);
  for (auto& [k, v] : extra.items()) o.result[k] = v;
  add_solve_checks(o, r, spec.nonlinearity);
  if (r.status != SolveStatus::Refused) {
    const SpectralSpace space(spec.dim, spec.max_degree, spec.quadrature_order());
    o.result["energy_breakdown"] = to_json(extension_energy(space, r.field, &spec.nonlinearity));
    o.result["pohozaev_terms"] = to_json(pohozaev_terms(space, r.field, spec.nonlinearity));
    if (spec.nonlinearity.kind() == NonlinearityKind::Power) {
      o.result["power_identity"] = to_json(power_identity_residual(space, r.field, spec.nonlinearity.p()));
    }
    o.table = axis_profile_table(space, r.field);
  } else {
    o.table = CsvTable{{"radius", "value"}, {}};
  }
  return o;
}

Outcome run_verify_pohozaev(const RunConfig& cfg, const ProblemSpec& spec) {
  if (spec.nonlinearity.kind() != NonlinearityKind::Power) {
    throw std::invalid_argument("verify-pohozaev needs a pure power (omit --lambda)");
  }
  std::vector<int> degrees;
  for (int K = 8; K < spec.max_degree; K += 4) degrees.push_back(K);
  degrees.push_back(spec.max_degree);
  std::vector<SolveReport> reports(degrees.size());
  parallel_for(degrees.size(), [&](std::size_t i) {
    ProblemSpec s = spec;
    s.max_degree = degrees[i];
    if (degrees[i] != spec.max_degree) s.order = 0;
    reports[i] = solve_subcritical(s, cfg.seed);
  });
  Outcome o;
  o.table.header = {"K", "pohozaev_rel", "power_identity_rel", "energy"};
  Json runs = Json::array();
  bool decreasing = true;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    runs.push_back(to_json(reports[i]));
    o.table.rows.push_back({static_cast<double>(degrees[i]), reports[i].pohozaev_rel,
                            reports[i].power_identity_rel, reports[i].energy_value});
    if (i > 0) decreasing = decreasing && reports[i].pohozaev_rel < reports[i - 1].pohozaev_rel;
  }
  o.result["degrees"] = degrees;
  o.result["runs"] = std::move(runs);
  add_solve_checks(o, reports.back(), spec.nonlinearity);
  if (reports.size() > 1) o.check("pohozaev_decreasing", decreasing, decreasing, nullptr);
  return o;
}

Outcome run_extremal_scan(const RunConfig& cfg) {
  const ScanReport scan = default_scan(cfg.dim);
  Outcome o;
  o.result = to_json(scan);
  o.check("potential_slope", scan.potential_slope >= -4.3 && scan.potential_slope <= -3.7,
          number(scan.potential_slope), Json::array({-4.3, -3.7}));
  o.check("plateau_gap", std::abs(scan.plateau_gap) < 0.02, number(scan.plateau_gap), 0.02);
  o.check("quotient_monotone", scan.quotient_monotone, scan.quotient_monotone, nullptr);
  o.table = scan_table(scan);
  return o;
}

Outcome run_bubble_fit(const RunConfig& cfg) {
  const double q = cfg.q.value_or(3.0);
  const std::vector<double> eps = default_fit_eps();
  const FitReport fit = bubble_estimates_fit(cfg.dim, eps, 1.0, q);
  Outcome o;
  o.result = to_json(fit);
  o.check("lq_slope", std::abs(fit.lq_slope - fit.lq_target) <= 0.15 * fit.lq_target,
          number(fit.lq_slope), fit.lq_target);
  if (cfg.dim == 2) {
    o.check("l2_prefers_log_model", fit.l2_prefers_log_model, number(fit.l2_log_model_residual),
            number(fit.l2_power_model_residual));
  }
  o.table = fit_table(fit);
  return o;
}

Outcome run_decay(const RunConfig& cfg, const ProblemSpec& spec) {
  Outcome o;
  Json extra;
  const SolveReport r = solve_for(spec, cfg.seed, extra);
  o.result["solve"] = to_json(r);
  if (r.status == SolveStatus::Refused) {
    o.check("solve_not_refused", false, r.message, nullptr);
    o.table = CsvTable{{"radius", "weighted_max"}, {}};
    return o;
  }
  o.check("converged", r.converged(), to_string(r.status), nullptr);
  const SpectralSpace space(spec.dim, spec.max_degree, spec.quadrature_order());
  const std::vector<double> exponents{2.0, 3.0, 4.0, 6.0, kInfinity};
  const LpReport lp = trace_lp_report(space, r.field, exponents);
  const DecayReport decay = decay_constant(space, r.field, cfg.inner_radius);
  o.result["lp"] = to_json(lp);
  o.result["decay"] = to_json(decay);
  o.check("lp_finite", lp.all_finite, lp.all_finite, nullptr);
  o.check("interpolation_violations", lp.interpolation_violations == 0, lp.interpolation_violations, 0);
  o.check("decay_no_upward_trend", decay.no_upward_trend, number(decay.constant), nullptr);
  o.table = decay_table(decay);
  return o;
}

Outcome run_criteria(const RunConfig& cfg, const std::vector<int>& ids) {
  SuiteOptions opt;
  opt.dim = cfg.dim;
  opt.seed = cfg.seed;
  Outcome o;
  o.table.header = {"criterion", "passed"};
  Json criteria = Json::array();
  for (int id : ids) {
    CriterionResult c = run_criterion(id, opt);
    std::cerr << c.summary << "\n";
    o.check(c.name, c.passed, c.summary, nullptr);
    o.table.rows.push_back({static_cast<double>(id), c.passed ? 1.0 : 0.0});
    Json entry;
    entry["id"] = c.id;
    entry["name"] = c.name;
    entry["detail"] = std::move(c.detail);
    criteria.push_back(std::move(entry));
  }
  o.result["criteria"] = std::move(criteria);
  return o;
}

void emit(const RunConfig& cfg, const Json& report, const CsvTable& table) {
  const std::string json = dump_json(report);
  if (cfg.out.empty()) {
    std::cout << (cfg.format == "csv" ? to_csv(table) : json);
    return;
  }
  const std::filesystem::path out(cfg.out);
  if (cfg.format == "csv") {
    std::filesystem::path json_path = out;
    json_path.replace_extension(".json");
    if (json_path == out) json_path += ".report.json";
    write_atomic(json_path, json);
    write_atomic(out, to_csv(table));
  } else {
    write_atomic(out, json);
  }
}

}  // namespace

int run(const RunConfig& cfg) {
  if (std::find(kCommands.begin(), kCommands.end(), cfg.command) == kCommands.end()) {
    throw std::invalid_argument("unknown command '" + cfg.command + "'");
  }
  if (cfg.format != "json" && cfg.format != "csv") {
    throw std::invalid_argument("--format must be json or csv");
  }
  if (cfg.dim < 1) throw std::invalid_argument("--dim must be >= 1");

  const bool needs_spec = cfg.command == "solve" || cfg.command == "verify-pohozaev" ||
                          cfg.command == "decay";
  std::optional<ProblemSpec> spec;
  if (needs_spec) spec = problem_spec(cfg);

  Outcome o;
  if (cfg.command == "solve") {
    o = run_solve(cfg, *spec);
  } else if (cfg.command == "verify-pohozaev") {
    o = run_verify_pohozaev(cfg, *spec);
  } else if (cfg.command == "extremal-scan") {
    o = run_extremal_scan(cfg);
  } else if (cfg.command == "bubble-fit") {
    o = run_bubble_fit(cfg);
  } else if (cfg.command == "decay") {
    o = run_decay(cfg, *spec);
  } else if (cfg.command == "oracle-check") {
    o = run_criteria(cfg, {1, 2, 10});
  } else {
    std::vector<int> ids;
    for (int id = 1; id <= kCriterionCount; ++id) ids.push_back(id);
    o = run_criteria(cfg, ids);
  }

  Json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = cfg.command;
  report["config"] = config_json(cfg, spec ? &*spec : nullptr);
  report["passed"] = o.passed;
  report["checks"] = std::move(o.checks);
  report["result"] = std::move(o.result);
  emit(cfg, report, o.table);
  return o.passed ? kExitPass : kExitCheckFailed;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Hermite spectral solver for the half-harmonic oscillator problem"};
  RunConfig cfg;
  double lambda = 0.0, q = 0.0, theta = 0.0;
  app.add_option("command", cfg.command, "Command to run")
      ->required()
      ->check(CLI::IsMember(kCommands));
  app.add_option("--dim", cfg.dim, "Space dimension N")->capture_default_str();
  app.add_option("--K", cfg.max_degree, "Per-axis truncation degree")->capture_default_str();
  app.add_option("--order", cfg.order, "Gauss-Hermite points per axis (0 = 2K+8)")->capture_default_str();
  app.add_option("--power", cfg.power, "Exponent p of |u|^{p-2} u")->capture_default_str();
  auto* lambda_opt = app.add_option("--lambda", lambda, "Selects |u|^{2*-2} u + lambda |u|^{q-1} u");
  auto* q_opt = app.add_option("--q", q, "Perturbation or fit exponent");
  auto* theta_opt = app.add_option("--theta", theta, "Growth constant recorded with the nonlinearity");
  app.add_option("--seed", cfg.seed, "Seed for initial data and random fields")->capture_default_str();
  app.add_option("--tol-grad", cfg.tol_grad, "Gradient-norm stopping tolerance")->capture_default_str();
  app.add_option("--inner-radius", cfg.inner_radius, "Inner radius M of the decay profile")
      ->capture_default_str();
  app.add_option("--out", cfg.out, "Output path (stdout when empty)");
  app.add_option("--format", cfg.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.set_config("--config", "", "Flat key = value file; flags override it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  if (lambda_opt->count() > 0) cfg.lambda = lambda;
  if (q_opt->count() > 0) cfg.q = q;
  if (theta_opt->count() > 0) cfg.theta = theta;

  try {
    return run(cfg);
  } catch (const ResolutionError& e) {
    std::cerr << "resolution error: " << e.what() << " (suggested minimum " << e.suggested() << ")\n";
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
  }
  return kExitUsage;
}

}  // namespace oschalf
