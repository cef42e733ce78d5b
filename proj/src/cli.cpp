#include "catbench/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "catbench/catalysis.hpp"
#include "catbench/certificate.hpp"
#include "catbench/ergotropy.hpp"
#include "catbench/nogo.hpp"

namespace catbench::cli {

namespace {

std::string fmt12(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", v);
  return buffer;
}

cmat sigma_z() {
  cmat m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

json tolerances_json(const Tolerances& tol) {
  json j;
  for (const auto& [name, value] : tol.as_map()) j[name] = round12(value);
  return j;
}

std::string agreement_string(Agreement a) {
  switch (a) {
    case Agreement::Agree: return "agree";
    case Agreement::Disagree: return "disagree";
    case Agreement::Unknown: return "unknown";
  }
  return "unknown";
}

}  // namespace

json ergotropy_report(const CatalysisScenario& scenario) {
  PassiveDecomposition passive = passive_state(scenario.rho_b, scenario.h_b);
  double e = energy(scenario.rho_b, scenario.h_b);
  return json{{"command", "ergotropy"},
              {"energy", round12(e)},
              {"passive_energy", round12(passive.passive_energy)},
              {"ergotropy", round12(e - passive.passive_energy)},
              {"tolerances", tolerances_json(scenario.tol)}};
}

json extract_full_report(const CatalysisScenario& scenario) {
  ExtractionReport report =
      run_full_extraction(scenario.rho_b, scenario.h_b, scenario.h_c);
  json j = report_to_json(report);
  j["command"] = "extract-full";
  j["catalyst_drift"] =
      round12(std::abs(report.catalyst_energy_after - report.catalyst_energy_before));
  j["ergotropy"] = round12(ergotropy(scenario.rho_b, scenario.h_b));
  j["tolerances"] = tolerances_json(scenario.tol);
  return j;
}

json certify_report(const CatalysisScenario& scenario, int budget,
                    std::uint64_t seed, bool emit_operators, int& exit_code) {
  CrossValidation cv = cross_validate(scenario, budget, seed);
  json j = report_to_json(cv.certificate, emit_operators);
  j["command"] = "certify-passivity";
  j["agreement"] = agreement_string(cv.agreement);
  j["search"] = report_to_json(cv.search);
  j["tolerances"] = tolerances_json(scenario.tol);
  exit_code = cv.agreement == Agreement::Disagree ? kExitAnomaly : kExitOk;
  return j;
}

json nogo_uncorrelated_report(const CatalysisScenario& scenario, int budget,
                              std::uint64_t seed, int& exit_code) {
  CatalysisScenario run = scenario;
  run.kind = CatalystKind::Uncorrelated;
  NoGoReport report = uncorrelated_nogo_check(run, budget, seed);
  json j = report_to_json(report);
  j["command"] = "nogo-uncorrelated";
  j["tolerances"] = tolerances_json(scenario.tol);
  bool anomaly = report.violated || report.spectrum_anomaly || !report.feasible_found;
  exit_code = anomaly ? kExitAnomaly : kExitOk;
  return j;
}

json nogo_correlated_report(const CatalysisScenario& scenario, int budget,
                            std::uint64_t seed, int& exit_code) {
  CatalysisScenario run = scenario;
  run.kind = CatalystKind::Correlated;
  if (run.battery_dim() != 2) {
    // beyond the proven scope: search and record, never assert
    NoGoReport report = constrained_max_extraction(run, budget, seed);
    report.exploratory = true;
    json j = report_to_json(report);
    j["command"] = "nogo-correlated";
    j["tolerances"] = tolerances_json(scenario.tol);
    exit_code = kExitOk;
    return j;
  }
  NoGoReport report = correlated_qubit_nogo_check(run, budget, seed);
  json j = report_to_json(report);
  j["command"] = "nogo-correlated";
  j["tolerances"] = tolerances_json(scenario.tol);
  bool anomaly = report.violated || !report.feasible_found ||
                 (report.entropy_check && !*report.entropy_check) ||
                 (report.delta_e && *report.delta_e > scenario.tol.entropy);
  exit_code = anomaly ? kExitAnomaly : kExitOk;
  return j;
}

namespace {

CatalysisScenario scenario_for_grid_value(const CatalysisScenario& base,
                                          const std::string& parameter,
                                          double value) {
  CatalysisScenario s = base;
  if (parameter == "k") {
    if (base.battery_dim() != 2)
      throw validation_error("sweep.parameter", "k sweeps need a two-level battery");
    if (value < 0.0 || value > 1.0)
      throw validation_error("sweep.grid", "k must lie in [0,1]");
    rvec pops(2);
    pops << (1.0 + value) / 2.0, (1.0 - value) / 2.0;
    s.rho_b = DensityMatrix::diagonal(pops);
  } else if (parameter == "h_B") {
    if (base.battery_dim() != 2)
      throw validation_error("sweep.parameter", "h_B sweeps need a two-level battery");
    s.h_b = HermitianOperator(value * sigma_z());
  } else if (parameter == "h_C") {
    if (base.catalyst_dim() != 2)
      throw validation_error("sweep.parameter", "h_C sweeps need a two-level catalyst");
    s.h_c = HermitianOperator(value * sigma_z());
  } else if (parameter == "d_C") {
    int d = static_cast<int>(value);
    if (d < 2 || static_cast<double>(d) != value)
      throw validation_error("sweep.grid", "d_C grid values must be integers >= 2");
    Rng rng = Rng(base.seed).spawn(static_cast<std::uint64_t>(d));
    s.rho_c = random_density(d, rng);
    s.h_c = random_hermitian(d, rng);
  } else if (parameter == "seed") {
    s.seed = static_cast<std::uint64_t>(value);
  } else {
    throw validation_error("sweep.parameter", "unknown parameter '" + parameter + "'");
  }
  return s;
}

}  // namespace

std::string sweep_csv(const CatalysisScenario& scenario, const std::string& parameter,
                      const std::vector<double>& grid, const std::string& command,
                      std::optional<std::uint64_t> seed, std::optional<int> budget) {
  std::ostringstream out;
  std::vector<std::string> columns;
  if (command == "ergotropy") {
    columns = {"energy", "passive_energy", "ergotropy"};
  } else if (command == "extract-full") {
    columns = {"initial_energy", "final_energy", "extracted",
               "catalyst_energy_before", "catalyst_energy_after", "catalyst_drift",
               "ground_fidelity", "ergotropy"};
  } else if (command == "nogo-uncorrelated" || command == "nogo-correlated") {
    columns = {"ergotropy", "best_extraction", "best_violation", "restarts",
               "violated"};
  } else if (command == "certify-passivity") {
    columns = {"x", "x_degenerate", "min_eigenvalue", "passive",
               "best_extraction", "agreement"};
  } else {
    throw validation_error("sweep.command", "command '" + command + "' cannot be swept");
  }

  out << parameter;
  for (const std::string& c : columns) out << "," << c;
  out << "\n";

  for (double value : grid) {
    CatalysisScenario s = scenario_for_grid_value(scenario, parameter, value);
    std::uint64_t run_seed = seed.value_or(s.seed);
    int run_budget = budget.value_or(100);
    int code = kExitOk;
    json j;
    if (command == "ergotropy") j = ergotropy_report(s);
    else if (command == "extract-full") j = extract_full_report(s);
    else if (command == "nogo-uncorrelated")
      j = nogo_uncorrelated_report(s, run_budget, run_seed, code);
    else if (command == "nogo-correlated")
      j = nogo_correlated_report(s, run_budget, run_seed, code);
    else j = certify_report(s, run_budget, run_seed, false, code);

    out << fmt12(value);
    for (const std::string& c : columns) {
      out << ",";
      const json& field = j.at(c);
      if (field.is_boolean()) out << (field.get<bool>() ? 1 : 0);
      else if (field.is_number_integer()) out << field.get<long long>();
      else if (field.is_number()) out << fmt12(field.get<double>());
      else out << field.get<std::string>();
    }
    out << "\n";
  }
  return out.str();
}

namespace {

/// flatten the scalar fields of a report into a header + one CSV row
std::string report_csv(const json& report) {
  std::ostringstream header, row;
  bool first = true;
  for (const auto& [key, value] : report.items()) {
    if (!(value.is_number() || value.is_boolean() || value.is_string())) continue;
    if (!first) {
      header << ",";
      row << ",";
    }
    first = false;
    header << key;
    if (value.is_boolean()) row << (value.get<bool>() ? 1 : 0);
    else if (value.is_number_integer()) row << value.get<long long>();
    else if (value.is_number()) row << fmt12(value.get<double>());
    else row << value.get<std::string>();
  }
  return header.str() + "\n" + row.str() + "\n";
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out)
    throw validation_error("cli.out", "cannot write '" + out_path + "'");
  out << content << "\n";
}

std::vector<double> parse_grid(const std::string& grid_spec) {
  std::vector<double> grid;
  std::stringstream ss(grid_spec);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    grid.push_back(std::stod(token));
  }
  return grid;
}

}  // namespace

int main_entry(int argc, const char* const* argv) {
  CLI::App app{"quantum battery catalysis workbench"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_path;
  std::string format = "json";
  std::vector<std::string> tol_specs;
  std::optional<std::uint64_t> seed;
  std::optional<int> budget;
  bool emit_operators = false;
  std::string parameter;
  std::string grid_spec;
  std::string sweep_command;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
    cmd->add_option("--out", out_path, "write the report here instead of stdout");
    cmd->add_option("--seed", seed, "override the scenario seed");
    cmd->add_option("--budget", budget, "optimizer restarts");
    cmd->add_option("--tol", tol_specs, "tolerance override name=value")
        ->take_all();
    cmd->add_option("--format", format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  CLI::App* cmd_ergotropy = app.add_subcommand("ergotropy", "closed-form ergotropy");
  add_common(cmd_ergotropy);
  CLI::App* cmd_extract = app.add_subcommand("extract-full", "constructed full extraction");
  add_common(cmd_extract);
  CLI::App* cmd_certify =
      app.add_subcommand("certify-passivity", "operator certificate + optimizer check");
  add_common(cmd_certify);
  cmd_certify->add_flag("--emit-operators", emit_operators,
                        "include the certificate operators in the report");
  CLI::App* cmd_unc = app.add_subcommand("nogo-uncorrelated", "uncorrelated-catalyst search");
  add_common(cmd_unc);
  CLI::App* cmd_cor = app.add_subcommand("nogo-correlated", "correlated-catalyst search");
  add_common(cmd_cor);
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
  add_common(cmd_sweep);
  cmd_sweep->add_option("--param", parameter, "k|h_B|h_C|d_C|seed")->required();
  cmd_sweep->add_option("--grid", grid_spec, "comma-separated grid values")->required();
  cmd_sweep->add_option("--command", sweep_command, "command to run per grid point")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    ScenarioFile file = load_scenario_file(scenario_path);
    CatalysisScenario scenario = file.scenario;
    for (const std::string& spec : tol_specs) {
      auto eq = spec.find('=');
      if (eq == std::string::npos)
        throw validation_error("cli.tol", "expected name=value, got '" + spec + "'");
      scenario.tol.set(spec.substr(0, eq), std::stod(spec.substr(eq + 1)));
    }
    if (!seed && file.options.contains("seed"))
      seed = file.options.at("seed").get<std::uint64_t>();
    if (!budget && file.options.contains("budget"))
      budget = file.options.at("budget").get<int>();
    std::uint64_t run_seed = seed.value_or(scenario.seed);
    int run_budget = budget.value_or(100);

    int exit_code = kExitOk;
    if (cmd_sweep->parsed()) {
      std::vector<double> grid = parse_grid(grid_spec);
      if (grid.empty() && file.options.contains("grid"))
        grid = file.options.at("grid").get<std::vector<double>>();
      write_output(out_path,
                   sweep_csv(scenario, parameter, grid, sweep_command, seed, budget));
      return kExitOk;
    }

    json report;
    if (cmd_ergotropy->parsed()) report = ergotropy_report(scenario);
    else if (cmd_extract->parsed()) report = extract_full_report(scenario);
    else if (cmd_certify->parsed())
      report = certify_report(scenario, run_budget, run_seed, emit_operators, exit_code);
    else if (cmd_unc->parsed())
      report = nogo_uncorrelated_report(scenario, run_budget, run_seed, exit_code);
    else if (cmd_cor->parsed())
      report = nogo_correlated_report(scenario, run_budget, run_seed, exit_code);

    write_output(out_path, format == "csv" ? report_csv(report) : report.dump(2));
    return exit_code;
  } catch (const validation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace catbench::cli
