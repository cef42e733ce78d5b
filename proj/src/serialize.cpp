#include "catbench/serialize.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace catbench {

double round12(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return std::strtod(buffer, nullptr);
}

json matrix_to_json(const cmat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j)
      row.push_back({round12(m(i, j).real()), round12(m(i, j).imag())});
    rows.push_back(std::move(row));
  }
  return json{{"dim", m.rows()}, {"entries", std::move(rows)}};
}

cmat matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
    throw validation_error("matrix.schema", "expected {dim, entries}");
  const int d = j.at("dim").get<int>();
  const json& rows = j.at("entries");
  if (d <= 0 || static_cast<int>(rows.size()) != d)
    throw validation_error("matrix.schema", "row count does not match dim");
  cmat m(d, d);
  for (int i = 0; i < d; ++i) {
    const json& row = rows.at(i);
    if (static_cast<int>(row.size()) != d)
      throw validation_error("matrix.schema", "column count does not match dim");
    for (int c = 0; c < d; ++c) {
      const json& entry = row.at(c);
      if (!entry.is_array() || entry.size() != 2)
        throw validation_error("matrix.schema", "entries must be [re, im] pairs");
      m(i, c) = complexd(entry.at(0).get<double>(), entry.at(1).get<double>());
    }
  }
  return m;
}

json to_json(const DensityMatrix& rho) { return matrix_to_json(rho.matrix()); }
json to_json(const HermitianOperator& h) { return matrix_to_json(h.matrix()); }

DensityMatrix density_from_json(const json& j, const Tolerances& tol) {
  return DensityMatrix(matrix_from_json(j), tol);
}

HermitianOperator hermitian_from_json(const json& j, const Tolerances& tol) {
  return HermitianOperator(matrix_from_json(j), tol);
}

std::string to_string(CatalystKind kind) {
  switch (kind) {
    case CatalystKind::EnergyInvariant: return "energy-invariant";
    case CatalystKind::Correlated: return "correlated";
    case CatalystKind::Uncorrelated: return "uncorrelated";
  }
  return "energy-invariant";
}

CatalystKind catalyst_kind_from_string(const std::string& s) {
  if (s == "energy-invariant") return CatalystKind::EnergyInvariant;
  if (s == "correlated") return CatalystKind::Correlated;
  if (s == "uncorrelated") return CatalystKind::Uncorrelated;
  throw validation_error("scenario.catalyst_kind", "unknown kind '" + s + "'");
}

json scenario_to_json(const CatalysisScenario& scenario) {
  json tolerances;
  for (const auto& [name, value] : scenario.tol.as_map())
    tolerances[name] = round12(value);
  return json{{"rho_B", to_json(scenario.rho_b)},
              {"H_B", to_json(scenario.h_b)},
              {"rho_C", to_json(scenario.rho_c)},
              {"H_C", to_json(scenario.h_c)},
              {"catalyst_kind", to_string(scenario.kind)},
              {"tolerances", std::move(tolerances)},
              {"seed", scenario.seed}};
}

CatalysisScenario scenario_from_json(const json& j) {
  Tolerances tol;
  if (j.contains("tolerances"))
    for (const auto& [name, value] : j.at("tolerances").items())
      tol.set(name, value.get<double>());

  CatalysisScenario scenario{
      density_from_json(j.at("rho_B"), tol),
      density_from_json(j.at("rho_C"), tol),
      hermitian_from_json(j.at("H_B"), tol),
      hermitian_from_json(j.at("H_C"), tol),
      j.contains("catalyst_kind")
          ? catalyst_kind_from_string(j.at("catalyst_kind").get<std::string>())
          : CatalystKind::EnergyInvariant,
      tol,
      j.value("seed", std::uint64_t{0})};
  scenario.validate();
  return scenario;
}

ScenarioFile scenario_file_from_json(const json& j) {
  ScenarioFile file;
  file.version = j.value("version", "");
  if (file.version != "1")
    throw validation_error("scenario.version",
                           "unrecognized scenario file version '" + file.version + "'");
  if (!j.contains("scenario"))
    throw validation_error("scenario.schema", "missing 'scenario' object");
  file.scenario = scenario_from_json(j.at("scenario"));
  file.options = j.value("options", json::object());
  return file;
}

ScenarioFile load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw validation_error("scenario.file", "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw validation_error("scenario.parse", e.what());
  }
  return scenario_file_from_json(j);
}

json report_to_json(const ExtractionReport& report) {
  return json{{"initial_energy", round12(report.initial_energy)},
              {"final_energy", round12(report.final_energy)},
              {"extracted", round12(report.extracted)},
              {"catalyst_energy_before", round12(report.catalyst_energy_before)},
              {"catalyst_energy_after", round12(report.catalyst_energy_after)},
              {"ground_fidelity", round12(report.ground_fidelity)},
              {"degenerate_ground", report.degenerate_ground},
              {"final_battery_state", matrix_to_json(report.final_battery_state.matrix())}};
}

ExtractionReport extraction_report_from_json(const json& j) {
  ExtractionReport report;
  report.initial_energy = j.at("initial_energy").get<double>();
  report.final_energy = j.at("final_energy").get<double>();
  report.extracted = j.at("extracted").get<double>();
  report.catalyst_energy_before = j.at("catalyst_energy_before").get<double>();
  report.catalyst_energy_after = j.at("catalyst_energy_after").get<double>();
  report.ground_fidelity = j.at("ground_fidelity").get<double>();
  report.degenerate_ground = j.at("degenerate_ground").get<bool>();
  Tolerances tol;
  tol.tr = 1e-6;  // serialized states are rounded to 12 digits
  tol.herm = 1e-6;
  tol.psd = 1e-6;
  report.final_battery_state =
      density_from_json(j.at("final_battery_state"), tol);
  return report;
}

json report_to_json(const NoGoReport& report) {
  json j{{"ergotropy", round12(report.ergotropy_value)},
         {"best_extraction", round12(report.best_extraction)},
         {"best_violation", round12(report.best_violation)},
         {"restarts", report.restarts},
         {"feasible_found", report.feasible_found},
         {"violated", report.violated},
         {"effective_tolerance", round12(report.effective_tolerance)},
         {"spectrum_anomaly", report.spectrum_anomaly},
         {"exploratory", report.exploratory},
         {"best_battery_state", matrix_to_json(report.best_battery_state.matrix())}};
  if (report.entropy_check) j["entropy_check"] = *report.entropy_check;
  if (report.delta_e) j["delta_E"] = round12(*report.delta_e);
  return j;
}

NoGoReport nogo_report_from_json(const json& j) {
  NoGoReport report;
  report.ergotropy_value = j.at("ergotropy").get<double>();
  report.best_extraction = j.at("best_extraction").get<double>();
  report.best_violation = j.at("best_violation").get<double>();
  report.restarts = j.at("restarts").get<int>();
  report.feasible_found = j.at("feasible_found").get<bool>();
  report.violated = j.at("violated").get<bool>();
  report.effective_tolerance = j.at("effective_tolerance").get<double>();
  report.spectrum_anomaly = j.at("spectrum_anomaly").get<bool>();
  report.exploratory = j.at("exploratory").get<bool>();
  if (j.contains("entropy_check")) report.entropy_check = j.at("entropy_check").get<bool>();
  if (j.contains("delta_E")) report.delta_e = j.at("delta_E").get<double>();
  Tolerances tol;
  tol.tr = 1e-6;
  tol.herm = 1e-6;
  tol.psd = 1e-6;
  report.best_battery_state = density_from_json(j.at("best_battery_state"), tol);
  return report;
}

json report_to_json(const CertificateReport& report, bool include_operators) {
  json j{{"x", round12(report.x)},
         {"x_degenerate", report.x_degenerate},
         {"x_consistency", round12(report.x_consistency)},
         {"hermiticity_defect", round12(report.hermiticity_defect)},
         {"min_eigenvalue", round12(report.min_eigenvalue)},
         {"passive", report.passive}};
  if (report.optimizer_best_extraction)
    j["optimizer_best_extraction"] = round12(*report.optimizer_best_extraction);
  if (include_operators) {
    j["Cpp"] = matrix_to_json(report.cpp.matrix());
    j["Ctilde"] = matrix_to_json(report.ctilde.matrix());
  }
  return j;
}

CertificateReport certificate_report_from_json(const json& j) {
  CertificateReport report;
  report.x = j.at("x").get<double>();
  report.x_degenerate = j.at("x_degenerate").get<bool>();
  report.x_consistency = j.at("x_consistency").get<double>();
  report.hermiticity_defect = j.at("hermiticity_defect").get<double>();
  report.min_eigenvalue = j.at("min_eigenvalue").get<double>();
  report.passive = j.at("passive").get<bool>();
  if (j.contains("optimizer_best_extraction"))
    report.optimizer_best_extraction = j.at("optimizer_best_extraction").get<double>();
  if (j.contains("Cpp")) report.cpp = RawOperator(matrix_from_json(j.at("Cpp")));
  if (j.contains("Ctilde")) report.ctilde = RawOperator(matrix_from_json(j.at("Ctilde")));
  return report;
}

}  // namespace catbench
