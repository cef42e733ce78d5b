#ifndef CATBENCH_SERIALIZE_HPP
#define CATBENCH_SERIALIZE_HPP

#include <string>

#include <json.hpp>

#include "catbench/catalysis.hpp"
#include "catbench/certificate.hpp"
#include "catbench/nogo.hpp"
#include "catbench/qstate.hpp"

namespace catbench {

using json = nlohmann::json;

/// Round to 12 significant digits; all emitted floating-point fields pass
/// through this so output is stable and compact.
double round12(double value);

// matrices serialize as {"dim": n, "entries": [[[re, im] * n] * n]}, row-major
json matrix_to_json(const cmat& m);
cmat matrix_from_json(const json& j);

json to_json(const DensityMatrix& rho);
json to_json(const HermitianOperator& h);

DensityMatrix density_from_json(const json& j, const Tolerances& tol = {});
HermitianOperator hermitian_from_json(const json& j, const Tolerances& tol = {});

std::string to_string(CatalystKind kind);
CatalystKind catalyst_kind_from_string(const std::string& s);

json scenario_to_json(const CatalysisScenario& scenario);
CatalysisScenario scenario_from_json(const json& j);

/// Scenario file: {"version": "1", "scenario": {...}, "options": {...}}
struct ScenarioFile {
  std::string version;
  CatalysisScenario scenario;
  json options;  // command-specific: budget, k_grid, ...
};

ScenarioFile load_scenario_file(const std::string& path);
ScenarioFile scenario_file_from_json(const json& j);

json report_to_json(const ExtractionReport& report);
ExtractionReport extraction_report_from_json(const json& j);

json report_to_json(const NoGoReport& report);
NoGoReport nogo_report_from_json(const json& j);

json report_to_json(const CertificateReport& report, bool include_operators = false);
CertificateReport certificate_report_from_json(const json& j);

}  // namespace catbench

#endif
