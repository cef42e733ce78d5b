#ifndef CATBENCH_CLI_HPP
#define CATBENCH_CLI_HPP

#include <optional>
#include <string>
#include <vector>

#include "catbench/serialize.hpp"

namespace catbench::cli {

// exit codes: 0 success, 1 validation/usage error, 2 verdict anomaly
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitAnomaly = 2;

json ergotropy_report(const CatalysisScenario& scenario);
json extract_full_report(const CatalysisScenario& scenario);
json certify_report(const CatalysisScenario& scenario, int budget,
                    std::uint64_t seed, bool emit_operators, int& exit_code);
json nogo_uncorrelated_report(const CatalysisScenario& scenario, int budget,
                              std::uint64_t seed, int& exit_code);
json nogo_correlated_report(const CatalysisScenario& scenario, int budget,
                            std::uint64_t seed, int& exit_code);

/// One CSV row per grid value for `command`; header-only for an empty grid.
std::string sweep_csv(const CatalysisScenario& scenario, const std::string& parameter,
                      const std::vector<double>& grid, const std::string& command,
                      std::optional<std::uint64_t> seed, std::optional<int> budget);

int main_entry(int argc, const char* const* argv);

}  // namespace catbench::cli

#endif
