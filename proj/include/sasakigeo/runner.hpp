#ifndef SASAKIGEO_RUNNER_HPP
#define SASAKIGEO_RUNNER_HPP

#include <string>

namespace sasakigeo {

/// Exit-code contract shared by the C API and the CLI:
/// 0 pass, 1 tolerance failure, 2 config error, 3 numeric failure.
enum ExitCode : int {
  kExitPass = 0,
  kExitToleranceFailure = 1,
  kExitConfigError = 2,
  kExitNumericFailure = 3,
};

struct RunOutcome {
  int exit_code = kExitPass;
  std::string summary;       // human-readable lines
  std::string report_json;   // verify report (possibly partial)
  std::string csv;           // scan rows or trajectory
  std::string summary_json;  // scan summary or convergence study
};

/// Parses the JSON config (strict keys, exactly one command block) and runs
/// verify / scan / geodesic. Output files named in the config's output block
/// are written as a side effect; the same artifacts are returned in the
/// outcome. Throws ConfigError on invalid configs.
RunOutcome run_config(const std::string& config_json_text);

/// Renders a stored verify report (JSON) or scan/trajectory CSV as a
/// fixed-width text table. No recomputation.
std::string render_report(const std::string& input_text);

} // namespace sasakigeo

#endif
