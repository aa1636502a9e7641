#pragma once

#include "grushin/config.hpp"
#include "grushin/report.hpp"
#include "grushin/solutions.hpp"

#include <string>
#include <vector>

namespace grushin {

/// Output of one CLI command: residual reports (pass/fail carriers), free-form
/// extras for the JSON aggregate, and, for the wulff command, the polyline CSV
/// body that replaces the per-point record CSV.
struct SuiteRun {
  std::vector<ResidualReport> reports;
  nlohmann::json extras;
  std::vector<std::string> curve_csv_rows;  // "curve,angle,x,y" rows (wulff only)
};

SuiteRun run_check_identities(const RunConfig& cfg);
SuiteRun run_verify_yamabe(const RunConfig& cfg);
SuiteRun run_verify_fundamental(const RunConfig& cfg);
SuiteRun run_wulff(const RunConfig& cfg);
SuiteRun run_energy(const RunConfig& cfg);

/// Writes <output_path>.csv and <output_path>.json; the first CSV line is the
/// only non-deterministic one (timestamp header). Returns 0 if every report
/// passed, 1 otherwise.
int finalize_run(const RunConfig& cfg, const std::string& command, const SuiteRun& run);

/// Smooth positive carrier used by the chain-rule and reduction suites:
/// (eps^2 + Phi^0(z)^2)^2 + 16 Psi^0(sigma)^2 for any (alpha, p).
ScalarField k_like_field(const GaugePair& gauge, double epsilon);

}  // namespace grushin
