#pragma once

#include "grushin/energy.hpp"
#include "grushin/gauge.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace grushin {

struct FundamentalCase {
  double alpha = 1.0;
  double p = 2.0;
  bool p_is_q = false;  // "p": "Q" in the config selects the log branch exactly
};

/// One verification run: the norm pair, structural parameters, solution
/// parameters, sampling controls, tolerance overrides and output location.
/// A fixed seed reproduces the sample set and the report body byte for byte.
struct RunConfig {
  NormSpec phi = NormSpec::euclidean(2);
  NormSpec psi = NormSpec::euclidean(1);
  GrushinParams params{2, 1, 1.0, 2.0};
  double epsilon = 1.0;
  Vec sigma0 = Vec::Zero(1);
  int sample_count = 200;
  std::uint64_t seed = 42;
  std::map<std::string, double> tolerances;  // overrides; names validated
  std::string output_path = "grushin_report";
  QuadratureSpec quadrature;
  std::vector<FundamentalCase> fundamental_cases;
  std::vector<std::string> wulff_curves;  // "phi0" | "psi0" | "theta0_slice"

  GaugePair gauge() const { return GaugePair(phi, psi, params); }
  bool anisotropic() const {
    return phi.family() != NormFamily::Euclidean || psi.family() != NormFamily::Euclidean;
  }

  /// Effective tolerance: override if present, else the suite default (some
  /// defaults differ between Euclidean and anisotropic pairs).
  double tol(const std::string& suite) const;
};

/// The validated tolerance-name set (unknown names are config errors).
const std::vector<std::string>& known_tolerance_names();

/// Strict parser: unknown keys anywhere are rejected.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

/// Deterministic echo of the effective config (report metadata).
nlohmann::json run_config_to_json(const RunConfig& cfg);

/// The three standard norm pairs by name, sized for (m, k).
void apply_norm_pair_preset(RunConfig& cfg, const std::string& name);

/// Deterministic SPD matrix used by the ellipsoid presets.
Mat preset_spd_matrix(int n);

}  // namespace grushin
