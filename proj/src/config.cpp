#include "grushin/config.hpp"

#include <algorithm>
#include <fstream>

namespace grushin {

namespace {

void require_keys(const nlohmann::json& obj, const std::vector<std::string>& allowed,
                  const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
  }
}

NormSpec parse_norm(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError("config: " + where + " must be an object");
  require_keys(j, {"family", "dimension", "exponent", "matrix"}, where);
  const std::string family = j.at("family").get<std::string>();
  if (family == "euclidean") {
    return NormSpec::euclidean(j.at("dimension").get<int>());
  }
  if (family == "pnorm") {
    return NormSpec::pnorm(j.at("dimension").get<int>(), j.at("exponent").get<double>());
  }
  if (family == "ellipsoid") {
    const auto& rows = j.at("matrix");
    if (!rows.is_array() || rows.empty()) throw ConfigError("config: " + where + ".matrix");
    const int n = static_cast<int>(rows.size());
    Mat a(n, n);
    for (int i = 0; i < n; ++i) {
      const auto& row = rows[static_cast<size_t>(i)];
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        throw ConfigError("config: " + where + ".matrix must be square");
      for (int c = 0; c < n; ++c) a(i, c) = row[static_cast<size_t>(c)].get<double>();
    }
    return NormSpec::ellipsoid(a);
  }
  throw ConfigError("config: unknown norm family '" + family + "' in " + where);
}

nlohmann::json norm_to_json(const NormSpec& m) {
  nlohmann::json j;
  j["dimension"] = m.dimension();
  switch (m.family()) {
    case NormFamily::Euclidean:
      j["family"] = "euclidean";
      break;
    case NormFamily::PNorm:
      j["family"] = "pnorm";
      j["exponent"] = m.exponent();
      break;
    case NormFamily::Ellipsoid: {
      j["family"] = "ellipsoid";
      nlohmann::json rows = nlohmann::json::array();
      for (int i = 0; i < m.dimension(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < m.dimension(); ++c) row.push_back(m.matrix()(i, c));
        rows.push_back(row);
      }
      j["matrix"] = rows;
      break;
    }
  }
  return j;
}

struct ToleranceDefault {
  double euclidean;
  double anisotropic;
};

const std::map<std::string, ToleranceDefault>& tolerance_defaults() {
  static const std::map<std::string, ToleranceDefault> table = {
      {"finabla", {1e-9, 1e-9}},
      {"bp", {1e-9, 1e-9}},
      {"cauchy_schwarz", {1e-12, 1e-12}},
      {"euler_hom", {1e-12, 1e-12}},
      {"ellipticity", {1e-12, 1e-12}},
      {"chain_gradient", {1e-11, 1e-11}},
      {"chain_operator", {1e-10, 1e-10}},
      {"radial", {1e-8, 1e-8}},
      {"lemma_yam3", {1e-9, 1e-8}},
      {"lemma_yam2_phi", {1e-9, 1e-8}},
      {"lemma_yam2_psi", {1e-9, 1e-8}},
      {"lemma_yam2_full", {1e-9, 1e-8}},
      {"magic", {1e-9, 1e-8}},
      {"magic_lsq", {1e-8, 1e-8}},
      {"intertwining", {1e-9, 1e-8}},
      {"lambda_consistency", {1e-14, 1e-14}},
      {"ode_kill", {1e-12, 1e-12}},
      {"operator_scaling", {1e-12, 1e-12}},
      {"yamabe_residual", {1e-7, 1e-7}},
      {"yamabe_residual_fd", {1e-4, 1e-4}},
      {"gauge_duality", {1e-6, 1e-6}},
      {"gauge_euclidean", {1e-13, 1e-13}},
      {"theta_homogeneity", {1e-13, 1e-13}},
      {"fundamental", {1e-7, 1e-7}},
      {"p2_reduction", {1e-12, 1e-12}},
      {"wulff_curve", {1e-9, 1e-9}},
      {"measure_scaling", {1e-3, 1e-3}},
      {"quotient_drift", {1e-2, 1e-2}},
      {"energy_refinement", {1e-3, 1e-3}},
      {"lq_refinement", {5e-3, 5e-3}},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& known_tolerance_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : tolerance_defaults()) v.push_back(k);
    return v;
  }();
  return names;
}

double RunConfig::tol(const std::string& suite) const {
  auto ov = tolerances.find(suite);
  if (ov != tolerances.end()) return ov->second;
  auto it = tolerance_defaults().find(suite);
  if (it == tolerance_defaults().end())
    throw ConfigError("tolerance lookup: unknown suite '" + suite + "'");
  return anisotropic() ? it->second.anisotropic : it->second.euclidean;
}

Mat preset_spd_matrix(int n) {
  Mat a = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = 1.5 + 0.25 * i;
    if (i + 1 < n) {
      a(i, i + 1) = 0.25;
      a(i + 1, i) = 0.25;
    }
  }
  return a;
}

void apply_norm_pair_preset(RunConfig& cfg, const std::string& name) {
  const int m = cfg.params.m;
  const int k = cfg.params.k;
  if (name == "euclidean") {
    cfg.phi = NormSpec::euclidean(m);
    cfg.psi = NormSpec::euclidean(k);
  } else if (name == "pnorm4_euclidean") {
    cfg.phi = NormSpec::pnorm(m, 4.0);
    cfg.psi = NormSpec::euclidean(k);
  } else if (name == "ellipsoid_pnorm4") {
    cfg.phi = NormSpec::ellipsoid(preset_spd_matrix(m));
    cfg.psi = NormSpec::pnorm(k, 4.0);
  } else {
    throw ConfigError("config: unknown norm_pair preset '" + name + "'");
  }
}

RunConfig parse_run_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  require_keys(j,
               {"norm_pair", "params", "epsilon", "sigma0", "sample_count", "seed", "tolerances",
                "output_path", "quadrature", "fundamental_cases", "wulff_curves"},
               "top level");
  RunConfig cfg;

  if (j.contains("params")) {
    const auto& pj = j.at("params");
    require_keys(pj, {"m", "k", "alpha", "p"}, "params");
    cfg.params = GrushinParams(pj.value("m", 2), pj.value("k", 1), pj.value("alpha", 1.0),
                               pj.value("p", 2.0));
  }
  cfg.sigma0 = Vec::Zero(cfg.params.k);

  if (j.contains("norm_pair")) {
    const auto& nj = j.at("norm_pair");
    if (nj.is_string()) {
      apply_norm_pair_preset(cfg, nj.get<std::string>());
    } else {
      require_keys(nj, {"phi", "psi"}, "norm_pair");
      cfg.phi = parse_norm(nj.at("phi"), "norm_pair.phi");
      cfg.psi = parse_norm(nj.at("psi"), "norm_pair.psi");
    }
  } else {
    apply_norm_pair_preset(cfg, "euclidean");
  }
  if (cfg.phi.dimension() != cfg.params.m || cfg.psi.dimension() != cfg.params.k)
    throw ConfigError("config: norm dimensions must equal (m, k)");

  if (j.contains("epsilon")) {
    cfg.epsilon = j.at("epsilon").get<double>();
    if (!(cfg.epsilon > 0.0)) throw ConfigError("config: epsilon must be > 0");
  }
  if (j.contains("sigma0")) {
    const auto& sj = j.at("sigma0");
    if (!sj.is_array() || static_cast<int>(sj.size()) != cfg.params.k)
      throw ConfigError("config: sigma0 must be an array of length k");
    for (int i = 0; i < cfg.params.k; ++i) cfg.sigma0(i) = sj[static_cast<size_t>(i)].get<double>();
  }
  if (j.contains("sample_count")) {
    cfg.sample_count = j.at("sample_count").get<int>();
    if (cfg.sample_count < 1) throw ConfigError("config: sample_count must be >= 1");
  }
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("output_path")) cfg.output_path = j.at("output_path").get<std::string>();

  if (j.contains("tolerances")) {
    const auto& tj = j.at("tolerances");
    require_keys(tj, known_tolerance_names(), "tolerances");
    for (auto it = tj.begin(); it != tj.end(); ++it) {
      const double v = it.value().get<double>();
      if (!(v > 0.0)) throw ConfigError("config: tolerance '" + it.key() + "' must be > 0");
      cfg.tolerances[it.key()] = v;
    }
  }

  if (j.contains("quadrature")) {
    const auto& qj = j.at("quadrature");
    require_keys(qj, {"box_half_width", "points_per_axis", "scheme", "budget"}, "quadrature");
    cfg.quadrature.box_half_width = qj.value("box_half_width", cfg.quadrature.box_half_width);
    cfg.quadrature.points_per_axis = qj.value("points_per_axis", cfg.quadrature.points_per_axis);
    cfg.quadrature.budget = qj.value("budget", cfg.quadrature.budget);
    if (qj.contains("scheme")) {
      const std::string s = qj.at("scheme").get<std::string>();
      if (s == "midpoint")
        cfg.quadrature.scheme = QuadScheme::TensorMidpoint;
      else if (s == "gauss")
        cfg.quadrature.scheme = QuadScheme::TensorGaussLegendre;
      else
        throw ConfigError("config: quadrature.scheme must be 'midpoint' or 'gauss'");
    }
  }

  if (j.contains("fundamental_cases")) {
    for (const auto& cj : j.at("fundamental_cases")) {
      require_keys(cj, {"alpha", "p"}, "fundamental_cases[]");
      FundamentalCase c;
      c.alpha = cj.value("alpha", 1.0);
      if (!(c.alpha > 0.0)) throw ConfigError("config: fundamental case alpha must be > 0");
      if (cj.contains("p") && cj.at("p").is_string()) {
        if (cj.at("p").get<std::string>() != "Q")
          throw ConfigError("config: fundamental case p must be a number or \"Q\"");
        c.p_is_q = true;
      } else {
        c.p = cj.value("p", 2.0);
        if (!(c.p > 1.0)) throw ConfigError("config: fundamental case p must be > 1");
      }
      cfg.fundamental_cases.push_back(c);
    }
  }

  if (j.contains("wulff_curves")) {
    for (const auto& cj : j.at("wulff_curves")) {
      const std::string name = cj.get<std::string>();
      if (name != "phi0" && name != "psi0" && name != "theta0_slice")
        throw ConfigError("config: wulff curve must be phi0, psi0 or theta0_slice");
      cfg.wulff_curves.push_back(name);
    }
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }
  return parse_run_config(j);
}

nlohmann::json run_config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["norm_pair"] = {{"phi", norm_to_json(cfg.phi)}, {"psi", norm_to_json(cfg.psi)}};
  j["params"] = {{"m", cfg.params.m}, {"k", cfg.params.k}, {"alpha", cfg.params.alpha},
                 {"p", cfg.params.p}};
  j["epsilon"] = cfg.epsilon;
  nlohmann::json s0 = nlohmann::json::array();
  for (int i = 0; i < cfg.sigma0.size(); ++i) s0.push_back(cfg.sigma0(i));
  j["sigma0"] = s0;
  j["sample_count"] = cfg.sample_count;
  j["seed"] = cfg.seed;
  j["rng"] = "splitmix64";
  return j;
}

}  // namespace grushin
