#include "grushin/suites.hpp"

#include "grushin/energy.hpp"
#include "grushin/sampling.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace grushin {

namespace {

Vec to_vec(std::initializer_list<double> xs) {
  Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

ResidualReport make_report(const RunConfig& cfg, const std::string& suite,
                           const std::string& tol_name) {
  ResidualReport r;
  r.suite = suite;
  r.tolerance = cfg.tol(tol_name);
  return r;
}

ResidualReport make_report(const RunConfig& cfg, const std::string& suite) {
  return make_report(cfg, suite, suite);
}

/// Identity rows for one norm over its sample set.
void norm_identity_rows(const NormSpec& m, const std::vector<Vec>& samples,
                        ResidualReport& finabla, ResidualReport& bp, ResidualReport& cs,
                        ResidualReport& euler, ResidualReport& ellipticity) {
  const NormSpec m0 = dual_norm_closed(m);
  for (const Vec& x : samples) {
    const double xinf = x.cwiseAbs().maxCoeff();
    Jet2 jm = norm_jet(m, x);
    Jet2 jm0 = norm_jet(m0, x);
    finabla.add(x, norm_eval(m, jm0.grad), 1.0, 1.0);
    finabla.add(x, norm_eval(m0, jm.grad), 1.0, 1.0);
    Jet2 jm_at = norm_jet(m, jm0.grad);
    Jet2 jm0_at = norm_jet(m0, jm.grad);
    bp.add(x, (jm0.val * jm_at.grad - x).cwiseAbs().maxCoeff() / (1.0 + xinf), 0.0, 1.0);
    bp.add(x, (jm.val * jm0_at.grad - x).cwiseAbs().maxCoeff() / (1.0 + xinf), 0.0, 1.0);
    euler.add(x, jm.grad.dot(x), jm.val, jm.val);
  }
  for (size_t i = 0; i < samples.size(); ++i) {
    const Vec& a = samples[i];
    const Vec& b = samples[(i + 1) % samples.size()];
    const double slack = norm_eval(m, a) * norm_eval(m0, b) - std::abs(a.dot(b));
    cs.add(a, std::max(0.0, -slack), 0.0, 1.0);
  }
  EquivalenceConstants eq = equivalence_constants(m);
  EllipticityBounds bounds = ellipticity_bounds(m, samples);
  ellipticity.add(Vec::Zero(m.dimension()), std::max(0.0, eq.alpha * eq.alpha - bounds.low), 0.0,
                  1.0);
  ellipticity.add(Vec::Zero(m.dimension()), std::max(0.0, bounds.high - eq.beta * eq.beta), 0.0,
                  1.0);
}

std::vector<ScalarField> radial_profiles(int n) {
  std::vector<ScalarField> ps;
  ps.push_back(power_profile(2.0));
  ps.push_back(power_profile(4.0));
  ps.push_back(log_profile());
  if (n != 2) ps.push_back(power_profile(-(n - 2.0)));  // constant (degenerate) when n == 2
  return ps;
}

nlohmann::json identity_extras(const NormSpec& m, const std::vector<Vec>& samples) {
  NormIdentityReport r = check_norm_identities(m, samples);
  return {{"norm", m.describe()},
          {"max_unit_primal", r.max_unit_primal},
          {"max_unit_dual", r.max_unit_dual},
          {"max_inverse_primal", r.max_inverse_primal},
          {"max_inverse_dual", r.max_inverse_dual},
          {"min_cauchy_schwarz_slack", r.min_cauchy_schwarz_slack},
          {"max_euler", r.max_euler}};
}

}  // namespace

ScalarField k_like_field(const GaugePair& gauge, double epsilon) {
  const NormSpec phi0 = gauge.phiDual();
  const NormSpec psi0 = gauge.psiDual();
  const double eps2 = epsilon * epsilon;
  const int m = gauge.params().m;
  return ScalarField::make(gauge.params().totalDim(), [phi0, psi0, eps2, m](auto x) {
    using T = std::remove_cvref_t<decltype(x[0])>;
    T phisq = norm_squared_t(phi0, x.subspan(0, static_cast<size_t>(m)));
    T psisq = norm_squared_t(psi0, x.subspan(static_cast<size_t>(m)));
    return sq(eps2 + phisq) + 16.0 * psisq;
  });
}

SuiteRun run_check_identities(const RunConfig& cfg) {
  SuiteRun out;
  GaugePair gauge = cfg.gauge();
  Rng rng(cfg.seed);

  ResidualReport finabla = make_report(cfg, "finabla");
  ResidualReport bp = make_report(cfg, "bp");
  ResidualReport cs = make_report(cfg, "cauchy_schwarz");
  ResidualReport euler = make_report(cfg, "euler_hom");
  ResidualReport ellipticity = make_report(cfg, "ellipticity");

  auto phi_samples = sample_norm_points(rng, cfg.phi, cfg.sample_count);
  auto psi_samples = sample_norm_points(rng, cfg.psi, cfg.sample_count);
  norm_identity_rows(cfg.phi, phi_samples, finabla, bp, cs, euler, ellipticity);
  norm_identity_rows(cfg.psi, psi_samples, finabla, bp, cs, euler, ellipticity);
  out.extras["norm_identities"] = {identity_extras(cfg.phi, phi_samples),
                                   identity_extras(cfg.psi, psi_samples)};

  // Chain rules on a smooth positive carrier.
  ResidualReport chain_w = make_report(cfg, "chain_gradient");
  ResidualReport chain_l = make_report(cfg, "chain_operator");
  {
    OperatorContext ctx(gauge);
    ScalarField u = k_like_field(gauge, cfg.epsilon);
    const GrushinParams& par = gauge.params();
    auto pts = sample_annulus_points(rng, gauge, Vec::Zero(par.k),
                                     std::min(cfg.sample_count, 50));
    std::vector<ScalarField> profiles;
    profiles.push_back(power_profile(3.0));
    profiles.push_back(power_profile(-(par.m + 2.0 * par.k - 2.0)));
    for (const ScalarField& f : profiles) {
      ScalarField fu = compose_profile(f, u);
      for (const Point& pt : pts) {
        try {
          Vec x = pt.flatten();
          Jet2 ju = jet2_eval(u, x);
          Vec uval(1);
          uval(0) = ju.val;
          Jet2 jf = jet2_eval(f, uval);
          const double w_u = grushin_gradient_square_from_jet(ctx, ju, pt);
          const double w_fu = grushin_gradient_square(ctx, fu, pt);
          chain_w.add(x, w_fu, jf.grad(0) * jf.grad(0) * w_u);
          const double l_u = grushin_operator_from_jet(ctx, ju, pt);
          const double l_fu = grushin_operator(ctx, fu, pt);
          chain_l.add(x, l_fu, jf.grad(0) * l_u + jf.hess(0, 0) * w_u);
        } catch (const SingularPointError&) {
          ++chain_w.excluded_count;
          ++chain_l.excluded_count;
        } catch (const DegenerateGradientError&) {
          ++chain_w.excluded_count;
          ++chain_l.excluded_count;
        }
      }
    }
  }

  // Radial identity for both norms.
  ResidualReport radial = make_report(cfg, "radial");
  for (const NormSpec* mp : {&cfg.phi, &cfg.psi}) {
    auto samples = sample_norm_points(rng, *mp, std::min(cfg.sample_count, 50));
    for (const ScalarField& prof : radial_profiles(mp->dimension())) {
      for (const Vec& x : samples) {
        try {
          RadialCheck rc = radial_laplacian_check(*mp, prof, x);
          radial.add(x, rc.lhs, rc.rhs);
        } catch (const SingularPointError&) {
          ++radial.excluded_count;
        } catch (const DegenerateGradientError&) {
          ++radial.excluded_count;
        }
      }
    }
  }

  out.reports = {finabla, bp, cs, euler, ellipticity, chain_w, chain_l, radial};
  return out;
}

SuiteRun run_verify_yamabe(const RunConfig& cfg) {
  if (cfg.params.alpha != 1.0 || cfg.params.p != 2.0)
    throw ConfigError("verify-yamabe requires alpha = 1 and p = 2");
  SuiteRun out;
  GaugePair gauge = cfg.gauge();
  YamabeSolutionSpec spec(gauge, cfg.epsilon, cfg.sigma0);
  Rng rng(cfg.seed);
  auto samples = sample_annulus_points(rng, gauge, cfg.sigma0, cfg.sample_count);

  auto with_tol = [&](ResidualReport r, const std::string& tol_name) {
    r.tolerance = cfg.tol(tol_name);
    return r;
  };

  out.reports.push_back(with_tol(verify_lemma_yam3(spec, samples), "lemma_yam3"));
  LemmaYam2Reports y2 = verify_lemma_yam2(spec, samples);
  out.reports.push_back(with_tol(y2.phi, "lemma_yam2_phi"));
  out.reports.push_back(with_tol(y2.psi, "lemma_yam2_psi"));
  out.reports.push_back(with_tol(y2.full, "lemma_yam2_full"));

  MagicReport magic = verify_magic(spec, samples);
  out.reports.push_back(with_tol(magic.pointwise, "magic"));
  ResidualReport lsq = make_report(cfg, "magic_lsq");
  lsq.add(Vec::Zero(1), magic.a_least_squares, magic.a_expected, std::abs(magic.a_expected));
  out.reports.push_back(lsq);

  IntertwiningReport inter = verify_intertwining(spec, samples);
  out.reports.push_back(with_tol(inter.pointwise, "intertwining"));
  ResidualReport lam = make_report(cfg, "lambda_consistency");
  lam.add(Vec::Zero(1), inter.lambda_deviation, 0.0, 1.0);
  out.reports.push_back(lam);
  ResidualReport ode = make_report(cfg, "ode_kill");
  ode.add(Vec::Zero(1), inter.max_ode_residual, 0.0, 1.0);
  out.reports.push_back(ode);

  out.reports.push_back(with_tol(verify_yamabe_residual(spec, samples, false), "yamabe_residual"));
  out.reports.push_back(
      with_tol(verify_yamabe_residual(spec, samples, true), "yamabe_residual_fd"));

  // L(lambda u) = lambda L(u) on u = K.
  ResidualReport scaling = make_report(cfg, "operator_scaling");
  {
    OperatorContext ctx(gauge);
    ScalarField k = big_k_field(spec);
    const int npts = std::min<int>(static_cast<int>(samples.size()), 25);
    for (double lambda : {2.0, 10.0}) {
      ScalarField lk = linear_combination(lambda, k, 0.0, k);
      for (int i = 0; i < npts; ++i) {
        try {
          const double lhs = grushin_operator(ctx, lk, samples[static_cast<size_t>(i)]);
          const double rhs = lambda * grushin_operator(ctx, k, samples[static_cast<size_t>(i)]);
          scaling.add(samples[static_cast<size_t>(i)].flatten(), lhs, rhs);
        } catch (const SingularPointError&) {
          ++scaling.excluded_count;
        } catch (const DegenerateGradientError&) {
          ++scaling.excluded_count;
        }
      }
    }
  }
  out.reports.push_back(scaling);

  out.extras["magic_a_expected"] = magic.a_expected;
  out.extras["magic_a_least_squares"] = magic.a_least_squares;
  out.extras["lambda_deviation"] = inter.lambda_deviation;
  out.extras["max_ode_residual"] = inter.max_ode_residual;
  return out;
}

SuiteRun run_verify_fundamental(const RunConfig& cfg) {
  SuiteRun out;
  std::vector<FundamentalCase> cases = cfg.fundamental_cases;
  if (cases.empty()) {
    cases = {{1.0, 2.0, false}, {1.0, 3.0, false}, {2.0, 2.0, false}, {1.0, 0.0, true}};
  }
  Rng rng(cfg.seed);
  SamplePolicy policy;
  policy.theta_lo = 0.5;
  policy.theta_hi = 2.0;

  nlohmann::json case_meta = nlohmann::json::array();
  for (const FundamentalCase& c : cases) {
    GrushinParams par(cfg.params.m, cfg.params.k, c.alpha,
                      c.p_is_q ? cfg.params.m + (c.alpha + 1.0) * cfg.params.k : c.p);
    GaugePair gauge(cfg.phi, cfg.psi, par);
    FundamentalSolutionSpec fspec(gauge);
    auto samples = sample_annulus_points(rng, gauge, Vec::Zero(par.k), cfg.sample_count, policy);
    ResidualReport rep = verify_fundamental_residual(fspec, samples);
    std::ostringstream name;
    name << "fundamental_a" << c.alpha;
    if (c.p_is_q)
      name << "_pQ";
    else
      name << "_p" << par.p;
    rep.suite = name.str();
    rep.tolerance = cfg.tol("fundamental");
    case_meta.push_back({{"alpha", c.alpha},
                         {"p", par.p},
                         {"log_branch", fspec.logBranch()},
                         {"Q", par.homogeneousDimension()},
                         {"max_rel", rep.max_rel()}});
    out.reports.push_back(std::move(rep));
  }
  out.extras["cases"] = case_meta;

  // p = 2 reduction of the general-p operator on a smooth carrier.
  ResidualReport red = make_report(cfg, "p2_reduction");
  {
    GrushinParams par(cfg.params.m, cfg.params.k, cfg.params.alpha, 2.0);
    GaugePair gauge(cfg.phi, cfg.psi, par);
    OperatorContext ctx(gauge);
    ScalarField u = k_like_field(gauge, cfg.epsilon);
    auto samples = sample_annulus_points(rng, gauge, Vec::Zero(par.k),
                                         std::min(cfg.sample_count, 50));
    for (const Point& pt : samples) {
      try {
        Jet2 ju = jet2_eval(u, pt.flatten());
        red.add(pt.flatten(), grushin_operator_p_from_jet(ctx, ju, pt),
                grushin_operator_from_jet(ctx, ju, pt));
      } catch (const SingularPointError&) {
        ++red.excluded_count;
      } catch (const DegenerateGradientError&) {
        ++red.excluded_count;
      }
    }
  }
  out.reports.push_back(red);
  return out;
}

SuiteRun run_wulff(const RunConfig& cfg) {
  SuiteRun out;
  GaugePair gauge = cfg.gauge();
  std::vector<std::string> curves = cfg.wulff_curves;
  if (curves.empty()) {
    curves.push_back("theta0_slice");
    if (cfg.params.m == 2) curves.push_back("phi0");
    if (cfg.params.k == 2) curves.push_back("psi0");
  }

  ResidualReport dev = make_report(cfg, "wulff_curve");
  constexpr int kPoints = 720;

  auto emit = [&](const std::string& name, auto&& point_at, auto&& gauge_value) {
    for (int i = 0; i <= kPoints; ++i) {  // final point closes the curve
      const double angle = 2.0 * std::numbers::pi * (i % kPoints) / kPoints;
      auto [cx, cy] = point_at(angle);
      std::ostringstream row;
      row << name << ',' << format_double(angle) << ',' << format_double(cx) << ','
          << format_double(cy);
      out.curve_csv_rows.push_back(row.str());
      if (i < kPoints) dev.add(to_vec({cx, cy}), gauge_value(cx, cy), 1.0, 1.0);
    }
  };

  for (const std::string& name : curves) {
    if (name == "phi0" || name == "psi0") {
      const bool is_phi = name == "phi0";
      const NormSpec& dual = is_phi ? gauge.phiDual() : gauge.psiDual();
      if (dual.dimension() != 2)
        throw ConfigError("wulff: curve '" + name + "' needs a 2-D block");
      emit(
          name,
          [&](double a) {
            Vec d = to_vec({std::cos(a), std::sin(a)});
            const double r = 1.0 / norm_eval(dual, d);
            return std::pair<double, double>{r * d(0), r * d(1)};
          },
          [&](double cx, double cy) { return norm_eval(dual, to_vec({cx, cy})); });
    } else if (name == "theta0_slice") {
      // 2-D slice (z_1, sigma_1); radius along each ray by bisection since
      // Theta^0 is increasing but not 1-homogeneous along ordinary rays.
      auto slice_theta = [&](double cx, double cy) {
        Point pt;
        pt.z = Vec::Zero(cfg.params.m);
        pt.sigma = Vec::Zero(cfg.params.k);
        pt.z(0) = cx;
        pt.sigma(0) = cy;
        return theta_dual_closed(gauge, pt);
      };
      emit(
          name,
          [&](double a) {
            const double dx = std::cos(a), dy = std::sin(a);
            double lo = 0.0, hi = 1.0;
            while (slice_theta(hi * dx, hi * dy) < 1.0) hi *= 2.0;
            for (int it = 0; it < 200; ++it) {
              const double mid = 0.5 * (lo + hi);
              (slice_theta(mid * dx, mid * dy) < 1.0 ? lo : hi) = mid;
              if (hi - lo <= 1e-15 * hi) break;
            }
            const double r = 0.5 * (lo + hi);
            return std::pair<double, double>{r * dx, r * dy};
          },
          slice_theta);
    } else {
      throw ConfigError("wulff: unknown curve '" + name + "'");
    }
  }
  out.reports.push_back(dev);
  return out;
}

SuiteRun run_energy(const RunConfig& cfg) {
  SuiteRun out;
  GaugePair gauge = cfg.gauge();
  OperatorContext ctx(gauge);
  const GrushinParams& par = cfg.params;
  const QuadratureSpec& q = cfg.quadrature;
  q.validate(par.totalDim());

  // Measure scaling under the anisotropic dilations.
  ResidualReport measure = make_report(cfg, "measure_scaling");
  {
    QuadratureSpec qm = q;
    qm.points_per_axis = std::min(q.points_per_axis, 12);
    auto one = [](const Vec&) { return 1.0; };
    const double vol =
        integrate_on_box(Box::cube(q.box_half_width, par.totalDim()), qm, one).value;
    for (double t : {0.5, 2.0}) {
      Box dil;
      dil.half_widths = Vec(par.totalDim());
      for (int i = 0; i < par.m; ++i) dil.half_widths(i) = q.box_half_width * t;
      for (int i = par.m; i < par.totalDim(); ++i)
        dil.half_widths(i) = q.box_half_width * std::pow(t, par.alpha + 1.0);
      const double vol_t = integrate_on_box(dil, qm, one).value;
      measure.add(to_vec({t}), vol_t / vol, std::pow(t, par.homogeneousDimension()),
                  std::pow(t, par.homogeneousDimension()));
    }
  }
  out.reports.push_back(measure);

  // Refinement of the bump energy (independent of the solution fields).
  ResidualReport bump_ref = make_report(cfg, "energy_refinement");
  {
    ScalarField bump = bump_field(par.totalDim(), 0.5 * q.box_half_width);
    QuadratureSpec qb = q;
    qb.points_per_axis = std::min(q.points_per_axis, 24);
    QuadratureSpec fine = qb;
    fine.points_per_axis = 2 * qb.points_per_axis;
    fine.budget = q.budget * 32;
    const double e1 = energy(ctx, bump, qb).value;
    const double e2 = energy(ctx, bump, fine).value;
    bump_ref.add(to_vec({0.0}), e2, e1, std::abs(e1));
    out.extras["bump_energy"] = e2;
  }
  out.reports.push_back(bump_ref);

  // Critical-exponent quantities on the explicit solution when available.
  if (par.p < par.homogeneousDimension()) {
    ScalarField u = (par.alpha == 1.0 && par.p == 2.0)
                        ? yamabe_field(YamabeSolutionSpec(gauge, cfg.epsilon, cfg.sigma0))
                        : bump_field(par.totalDim(), 0.5 * q.box_half_width);
    const double qc = critical_q(par);

    // Refinement on the gauge-adapted truncation box: sigma features of the
    // solution have width ~ eps^{alpha+1}/4, so the box is anisotropic.
    Box adapted;
    adapted.half_widths = Vec(par.totalDim());
    const double sig_half = std::pow(q.box_half_width, par.alpha + 1.0) / 16.0;
    for (int i = 0; i < par.m; ++i) adapted.half_widths(i) = q.box_half_width;
    for (int i = par.m; i < par.totalDim(); ++i) adapted.half_widths(i) = sig_half;
    QuadratureSpec base = q;
    base.budget = std::max(q.budget, 3e7);
    QuadratureSpec fine = base;
    fine.points_per_axis = base.points_per_axis + base.points_per_axis / 3;

    ResidualReport lq_ref = make_report(cfg, "lq_refinement");
    const double l1 = lq_norm_on_box(u, qc, adapted, base).value;
    const double l2 = lq_norm_on_box(u, qc, adapted, fine).value;
    lq_ref.add(to_vec({0.0}), l2, l1, std::abs(l1));
    out.reports.push_back(lq_ref);

    ResidualReport q_ref = make_report(cfg, "quotient_drift");
    const double e1 = energy_on_box(ctx, u, adapted, base).value;
    const double e2 = energy_on_box(ctx, u, adapted, fine).value;
    const double quot1 = l1 / std::pow(par.p * e1, 1.0 / par.p);
    const double quot2 = l2 / std::pow(par.p * e2, 1.0 / par.p);
    q_ref.add(to_vec({0.0}), quot2, quot1, std::abs(quot1));

    // Dilation invariance at the critical exponent (cube of the config, a
    // coarse rule suffices: the drift isolates the normalization exponent).
    QuadratureSpec qd = q;
    qd.points_per_axis = std::min(q.points_per_axis, 20);
    const double quot = sobolev_quotient(ctx, u, qd);
    for (double t : {0.5, 2.0}) {
      const double qt = sobolev_quotient_dilated(ctx, u, qd, t);
      q_ref.add(to_vec({t}), qt, quot, std::abs(quot));
    }
    out.reports.push_back(q_ref);
    out.extras["sobolev_quotient"] = quot2;
    out.extras["critical_q"] = qc;
    out.extras["energy"] = e2;
    out.extras["lq_norm"] = l2;
  } else {
    out.extras["sobolev_quotient"] = nullptr;
  }
  return out;
}

int finalize_run(const RunConfig& cfg, const std::string& command, const SuiteRun& run) {
  namespace fs = std::filesystem;
  fs::path base(cfg.output_path);
  if (base.has_parent_path()) fs::create_directories(base.parent_path());

  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch());
  std::ostringstream header;
  header << "generated unix=" << secs.count() << " command=" << command << " seed=" << cfg.seed
         << " rng=" << Rng::kAlgorithm;

  {
    std::ofstream csv(cfg.output_path + ".csv");
    if (!csv) throw ConfigError("cannot open output CSV at " + cfg.output_path + ".csv");
    if (!run.curve_csv_rows.empty()) {
      csv << "# " << header.str() << "\n";
      csv << "curve,angle,x,y\n";
      for (const std::string& row : run.curve_csv_rows) csv << row << "\n";
    } else {
      write_reports_csv(csv, run.reports, header.str());
    }
  }

  nlohmann::json meta;
  meta["command"] = command;
  meta["config"] = run_config_to_json(cfg);
  nlohmann::json agg = reports_aggregate_json(run.reports, meta);
  if (!run.extras.is_null()) agg["extras"] = run.extras;
  {
    std::ofstream js(cfg.output_path + ".json");
    if (!js) throw ConfigError("cannot open output JSON at " + cfg.output_path + ".json");
    js << agg.dump(2) << "\n";
  }

  for (const ResidualReport& r : run.reports)
    if (!r.pass()) return 1;
  return 0;
}

}  // namespace grushin
