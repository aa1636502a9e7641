#include "grushin/sampling.hpp"

#include <cmath>

namespace grushin {

namespace {

bool needs_hyperplane_margin(const NormSpec& m) {
  // Either the norm or its dual is a p-norm with exponent != 2; both appear in
  // the evaluated formulas, so keep off the hyperplanes in every such case.
  return m.family() == NormFamily::PNorm && m.exponent() != 2.0 && m.dimension() > 1;
}

}  // namespace

Point sample_annulus_point(Rng& rng, const GaugePair& gauge, const Vec& sigma0,
                           const SamplePolicy& policy) {
  const GrushinParams& par = gauge.params();
  if (sigma0.size() != par.k) throw DimensionMismatchError("sample_annulus_point: sigma0 length");
  const bool z_hyper = needs_hyperplane_margin(gauge.phi());
  const bool s_hyper = needs_hyperplane_margin(gauge.psi());
  const bool psi_anisotropic = gauge.psi().family() != NormFamily::Euclidean;

  for (int attempt = 0; attempt < policy.max_attempts; ++attempt) {
    Point pt;
    pt.z = Vec(par.m);
    pt.sigma = Vec(par.k);
    for (int i = 0; i < par.m; ++i) pt.z(i) = rng.uniform(-1.0, 1.0);
    for (int i = 0; i < par.k; ++i) pt.sigma(i) = rng.uniform(-1.0, 1.0);
    const double th = theta_dual_closed(gauge, pt);
    if (th < 1e-6) continue;
    const double target = rng.uniform(policy.theta_lo, policy.theta_hi);
    pt = dilate(par, target / th, pt);

    if (pt.z.norm() < policy.z_margin) continue;
    if (psi_anisotropic && (pt.sigma + sigma0).norm() < policy.sigma_margin) continue;
    bool ok = true;
    if (z_hyper)
      for (int i = 0; i < par.m && ok; ++i) ok = std::abs(pt.z(i)) >= policy.hyperplane_margin;
    if (s_hyper)
      for (int i = 0; i < par.k && ok; ++i)
        ok = std::abs(pt.sigma(i) + sigma0(i)) >= policy.hyperplane_margin;
    if (!ok) continue;
    return pt;
  }
  throw NoConvergenceError("sample_annulus_point: rejection sampling exhausted max_attempts");
}

std::vector<Point> sample_annulus_points(Rng& rng, const GaugePair& gauge, const Vec& sigma0,
                                         int count, const SamplePolicy& policy) {
  std::vector<Point> pts;
  pts.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) pts.push_back(sample_annulus_point(rng, gauge, sigma0, policy));
  return pts;
}

Vec sample_norm_point(Rng& rng, const NormSpec& m, double floor_inf, double hyperplane_margin) {
  const int n = m.dimension();
  const bool hyper = needs_hyperplane_margin(m);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x(i) = rng.uniform(-2.0, 2.0);
    if (x.cwiseAbs().maxCoeff() < floor_inf) continue;
    if (hyper) {
      bool ok = true;
      for (int i = 0; i < n && ok; ++i) ok = std::abs(x(i)) >= hyperplane_margin;
      if (!ok) continue;
    }
    return x;
  }
  throw NoConvergenceError("sample_norm_point: rejection sampling exhausted attempts");
}

std::vector<Vec> sample_norm_points(Rng& rng, const NormSpec& m, int count, double floor_inf,
                                    double hyperplane_margin) {
  std::vector<Vec> xs;
  xs.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) xs.push_back(sample_norm_point(rng, m, floor_inf, hyperplane_margin));
  return xs;
}

}  // namespace grushin
