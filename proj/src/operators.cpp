#include "grushin/operators.hpp"

#include <cmath>

namespace grushin {

namespace {

/// Jet of u restricted to a coordinate block (second-order data of the
/// partial function z |-> u(z, sigma_fixed)).
Jet2 block_jet(const Jet2& ju, int offset, int len) {
  Jet2 b(0.0, len);
  b.val = ju.val;
  b.grad = ju.grad.segment(offset, len);
  b.hess = ju.hess.block(offset, offset, len, len);
  return b;
}

/// Degeneracy test for a block jet: the gradient counts as vanishing when it
/// is below margin relative to the magnitude of the computation (value and
/// curvature), so uniformly rescaled fields degenerate at the same points.
bool gradient_degenerate(const Jet2& ju, double margin) {
  const double scale = std::max({std::abs(ju.val), ju.hess.cwiseAbs().maxCoeff(), 1e-300});
  return ju.grad.norm() < margin * scale;
}

/// M(g) grad M(g): the flux of the Finsler Laplacian. Linear for Euclidean
/// (= g) and in 1-D (= M(1)^2 g); otherwise needs g away from 0.
Vec norm_flux(const NormSpec& m, const Jet2& ju, double margin) {
  const Vec& g = ju.grad;
  if (m.family() == NormFamily::Euclidean) return g;
  if (m.dimension() == 1) {
    Vec one = Vec::Ones(1);
    const double c = norm_eval(m, one);
    return c * c * g;
  }
  if (gradient_degenerate(ju, margin))
    throw DegenerateGradientError("norm_flux: gradient below singular margin");
  Jet2 jm = norm_jet(m, g);
  return jm.val * jm.grad;
}

double weight_value(const OperatorContext& ctx, const Point& pt) {
  const double a = ctx.gauge.params().alpha;
  const double phi0 = norm_eval(ctx.gauge.phiDual(), pt.z);
  return std::pow(phi0, 2.0 * a) / 4.0;
}

}  // namespace

double finsler_laplacian_from_jet(const NormSpec& m, const Jet2& ju, double singular_margin) {
  const int n = m.dimension();
  if (ju.dimension() != n)
    throw DimensionMismatchError("finsler_laplacian_from_jet: jet dimension mismatch");
  if (m.family() == NormFamily::Euclidean) return ju.hess.trace();
  if (n == 1) {
    Vec one = Vec::Ones(1);
    const double c = norm_eval(m, one);
    return c * c * ju.hess(0, 0);
  }
  if (gradient_degenerate(ju, singular_margin))
    throw DegenerateGradientError("finsler_laplacian: gradient below singular margin");
  Jet2 jm = norm_jet(m, ju.grad);
  Mat coeff = jm.grad * jm.grad.transpose() + jm.val * jm.hess;
  return coeff.cwiseProduct(ju.hess).sum();
}

double finsler_laplacian(const NormSpec& m, const ScalarField& u, const Vec& x,
                         double singular_margin) {
  return finsler_laplacian_from_jet(m, jet2_eval(u, x), singular_margin);
}

RadialCheck radial_laplacian_check(const NormSpec& m, const ScalarField& profile, const Vec& x,
                                   double singular_margin) {
  if (profile.dimension() != 1)
    throw DimensionMismatchError("radial_laplacian_check: profile must be 1-D");
  const NormSpec m0 = dual_norm_closed(m);
  const int n = m.dimension();

  ScalarField radial = ScalarField::make(n, [m0, profile](auto xs) {
    using T = std::remove_cvref_t<decltype(xs[0])>;
    T t = norm_value_t<T>(m0, xs);
    return eval_field<T>(profile, std::span<const T>(&t, 1));
  });

  RadialCheck out;
  out.lhs = finsler_laplacian(m, radial, x, singular_margin);

  const double psi = norm_eval(m0, x);
  if (psi == 0.0) throw SingularPointError("radial_laplacian_check: x = 0");
  Vec t(1);
  t(0) = psi;
  Jet2 jk = jet2_eval(profile, t);
  out.rhs = jk.hess(0, 0) + (n - 1) / psi * jk.grad(0);
  return out;
}

GrushinEval grushin_eval_from_jet(const OperatorContext& ctx, const Jet2& ju, const Point& pt) {
  const GrushinParams& par = ctx.gauge.params();
  if (ju.dimension() != par.totalDim())
    throw DimensionMismatchError("grushin_eval_from_jet: jet dimension mismatch");
  if (pt.z.size() != par.m || pt.sigma.size() != par.k)
    throw DimensionMismatchError("grushin_eval_from_jet: point dimension mismatch");

  GrushinEval ev;
  Jet2 jz = block_jet(ju, 0, par.m);
  Jet2 js = block_jet(ju, par.m, par.k);
  ev.weight = weight_value(ctx, pt);
  ev.delta_phi = finsler_laplacian_from_jet(ctx.gauge.phi(), jz, ctx.singular_margin);
  ev.delta_psi = finsler_laplacian_from_jet(ctx.gauge.psi(), js, ctx.singular_margin);
  const double phi_gz = norm_eval(ctx.gauge.phi(), jz.grad);
  const double psi_gs = norm_eval(ctx.gauge.psi(), js.grad);
  ev.gradient_square = phi_gz * phi_gz + ev.weight * psi_gs * psi_gs;
  ev.operator_value = ev.delta_phi + ev.weight * ev.delta_psi;
  return ev;
}

double grushin_gradient_square_from_jet(const OperatorContext& ctx, const Jet2& ju,
                                        const Point& pt) {
  const GrushinParams& par = ctx.gauge.params();
  const Vec gz = ju.grad.segment(0, par.m);
  const Vec gs = ju.grad.segment(par.m, par.k);
  const double phi_gz = norm_eval(ctx.gauge.phi(), gz);
  const double psi_gs = norm_eval(ctx.gauge.psi(), gs);
  return phi_gz * phi_gz + weight_value(ctx, pt) * psi_gs * psi_gs;
}

double grushin_gradient_square(const OperatorContext& ctx, const ScalarField& u, const Point& pt) {
  return grushin_gradient_square_from_jet(ctx, jet2_eval(u, pt.flatten()), pt);
}

double grushin_operator_from_jet(const OperatorContext& ctx, const Jet2& ju, const Point& pt) {
  return grushin_eval_from_jet(ctx, ju, pt).operator_value;
}

double grushin_operator(const OperatorContext& ctx, const ScalarField& u, const Point& pt) {
  return grushin_operator_from_jet(ctx, jet2_eval(u, pt.flatten()), pt);
}

double grushin_operator_p_from_jet(const OperatorContext& ctx, const Jet2& ju, const Point& pt) {
  const GrushinParams& par = ctx.gauge.params();
  const double p = par.p;
  const double a = par.alpha;
  const int m = par.m;
  const int k = par.k;

  GrushinEval ev = grushin_eval_from_jet(ctx, ju, pt);
  const double w = ev.weight;
  const double big_w = ev.gradient_square;
  if (p == 2.0) return ev.operator_value;

  if (big_w <= 0.0 || (p < 2.0 && big_w < ctx.singular_margin))
    throw DegenerateGradientError("grushin_operator_p: W(u) below singular margin");

  Jet2 jz = block_jet(ju, 0, m);
  Jet2 js = block_jet(ju, m, k);
  const Vec& gz = jz.grad;
  const Vec& gs = js.grad;
  Vec flux_z = norm_flux(ctx.gauge.phi(), jz, ctx.singular_margin);
  Vec flux_s = norm_flux(ctx.gauge.psi(), js, ctx.singular_margin);

  // grad of the weight Phi^0(z)^{2a}/4 (zero in the sigma block). The limit
  // at Phi^0 = 0 is 0 whenever 2a > 1; below that the point is singular.
  Vec grad_w = Vec::Zero(m);
  const double phi0 = norm_eval(ctx.gauge.phiDual(), pt.z);
  if (phi0 > 0.0) {
    Jet2 j0 = norm_jet(ctx.gauge.phiDual(), pt.z);
    grad_w = 0.5 * a * std::pow(phi0, 2.0 * a - 1.0) * j0.grad;
  } else if (2.0 * a <= 1.0) {
    throw SingularPointError("grushin_operator_p: weight gradient singular at z = 0");
  }

  // grad W assembled from the flux vectors: d_a(M(g)^2) = 2 <flux, dg/da>.
  const double psi_gs = norm_eval(ctx.gauge.psi(), gs);
  const double psi_gs2 = psi_gs * psi_gs;
  Vec grad_big_w(m + k);
  for (int c = 0; c < m + k; ++c) {
    double v = 2.0 * flux_z.dot(ju.hess.col(c).segment(0, m)) +
               2.0 * w * flux_s.dot(ju.hess.col(c).segment(m, k));
    if (c < m) v += grad_w(c) * psi_gs2;
    grad_big_w(c) = v;
  }

  const double wp2 = std::pow(big_w, 0.5 * p - 1.0);
  const double wp4 = std::pow(big_w, 0.5 * p - 2.0);
  const double inner = grad_big_w.segment(0, m).dot(flux_z) +
                       w * grad_big_w.segment(m, k).dot(flux_s);
  return wp2 * ev.operator_value + 0.5 * (p - 2.0) * wp4 * inner;
}

double grushin_operator_p(const OperatorContext& ctx, const ScalarField& u, const Point& pt) {
  return grushin_operator_p_from_jet(ctx, jet2_eval(u, pt.flatten()), pt);
}

}  // namespace grushin
