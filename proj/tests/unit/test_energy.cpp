#include "grushin/energy.hpp"
#include "grushin/solutions.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace grushin;

namespace {

GaugePair euclidean_pair(int m, int k, double alpha = 1.0, double p = 2.0) {
  return GaugePair(NormSpec::euclidean(m), NormSpec::euclidean(k),
                   GrushinParams(m, k, alpha, p));
}

}  // namespace

TEST_CASE("gauss_legendre nodes reproduce the 5-point rule and integrate polynomials") {
  auto [x, w] = gauss_legendre(5);
  // classical 5-point rule: inner abscissa sqrt(5 - 2 sqrt(10/7))/3, outer
  // sqrt(5 + 2 sqrt(10/7))/3, center weight 128/225
  CHECK(std::abs(x[2]) <= 1e-15);
  CHECK(x[3] == doctest::Approx(std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0)
                    .epsilon(1e-14));
  CHECK(x[4] == doctest::Approx(std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0)
                    .epsilon(1e-14));
  CHECK(w[2] == doctest::Approx(128.0 / 225.0).epsilon(1e-14));
  // degree-9 exactness
  double integral = 0.0;
  for (int i = 0; i < 5; ++i) integral += w[static_cast<size_t>(i)] * std::pow(x[static_cast<size_t>(i)], 8);
  CHECK(integral == doctest::Approx(2.0 / 9.0).epsilon(1e-13));
}

TEST_CASE("integrate_on_box: exact volume, budget, singular exclusion") {
  QuadratureSpec q;
  q.box_half_width = 2.0;
  q.points_per_axis = 8;
  q.scheme = QuadScheme::TensorMidpoint;
  Box box = Box::cube(2.0, 3);
  IntegralResult r = integrate_on_box(box, q, [](const Vec&) { return 1.0; });
  CHECK(r.value == doctest::Approx(64.0).epsilon(1e-14));
  CHECK(r.total_points == 512);
  CHECK(r.excluded_count == 0);

  QuadratureSpec qb = q;
  qb.budget = 100.0;
  CHECK_THROWS_AS(integrate_on_box(box, qb, [](const Vec&) { return 1.0; }), BudgetExceededError);

  IntegralResult rs = integrate_on_box(box, q, [](const Vec& x) -> double {
    if (std::abs(x(0)) < 0.3) throw SingularPointError("test");
    return 1.0;
  });
  CHECK(rs.excluded_count == 128);  // one slab of midpoints excluded
}

TEST_CASE("energy: zero field gives zero, bump is finite and refinement-stable") {
  GaugePair g = euclidean_pair(2, 1);
  OperatorContext ctx(g);
  QuadratureSpec q;
  q.box_half_width = 4.0;
  q.points_per_axis = 16;

  ScalarField zero = ScalarField::make(3, [](auto x) { return 0.0 * x[0]; });
  CHECK(energy(ctx, zero, q).value == 0.0);

  ScalarField bump = bump_field(3, 2.0);
  q.points_per_axis = 24;
  const double e1 = energy(ctx, bump, q).value;
  CHECK(e1 > 0.0);
  QuadratureSpec fine = q;
  fine.points_per_axis = 48;
  const double e2 = energy(ctx, bump, fine).value;
  CHECK(std::abs(e2 - e1) <= 1e-3 * e2);
}

TEST_CASE("energy matches a finite-difference-gradient quadrature oracle on the bump") {
  GaugePair g = euclidean_pair(2, 1);
  OperatorContext ctx(g);
  QuadratureSpec q;
  q.box_half_width = 4.0;
  q.points_per_axis = 20;
  ScalarField bump = bump_field(3, 2.0);
  const double e = energy(ctx, bump, q).value;

  // oracle: same rule, W from central-difference gradients of the value path
  auto integrand = [&](const Vec& x) {
    const double h = 1e-6 * (1.0 + x.cwiseAbs().maxCoeff());
    Vec grad(3);
    Vec y = x;
    for (int i = 0; i < 3; ++i) {
      y(i) = x(i) + h;
      const double fp = bump.value({y.data(), 3});
      y(i) = x(i) - h;
      const double fm = bump.value({y.data(), 3});
      y(i) = x(i);
      grad(i) = (fp - fm) / (2.0 * h);
    }
    const double wz = grad.segment(0, 2).squaredNorm();
    const double ws = x.segment(0, 2).squaredNorm() / 4.0 * grad(2) * grad(2);
    return 0.5 * (wz + ws);
  };
  const double oracle = integrate_on_box(Box::cube(4.0, 3), q, integrand).value;
  CHECK(std::abs(e - oracle) <= 1e-3 * std::max(e, oracle));
}

TEST_CASE("lq_norm: bound for a unit bump, exact scaling in lambda") {
  QuadratureSpec q;
  q.box_half_width = 2.0;
  q.points_per_axis = 16;
  ScalarField bump = bump_field(2, 1.5);
  const double vol = 16.0;
  const double n3 = lq_norm(bump, 3.0, q).value;
  CHECK(n3 > 0.0);
  CHECK(n3 <= std::pow(vol, 1.0 / 3.0));  // |bump| <= 1

  ScalarField scaled = linear_combination(7.0, bump, 0.0, bump);
  const double n3s = lq_norm(scaled, 3.0, q).value;
  CHECK(n3s == doctest::Approx(7.0 * n3).epsilon(1e-13));
}

TEST_CASE("measure scaling: volume of the dilated box is t^Q") {
  GrushinParams par(3, 1, 1.0, 2.0);  // Q = 5
  QuadratureSpec q;
  q.box_half_width = 1.0;
  q.points_per_axis = 8;
  q.scheme = QuadScheme::TensorMidpoint;
  auto one = [](const Vec&) { return 1.0; };
  const double vol = integrate_on_box(Box::cube(1.0, 4), q, one).value;
  for (double t : {0.5, 2.0}) {
    Box dil;
    dil.half_widths = Vec(4);
    for (int i = 0; i < 3; ++i) dil.half_widths(i) = t;
    dil.half_widths(3) = t * t;
    const double vt = integrate_on_box(dil, q, one).value;
    CHECK(vt / vol == doctest::Approx(std::pow(t, 5.0)).epsilon(1e-3));
  }
}

TEST_CASE("sobolev quotient: critical exponent, scale invariance, dilation drift") {
  GaugePair g = euclidean_pair(3, 1);  // Q = 5, p = 2, q_c = 2*5/3
  OperatorContext ctx(g);
  CHECK(critical_q(g.params()) == doctest::Approx(10.0 / 3.0).epsilon(1e-15));

  YamabeSolutionSpec spec(g, 1.0, Vec::Zero(1));
  ScalarField u = yamabe_field(spec);
  QuadratureSpec q;
  q.box_half_width = 8.0;
  q.points_per_axis = 16;
  q.scheme = QuadScheme::TensorGaussLegendre;

  const double quot = sobolev_quotient(ctx, u, q);
  CHECK(std::isfinite(quot));
  CHECK(quot > 0.0);

  // u -> lambda u leaves the quotient unchanged to rounding
  ScalarField lu = linear_combination(3.0, u, 0.0, u);
  CHECK(sobolev_quotient(ctx, lu, q) == doctest::Approx(quot).epsilon(1e-12));

  // dilation drift at the critical exponent is pure quadrature error
  for (double t : {0.5, 2.0}) {
    const double qt = sobolev_quotient_dilated(ctx, u, q, t);
    CHECK(std::abs(qt - quot) <= 1e-2 * quot);
  }

  // refinement stability of the critical norm on the gauge-adapted box
  // (sigma features have width ~1/4, so the truncation box is anisotropic)
  Box adapted;
  adapted.half_widths = Vec(4);
  adapted.half_widths << 8.0, 8.0, 8.0, 8.0 * 8.0 / 16.0;
  QuadratureSpec qa = q;
  qa.points_per_axis = 48;
  qa.budget = 3e7;
  QuadratureSpec qf = qa;
  qf.points_per_axis = 64;
  const double l1 = lq_norm_on_box(u, critical_q(g.params()), adapted, qa).value;
  const double l2 = lq_norm_on_box(u, critical_q(g.params()), adapted, qf).value;
  CHECK(std::abs(l2 - l1) <= 5e-3 * l2);
}

TEST_CASE("quadrature validation: dimension cap and p < Q") {
  QuadratureSpec q;
  CHECK_THROWS_AS(q.validate(6), ConfigError);
  GrushinParams par(3, 1, 1.0, 4.9999);
  CHECK(critical_q(par) > 0.0);
  CHECK_THROWS_AS(critical_q(GrushinParams(3, 1, 1.0, 5.0)), ConfigError);
  CHECK_THROWS_AS(critical_q(GrushinParams(3, 1, 1.0, 6.0)), ConfigError);
}
