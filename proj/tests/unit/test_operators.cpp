#include "grushin/operators.hpp"
#include "grushin/sampling.hpp"
#include "grushin/solutions.hpp"
#include "support/fd_divergence.hpp"

#include <doctest.h>

#include <cmath>

using namespace grushin;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

GaugePair euclidean_pair(int m, int k, double alpha = 1.0, double p = 2.0) {
  return GaugePair(NormSpec::euclidean(m), NormSpec::euclidean(k),
                   GrushinParams(m, k, alpha, p));
}

GaugePair aniso_pair(int m, int k, double alpha = 1.0, double p = 2.0) {
  Mat a = Mat::Identity(m, m);
  for (int i = 0; i < m; ++i) a(i, i) = 1.5 + 0.25 * i;
  for (int i = 0; i + 1 < m; ++i) a(i, i + 1) = a(i + 1, i) = 0.25;
  return GaugePair(NormSpec::ellipsoid(a), NormSpec::pnorm(k, 4.0),
                   GrushinParams(m, k, alpha, p));
}

ScalarField norm_squared_field(int n) {
  return ScalarField::make(n, [n](auto x) {
    using T = std::remove_cvref_t<decltype(x[0])>;
    T s = x[0] * x[0];
    for (int i = 1; i < n; ++i) s = s + x[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
    return s;
  });
}

}  // namespace

TEST_CASE("finsler_laplacian: Euclidean reduces to the plain Laplacian") {
  NormSpec m = NormSpec::euclidean(3);
  ScalarField u = norm_squared_field(3);
  // Delta |x|^2 = 2n, any x (including the degenerate-gradient origin)
  CHECK(finsler_laplacian(m, u, vec({0.4, -1.0, 2.0})) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(finsler_laplacian(m, u, vec({0.0, 0.0, 0.0})) == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("finsler_laplacian: linear u is annihilated for every norm") {
  for (const NormSpec& m :
       {NormSpec::euclidean(2), NormSpec::pnorm(2, 4.0),
        NormSpec::ellipsoid([] {
          Mat a = Mat::Identity(2, 2);
          a(0, 0) = 3.0;
          a(0, 1) = a(1, 0) = 0.5;
          return a;
        }())}) {
    ScalarField lin = ScalarField::make(2, [](auto x) { return 2.0 * x[0] - 0.7 * x[1] + 1.0; });
    CHECK(std::abs(finsler_laplacian(m, lin, vec({0.8, 0.6}))) <= 1e-13);
  }
}

TEST_CASE("finsler_laplacian: degenerate gradient raises for anisotropic norms") {
  NormSpec m = NormSpec::pnorm(2, 4.0);
  ScalarField u = norm_squared_field(2);
  CHECK_THROWS_AS(finsler_laplacian(m, u, vec({0.0, 0.0})), DegenerateGradientError);
}

TEST_CASE("radial identity lhs = rhs for the built-in norms and profiles") {
  Rng rng(61);
  std::vector<NormSpec> norms;
  norms.push_back(NormSpec::euclidean(3));
  norms.push_back(NormSpec::pnorm(3, 4.0));
  Mat a = Mat::Identity(3, 3);
  a(0, 0) = 2.0;
  a(1, 2) = a(2, 1) = 0.3;
  norms.push_back(NormSpec::ellipsoid(a));

  SUBCASE("frozen Euclidean cases") {
    // k(t) = t^2, n = 3: both sides = 2 + 2(n-1) = 6
    RadialCheck rc = radial_laplacian_check(NormSpec::euclidean(3), power_profile(2.0),
                                            vec({0.3, -0.4, 1.2}));
    CHECK(rc.lhs == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(rc.rhs == doctest::Approx(6.0).epsilon(1e-14));
    // k(t) = log t, n = 2: plane fundamental solution, both sides 0
    RadialCheck rl = radial_laplacian_check(NormSpec::euclidean(2), log_profile(),
                                            vec({0.8, -0.6}));
    CHECK(std::abs(rl.lhs) <= 1e-12);
    CHECK(std::abs(rl.rhs) <= 1e-14);
  }

  SUBCASE("all norms, four profiles, random points") {
    for (const NormSpec& m : norms) {
      std::vector<ScalarField> profiles;
      profiles.push_back(power_profile(2.0));
      profiles.push_back(power_profile(4.0));
      profiles.push_back(log_profile());
      profiles.push_back(power_profile(-1.0));  // t^{-(n-2)}, n = 3
      for (const ScalarField& prof : profiles) {
        for (int t = 0; t < 25; ++t) {
          Vec x = sample_norm_point(rng, m, 0.3, 0.05);
          RadialCheck rc = radial_laplacian_check(m, prof, x);
          CHECK(std::abs(rc.lhs - rc.rhs) <= 1e-8 * (1.0 + std::abs(rc.rhs)));
        }
      }
    }
  }
}

TEST_CASE("grushin_gradient_square basics") {
  GaugePair g = euclidean_pair(2, 1);
  OperatorContext ctx(g);
  // u = <a, z>: W = Phi(a)^2 constant
  ScalarField lin = ScalarField::make(3, [](auto x) { return 3.0 * x[0] + 4.0 * x[1] + 0.0 * x[2]; });
  Point pt;
  pt.z = vec({0.3, 0.9});
  pt.sigma = vec({-1.0});
  CHECK(grushin_gradient_square(ctx, lin, pt) == doctest::Approx(25.0).epsilon(1e-14));

  // and it is nonnegative on a generic field
  ScalarField f = ScalarField::make(3, [](auto x) {
    using T = std::remove_cvref_t<decltype(x[0])>;
    return sq(x[0]) * x[2] + x[1];
  });
  CHECK(grushin_gradient_square(ctx, f, pt) >= 0.0);
}

TEST_CASE("grushin_operator: Baouendi-Grushin reduction and frozen values") {
  GaugePair g = euclidean_pair(2, 1);
  OperatorContext ctx(g);
  // u = |z|^2: L u = 2m (sigma block contributes nothing)
  ScalarField zsq = ScalarField::make(3, [](auto x) { return x[0] * x[0] + x[1] * x[1]; });
  Point pt;
  pt.z = vec({0.7, -0.2});
  pt.sigma = vec({0.4});
  CHECK(grushin_operator(ctx, zsq, pt) == doctest::Approx(4.0).epsilon(1e-13));

  // Euclidean pair alpha=1: L u = Delta_z u + (|z|^2/4) Delta_sigma u from jets
  Rng rng(71);
  ScalarField f = ScalarField::make(3, [](auto x) {
    using T = std::remove_cvref_t<decltype(x[0])>;
    return sq(x[0]) * x[2] + x[1] * x[2] * x[2] + x[0] * x[1];
  });
  for (int t = 0; t < 50; ++t) {
    Point p;
    p.z = vec({rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)});
    p.sigma = vec({rng.uniform(-2.0, 2.0)});
    Jet2 ju = jet2_eval(f, p.flatten());
    const double direct = ju.hess(0, 0) + ju.hess(1, 1) +
                          p.z.squaredNorm() / 4.0 * ju.hess(2, 2);
    const double op = grushin_operator(ctx, f, p);
    CHECK(std::abs(op - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("chain rules for W and L on a smooth positive carrier") {
  Rng rng(83);
  for (const GaugePair& g : {euclidean_pair(2, 1), aniso_pair(2, 2), euclidean_pair(3, 2, 2.0)}) {
    OperatorContext ctx(g);
    const GrushinParams& par = g.params();
    YamabeSolutionSpec* spec = nullptr;  // carrier built inline (any alpha)
    (void)spec;
    const NormSpec phi0 = g.phiDual();
    const NormSpec psi0 = g.psiDual();
    const int m = par.m;
    ScalarField u = ScalarField::make(par.totalDim(), [phi0, psi0, m](auto x) {
      using T = std::remove_cvref_t<decltype(x[0])>;
      T phisq = norm_squared_t(phi0, x.subspan(0, static_cast<size_t>(m)));
      T psisq = norm_squared_t(psi0, x.subspan(static_cast<size_t>(m)));
      return sq(1.0 + phisq) + 16.0 * psisq;
    });
    std::vector<ScalarField> profiles;
    profiles.push_back(power_profile(3.0));
    profiles.push_back(power_profile(-(par.m + 2.0 * par.k - 2.0)));
    for (const ScalarField& f : profiles) {
      ScalarField fu = compose_profile(f, u);
      for (int t = 0; t < 50; ++t) {
        Point pt = sample_annulus_point(rng, g, Vec::Zero(par.k));
        Jet2 ju = jet2_eval(u, pt.flatten());
        Vec uval(1);
        uval(0) = ju.val;
        Jet2 jf = jet2_eval(f, uval);
        const double w_u = grushin_gradient_square_from_jet(ctx, ju, pt);
        const double w_fu = grushin_gradient_square(ctx, fu, pt);
        const double rhs_w = jf.grad(0) * jf.grad(0) * w_u;
        CHECK(std::abs(w_fu - rhs_w) <= 1e-11 * std::max(1.0, std::abs(rhs_w)));
        const double l_u = grushin_operator_from_jet(ctx, ju, pt);
        const double l_fu = grushin_operator(ctx, fu, pt);
        const double rhs_l = jf.grad(0) * l_u + jf.hess(0, 0) * w_u;
        CHECK(std::abs(l_fu - rhs_l) <= 1e-10 * std::max(1.0, std::abs(rhs_l)));
      }
    }
  }
}

TEST_CASE("grushin_operator_p reduces exactly to grushin_operator at p = 2") {
  Rng rng(91);
  for (const GaugePair& g : {euclidean_pair(2, 1), aniso_pair(3, 1)}) {
    OperatorContext ctx(g);
    ScalarField u = ScalarField::make(g.params().totalDim(), [&g](auto x) {
      using T = std::remove_cvref_t<decltype(x[0])>;
      const int m = g.params().m;
      T phisq = norm_squared_t(g.phiDual(), x.subspan(0, static_cast<size_t>(m)));
      T psisq = norm_squared_t(g.psiDual(), x.subspan(static_cast<size_t>(m)));
      return sq(1.0 + phisq) + 16.0 * psisq;
    });
    for (int t = 0; t < 30; ++t) {
      Point pt = sample_annulus_point(rng, g, Vec::Zero(g.params().k));
      Jet2 ju = jet2_eval(u, pt.flatten());
      const double a = grushin_operator_p_from_jet(ctx, ju, pt);
      const double b = grushin_operator_from_jet(ctx, ju, pt);
      CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)));
    }
  }
}

TEST_CASE("flux-divergence finite-difference oracle agrees with the operators") {
  Rng rng(97);
  SUBCASE("p = 2 against grushin_operator") {
    for (const GaugePair& g : {euclidean_pair(2, 1), aniso_pair(2, 1)}) {
      OperatorContext ctx(g);
      ScalarField u = ScalarField::make(g.params().totalDim(), [&g](auto x) {
        using T = std::remove_cvref_t<decltype(x[0])>;
        const int m = g.params().m;
        T phisq = norm_squared_t(g.phiDual(), x.subspan(0, static_cast<size_t>(m)));
        T psisq = norm_squared_t(g.psiDual(), x.subspan(static_cast<size_t>(m)));
        return sq(1.0 + phisq) + 16.0 * psisq;
      });
      for (int t = 0; t < 20; ++t) {
        Point pt = sample_annulus_point(rng, g, Vec::Zero(g.params().k));
        const double lhs = grushin_operator(ctx, u, pt);
        const double fd = testing::fd_flux_divergence(ctx, u, pt.flatten(), 1e-5);
        CHECK(std::abs(lhs - fd) <= 1e-4 * std::max(1.0, std::abs(lhs)));
      }
    }
  }
  SUBCASE("general p against grushin_operator_p") {
    GaugePair g = euclidean_pair(2, 1, 1.0, 3.0);
    OperatorContext ctx(g);
    ScalarField u = ScalarField::make(3, [](auto x) {
      using T = std::remove_cvref_t<decltype(x[0])>;
      return sq(1.0 + x[0] * x[0] + x[1] * x[1]) + 16.0 * sq(x[2]) + x[0];
    });
    for (int t = 0; t < 20; ++t) {
      Point pt = sample_annulus_point(rng, g, Vec::Zero(1));
      const double lhs = grushin_operator_p(ctx, u, pt);
      const double fd = testing::fd_flux_divergence(ctx, u, pt.flatten(), 1e-5);
      CHECK(std::abs(lhs - fd) <= 1e-4 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST_CASE("operator context validation") {
  CHECK_THROWS_AS(OperatorContext(euclidean_pair(2, 1), -1.0), ConfigError);
  GaugePair g = euclidean_pair(2, 1);
  OperatorContext ctx(g);
  ScalarField u = norm_squared_field(2);
  Point pt;
  pt.z = vec({1.0, 1.0});
  pt.sigma = vec({1.0});
  CHECK_THROWS_AS(grushin_operator(ctx, u, pt), DimensionMismatchError);
}
