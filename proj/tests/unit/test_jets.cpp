#include "grushin/field.hpp"
#include "grushin/jet.hpp"
#include "grushin/sampling.hpp"
#include "support/polynomial.hpp"

#include <doctest.h>

#include <cmath>

using namespace grushin;
using grushin::testing::Polynomial;
using grushin::testing::random_polynomial;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

double jet_distance(const Jet2& a, const Jet2& b) {
  double d = std::abs(a.val - b.val) / std::max(1.0, std::abs(b.val));
  d = std::max(d, (a.grad - b.grad).cwiseAbs().maxCoeff() /
                      (1.0 + b.grad.cwiseAbs().maxCoeff()));
  d = std::max(d, (a.hess - b.hess).cwiseAbs().maxCoeff() /
                      (1.0 + b.hess.cwiseAbs().maxCoeff()));
  return d;
}

}  // namespace

TEST_CASE("jet2_eval on frozen polynomial examples") {
  // f(x) = x^2 at 3
  ScalarField sq1 = ScalarField::make(1, [](auto x) { return x[0] * x[0]; });
  Jet2 j = jet2_eval(sq1, vec({3.0}));
  CHECK(j.val == doctest::Approx(9.0).epsilon(1e-15));
  CHECK(j.grad(0) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(j.hess(0, 0) == doctest::Approx(2.0).epsilon(1e-15));

  // f(x,y) = x*y at (2,5)
  ScalarField prod = ScalarField::make(2, [](auto x) { return x[0] * x[1]; });
  j = jet2_eval(prod, vec({2.0, 5.0}));
  CHECK(j.val == 10.0);
  CHECK(j.grad(0) == 5.0);
  CHECK(j.grad(1) == 2.0);
  CHECK(j.hess(0, 0) == 0.0);
  CHECK(j.hess(0, 1) == 1.0);
  CHECK(j.hess(1, 0) == 1.0);

  // |x|^2 in R^3 at (1,2,2)
  ScalarField nsq = ScalarField::make(3, [](auto x) {
    return x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  });
  j = jet2_eval(nsq, vec({1.0, 2.0, 2.0}));
  CHECK(j.val == 9.0);
  CHECK(j.grad(0) == 2.0);
  CHECK(j.grad(1) == 4.0);
  CHECK(j.grad(2) == 4.0);
  CHECK((j.hess - 2.0 * Mat::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("jets match the symbolic oracle on random degree-<=4 polynomials") {
  Rng rng(20240601);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 1 + static_cast<int>(rng.uniform(0.0, 4.0));
    Polynomial p = random_polynomial(rng, dim, 4, 6);
    ScalarField f = p.field();
    Vec x(dim);
    for (int i = 0; i < dim; ++i) x(i) = rng.uniform(-2.0, 2.0);
    Jet2 j = jet2_eval(f, x);
    const double scale =
        1.0 + std::abs(p.value(x)) + p.gradient(x).cwiseAbs().maxCoeff() +
        p.hessian(x).cwiseAbs().maxCoeff();
    CHECK(std::abs(j.val - p.value(x)) <= 1e-13 * scale);
    CHECK((j.grad - p.gradient(x)).cwiseAbs().maxCoeff() <= 1e-13 * scale);
    CHECK((j.hess - p.hessian(x)).cwiseAbs().maxCoeff() <= 1e-13 * scale);
  }
}

TEST_CASE("jet arithmetic produces exactly symmetric Hessians") {
  Rng rng(7);
  ScalarField f = ScalarField::make(3, [](auto x) {
    using T = std::remove_cvref_t<decltype(x[0])>;
    T a = x[0] * x[1] + 2.0;
    T b = sqrt(a * a + x[2] * x[2]);
    return pow(b, 1.7) / a + log(a) * abs_pow(x[2] + 3.0, 2.5);
  });
  for (int t = 0; t < 50; ++t) {
    Vec x = vec({rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)});
    Jet2 j = jet2_eval(f, x);
    CHECK((j.hess - j.hess.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("fd_jet2 oracle: cubic gradient and constant field") {
  ScalarField cube = ScalarField::make(1, [](auto x) { return x[0] * x[0] * x[0]; });
  Jet2 j = fd_jet2(cube, vec({1.0}), 1e-4);
  CHECK(std::abs(j.grad(0) - 3.0) <= 1e-7);

  ScalarField cst = ScalarField::make(2, [](auto x) { return 4.2 + 0.0 * x[0] + 0.0 * x[1]; });
  j = fd_jet2(cst, vec({0.3, -0.8}));
  CHECK(j.grad.cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(j.hess.cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("jets agree with finite differences on norm-like composites") {
  Rng rng(99);
  ScalarField f = ScalarField::make(3, [](auto x) {
    using T = std::remove_cvref_t<decltype(x[0])>;
    T s = abs_pow(x[0], 4.0 / 3.0) + abs_pow(x[1], 4.0 / 3.0) + abs_pow(x[2], 4.0 / 3.0);
    return sq(1.0 + pow(s, 1.5)) + sqrt(1.0 + x[0] * x[0]);
  });
  for (int t = 0; t < 100; ++t) {
    Vec x(3);
    for (int i = 0; i < 3; ++i) {
      x(i) = rng.uniform(0.2, 2.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    }
    Jet2 ad = jet2_eval(f, x);
    Jet2 fd = fd_jet2(f, x);
    CHECK(jet_distance(fd, ad) <= 1e-5);
  }
}

TEST_CASE("linearity of jet2_eval") {
  Rng rng(3);
  Polynomial p = random_polynomial(rng, 3, 4, 5);
  Polynomial q = random_polynomial(rng, 3, 4, 5);
  ScalarField f = p.field();
  ScalarField g = q.field();
  ScalarField combo = linear_combination(2.5, f, -1.25, g);
  for (int t = 0; t < 25; ++t) {
    Vec x = vec({rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)});
    Jet2 jf = jet2_eval(f, x);
    Jet2 jg = jet2_eval(g, x);
    Jet2 jc = jet2_eval(combo, x);
    Jet2 expect = 2.5 * jf + (-1.25) * jg;
    CHECK(jet_distance(jc, expect) <= 1e-13);
  }
}

TEST_CASE("declared singular sets raise SingularPointError") {
  ScalarField f = ScalarField::make(
      1, [](auto x) { return abs(x[0]); },
      [](std::span<const double> x) { return x[0] == 0.0; });
  CHECK_THROWS_AS(jet2_eval(f, vec({0.0})), SingularPointError);
  CHECK(jet2_eval(f, vec({-2.0})).grad(0) == -1.0);

  ScalarField g = ScalarField::make(1, [](auto x) {
    using T = std::remove_cvref_t<decltype(x[0])>;
    return log(T(x[0]));
  });
  CHECK_THROWS_AS(jet2_eval(g, vec({-1.0})), SingularPointError);

  ScalarField h = ScalarField::make(2, [](auto x) { return x[0] / x[1]; });
  CHECK_THROWS_AS(jet2_eval(h, vec({1.0, 0.0})), SingularPointError);
  CHECK_THROWS_AS(jet2_eval(h, vec({1.0})), DimensionMismatchError);
}

TEST_CASE("fd_jet2 vs jets on a gauge-power field (oracle cross-check)") {
  // same shape as the solution profiles: (1 + |x|^2)^2 + 16 y^2, then ^(-3/4)
  ScalarField f = ScalarField::make(3, [](auto x) {
    using T = std::remove_cvref_t<decltype(x[0])>;
    T k = sq(1.0 + x[0] * x[0] + x[1] * x[1]) + 16.0 * x[2] * x[2];
    return pow(k, -0.75);
  });
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    Vec x = vec({rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)});
    Jet2 ad = jet2_eval(f, x);
    Jet2 fd = fd_jet2(f, x);
    CHECK(jet_distance(fd, ad) <= 1e-5);
  }
}
