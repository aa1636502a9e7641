#include "grushin/field.hpp"

#include <cmath>
#include <vector>

namespace grushin {

Jet2 jet2_eval(const ScalarField& f, const Vec& x) {
  const int n = static_cast<int>(x.size());
  if (n != f.dimension()) throw DimensionMismatchError("jet2_eval: point dimension mismatch");
  std::span<const double> xs(x.data(), static_cast<size_t>(n));
  if (f.singularAt(xs)) throw SingularPointError("jet2_eval: point in declared singular set");
  std::vector<Jet2> seeds;
  seeds.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) seeds.push_back(Jet2::variable(x(i), n, i));
  return f.jet(std::span<const Jet2>(seeds.data(), seeds.size()));
}

double fd_default_step(const Vec& x, double scale) {
  return scale * (1.0 + x.cwiseAbs().maxCoeff());
}

namespace {

double eval_checked(const ScalarField& f, const Vec& x) {
  std::span<const double> xs(x.data(), static_cast<size_t>(x.size()));
  if (f.singularAt(xs)) throw SingularPointError("fd_jet2: stencil point in singular set");
  return f.value(xs);
}

}  // namespace

Jet2 fd_jet2(const ScalarField& f, const Vec& x, double h) {
  const int n = static_cast<int>(x.size());
  if (n != f.dimension()) throw DimensionMismatchError("fd_jet2: point dimension mismatch");
  Jet2 r(0.0, n);
  const double f0 = eval_checked(f, x);
  r.val = f0;

  std::vector<double> fp(n), fm(n);
  Vec xp = x, xm = x;
  for (int i = 0; i < n; ++i) {
    xp(i) = x(i) + h;
    xm(i) = x(i) - h;
    fp[i] = eval_checked(f, xp);
    fm[i] = eval_checked(f, xm);
    xp(i) = x(i);
    xm(i) = x(i);
    r.grad(i) = (fp[i] - fm[i]) / (2.0 * h);
    r.hess(i, i) = (fp[i] - 2.0 * f0 + fm[i]) / (h * h);
  }
  Vec y = x;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      y(i) = x(i) + h; y(j) = x(j) + h;
      const double fpp = eval_checked(f, y);
      y(j) = x(j) - h;
      const double fpm = eval_checked(f, y);
      y(i) = x(i) - h; y(j) = x(j) + h;
      const double fmp = eval_checked(f, y);
      y(j) = x(j) - h;
      const double fmm = eval_checked(f, y);
      y(i) = x(i); y(j) = x(j);
      const double d = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
      r.hess(i, j) = d;
      r.hess(j, i) = d;
    }
  }
  return r;
}

Jet2 fd_jet2(const ScalarField& f, const Vec& x) { return fd_jet2(f, x, fd_default_step(x)); }

ScalarField linear_combination(double a, const ScalarField& f, double b, const ScalarField& g) {
  if (f.dimension() != g.dimension())
    throw DimensionMismatchError("linear_combination: field dimensions differ");
  SingularPredicate sing = [f, g](std::span<const double> x) {
    return f.singularAt(x) || g.singularAt(x);
  };
  return ScalarField::make(
      f.dimension(),
      [a, f, b, g](auto x) {
        using T = std::remove_cvref_t<decltype(x[0])>;
        return a * eval_field<T>(f, x) + b * eval_field<T>(g, x);
      },
      std::move(sing));
}

ScalarField compose_profile(const ScalarField& profile, const ScalarField& inner) {
  if (profile.dimension() != 1)
    throw DimensionMismatchError("compose_profile: profile must be one-dimensional");
  SingularPredicate sing = [inner](std::span<const double> x) { return inner.singularAt(x); };
  return ScalarField::make(
      inner.dimension(),
      [profile, inner](auto x) {
        using T = std::remove_cvref_t<decltype(x[0])>;
        T t = eval_field<T>(inner, x);
        return eval_field<T>(profile, std::span<const T>(&t, 1));
      },
      std::move(sing));
}

ScalarField power_profile(double e) {
  const bool integral = e == std::round(e);
  SingularPredicate sing;
  if (!integral) {
    sing = [](std::span<const double> t) { return t[0] <= 0.0; };
  } else if (e < 0.0) {
    sing = [](std::span<const double> t) { return t[0] == 0.0; };
  }
  return ScalarField::make(
      1,
      [e](auto t) {
        using T = std::remove_cvref_t<decltype(t[0])>;
        return pow(T(t[0]), e);
      },
      std::move(sing));
}

ScalarField log_profile() {
  return ScalarField::make(
      1,
      [](auto t) {
        using T = std::remove_cvref_t<decltype(t[0])>;
        return log(T(t[0]));
      },
      [](std::span<const double> t) { return t[0] <= 0.0; });
}

ScalarField bump_field(int dim, double radius) {
  const double r2 = radius * radius;
  return ScalarField::make(dim, [r2, dim](auto x) {
    using T = std::remove_cvref_t<decltype(x[0])>;
    T s = x[0] * x[0];
    for (int i = 1; i < dim; ++i) s = s + x[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
    T arg = 1.0 - s / r2;
    if (value_of(arg) <= 0.0) return 0.0 * arg;  // support cut, C^2 across it
    return arg * arg * arg;
  });
}

ScalarField compose_scaling(const ScalarField& f, const Vec& axis_factors) {
  if (static_cast<int>(axis_factors.size()) != f.dimension())
    throw DimensionMismatchError("compose_scaling: factor count != field dimension");
  Vec factors = axis_factors;
  SingularPredicate sing = [f, factors](std::span<const double> x) {
    Vec y(factors.size());
    for (int i = 0; i < factors.size(); ++i) y(i) = factors(i) * x[static_cast<size_t>(i)];
    return f.singularAt(std::span<const double>(y.data(), static_cast<size_t>(y.size())));
  };
  return ScalarField::make(
      f.dimension(),
      [f, factors](auto x) {
        using T = std::remove_cvref_t<decltype(x[0])>;
        std::vector<T> y;
        y.reserve(static_cast<size_t>(factors.size()));
        for (int i = 0; i < factors.size(); ++i) y.push_back(factors(i) * x[static_cast<size_t>(i)]);
        return eval_field<T>(f, std::span<const T>(y.data(), y.size()));
      },
      std::move(sing));
}

}  // namespace grushin
