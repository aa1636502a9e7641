#pragma once

#include "grushin/types.hpp"

#include <cmath>
#include <concepts>

namespace grushin {

/// Second-order jet: value, gradient and dense symmetric Hessian of a scalar
/// quantity with respect to n ambient variables.
///
/// Arithmetic on Jet2 propagates truncated second-order Taylor coefficients,
/// so evaluating a formula on seeded jets yields the exact (to rounding)
/// value/gradient/Hessian of that formula. Supported primitives: + - * /,
/// powers with real exponent, sqrt, log, |.| and |.|^e. Operations that are
/// not twice differentiable at the evaluation point throw SingularPointError.
class Jet2 {
 public:
  double val = 0.0;
  Vec grad;
  Mat hess;

  Jet2() = default;

  /// Constant with respect to n variables.
  Jet2(double v, int n) : val(v), grad(Vec::Zero(n)), hess(Mat::Zero(n, n)) {}

  /// Seed for the idx-th independent variable.
  static Jet2 variable(double v, int n, int idx) {
    Jet2 j(v, n);
    j.grad(idx) = 1.0;
    return j;
  }

  int dimension() const { return static_cast<int>(grad.size()); }
};

namespace detail {

inline void checkSameDim(const Jet2& a, const Jet2& b) {
  if (a.dimension() != b.dimension())
    throw DimensionMismatchError("jet arithmetic: operand dimensions differ");
}

/// Copy the lower triangle onto the upper one: the Hessian is then symmetric
/// bit for bit, independent of how the compiler contracts the element
/// expressions (FMA vs mul+add can differ between vector lanes).
inline void mirror_lower(Mat& h) {
  for (int i = 0; i < h.rows(); ++i)
    for (int j = i + 1; j < h.cols(); ++j) h(i, j) = h(j, i);
}

/// f(a) for scalar f with derivatives f1, f2 at a.val.
inline Jet2 chain(const Jet2& a, double f0, double f1, double f2) {
  Jet2 r;
  r.val = f0;
  r.grad = f1 * a.grad;
  r.hess = f1 * a.hess + f2 * (a.grad * a.grad.transpose());
  mirror_lower(r.hess);
  return r;
}

}  // namespace detail

inline Jet2 operator-(const Jet2& a) {
  Jet2 r;
  r.val = -a.val;
  r.grad = -a.grad;
  r.hess = -a.hess;
  return r;
}

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  detail::checkSameDim(a, b);
  Jet2 r;
  r.val = a.val + b.val;
  r.grad = a.grad + b.grad;
  r.hess = a.hess + b.hess;
  return r;
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  detail::checkSameDim(a, b);
  Jet2 r;
  r.val = a.val - b.val;
  r.grad = a.grad - b.grad;
  r.hess = a.hess - b.hess;
  return r;
}

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  detail::checkSameDim(a, b);
  Jet2 r;
  r.val = a.val * b.val;
  r.grad = a.val * b.grad + b.val * a.grad;
  Mat outer = a.grad * b.grad.transpose();
  r.hess = a.val * b.hess + b.val * a.hess + (outer + outer.transpose());
  detail::mirror_lower(r.hess);
  return r;
}

inline Jet2 inverse(const Jet2& a) {
  if (a.val == 0.0) throw SingularPointError("jet inverse: division by zero");
  const double iv = 1.0 / a.val;
  return detail::chain(a, iv, -iv * iv, 2.0 * iv * iv * iv);
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * inverse(b); }

inline Jet2 operator+(const Jet2& a, double c) {
  Jet2 r = a;
  r.val += c;
  return r;
}
inline Jet2 operator+(double c, const Jet2& a) { return a + c; }
inline Jet2 operator-(const Jet2& a, double c) { return a + (-c); }
inline Jet2 operator-(double c, const Jet2& a) { return (-a) + c; }

inline Jet2 operator*(const Jet2& a, double c) {
  Jet2 r;
  r.val = a.val * c;
  r.grad = a.grad * c;
  r.hess = a.hess * c;
  return r;
}
inline Jet2 operator*(double c, const Jet2& a) { return a * c; }
inline Jet2 operator/(const Jet2& a, double c) { return a * (1.0 / c); }
inline Jet2 operator/(double c, const Jet2& a) { return c * inverse(a); }

inline Jet2 sq(const Jet2& a) { return a * a; }

inline Jet2 sqrt(const Jet2& a) {
  if (a.val <= 0.0) throw SingularPointError("jet sqrt: argument <= 0");
  const double s = std::sqrt(a.val);
  return detail::chain(a, s, 0.5 / s, -0.25 / (s * a.val));
}

inline Jet2 log(const Jet2& a) {
  if (a.val <= 0.0) throw SingularPointError("jet log: argument <= 0");
  const double iv = 1.0 / a.val;
  return detail::chain(a, std::log(a.val), iv, -iv * iv);
}

/// a^e with real exponent. Positive base always works; nonpositive bases are
/// allowed only for integer exponents (with a.val == 0 requiring e >= 2 for
/// the second derivative to exist).
inline Jet2 pow(const Jet2& a, double e) {
  if (e == 0.0) return Jet2(1.0, a.dimension());
  if (e == 1.0) return a;
  if (a.val > 0.0) {
    const double f0 = std::pow(a.val, e);
    return detail::chain(a, f0, e * f0 / a.val, e * (e - 1.0) * f0 / (a.val * a.val));
  }
  if (e == std::round(e)) {
    if (a.val != 0.0) {
      const double f0 = std::pow(a.val, e);
      const double f1 = e * std::pow(a.val, e - 1.0);
      const double f2 = e * (e - 1.0) * std::pow(a.val, e - 2.0);
      return detail::chain(a, f0, f1, f2);
    }
    if (e == 2.0) return detail::chain(a, 0.0, 0.0, 2.0);
    if (e > 2.0) return Jet2(0.0, a.dimension());
  }
  throw SingularPointError("jet pow: nonpositive base with non-integer exponent");
}

/// Absolute value; non-differentiable at 0 (declared singular).
inline Jet2 abs(const Jet2& a) {
  if (a.val == 0.0) throw SingularPointError("jet abs: argument is 0");
  return a.val > 0.0 ? a : -a;
}

/// |a|^e, with the removable singularity at a.val == 0 handled for e >= 2.
inline Jet2 abs_pow(const Jet2& a, double e) {
  if (e == 0.0) return Jet2(1.0, a.dimension());
  if (a.val != 0.0) {
    const double s = a.val > 0.0 ? 1.0 : -1.0;
    const double av = std::abs(a.val);
    const double f0 = std::pow(av, e);
    return detail::chain(a, f0, e * s * f0 / av, e * (e - 1.0) * f0 / (av * av));
  }
  if (e == 2.0) return detail::chain(a, 0.0, 0.0, 2.0);
  if (e > 2.0) return Jet2(0.0, a.dimension());
  throw SingularPointError("jet abs_pow: exponent < 2 at 0");
}

/// Scalar value of a generic operand (double or jet).
inline double value_of(double a) { return a; }
inline double value_of(const Jet2& a) { return a.val; }

// Plain-double counterparts so code written against the jet primitives can be
// instantiated with T = double as the value-only evaluation path. Constrained
// templates so the C library's non-template functions stay the better match
// wherever both are visible.
inline double sq(double a) { return a * a; }
inline double inverse(double a) { return 1.0 / a; }
inline double abs_pow(double a, double e) { return std::pow(std::abs(a), e); }
template <std::floating_point T> T sqrt(T a) { return std::sqrt(a); }
template <std::floating_point T> T log(T a) { return std::log(a); }
template <std::floating_point T> T pow(T a, T e) { return std::pow(a, e); }
template <std::floating_point T> T abs(T a) { return std::abs(a); }

}  // namespace grushin
