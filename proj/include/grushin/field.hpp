#pragma once

#include "grushin/jet.hpp"
#include "grushin/types.hpp"

#include <functional>
#include <span>
#include <type_traits>
#include <utility>

namespace grushin {

using SingularPredicate = std::function<bool(std::span<const double>)>;

/// A scalar field on R^n, evaluable both on plain doubles and on second-order
/// jets, with an optional declared singular set. Immutable after construction
/// and safe to share across threads; evaluators must be deterministic.
class ScalarField {
 public:
  ScalarField() = default;

  /// Wrap a generic callable f(std::span<const T>) -> T, T in {double, Jet2}.
  template <class F>
  static ScalarField make(int dim, F f, SingularPredicate singular = {}) {
    ScalarField s;
    s.dim_ = dim;
    s.value_ = [f](std::span<const double> x) -> double { return f(x); };
    s.jet_ = [f](std::span<const Jet2> x) -> Jet2 { return f(x); };
    s.singular_ = std::move(singular);
    return s;
  }

  int dimension() const { return dim_; }

  double value(std::span<const double> x) const {
    checkDim(static_cast<int>(x.size()));
    return value_(x);
  }

  Jet2 jet(std::span<const Jet2> x) const {
    checkDim(static_cast<int>(x.size()));
    return jet_(x);
  }

  bool singularAt(std::span<const double> x) const {
    return singular_ && singular_(x);
  }

 private:
  void checkDim(int n) const {
    if (n != dim_) throw DimensionMismatchError("ScalarField: point dimension mismatch");
  }

  int dim_ = 0;
  std::function<double(std::span<const double>)> value_;
  std::function<Jet2(std::span<const Jet2>)> jet_;
  SingularPredicate singular_;
};

/// Dispatch helper so composite fields can call other fields generically.
template <class T>
T eval_field(const ScalarField& f, std::span<const T> x) {
  if constexpr (std::is_same_v<T, double>) {
    return f.value(x);
  } else {
    return f.jet(x);
  }
}

/// Value, gradient and Hessian of f at x by forward propagation of
/// second-order Taylor coefficients through f's arithmetic.
Jet2 jet2_eval(const ScalarField& f, const Vec& x);

/// Default finite-difference step: h = scale * (1 + |x|_inf).
double fd_default_step(const Vec& x, double scale = 1e-5);

/// Independent central-difference oracle for jet2_eval: O(h^2) gradient and
/// Hessian from the plain-double evaluation path. Test-side cross check; any
/// stencil point on the singular set raises SingularPointError.
Jet2 fd_jet2(const ScalarField& f, const Vec& x, double h);
Jet2 fd_jet2(const ScalarField& f, const Vec& x);

/// a*f + b*g as a new field (dimensions must agree).
ScalarField linear_combination(double a, const ScalarField& f, double b, const ScalarField& g);

/// profile(field(x)) for a 1-D profile; singular set inherited from the inner field.
ScalarField compose_profile(const ScalarField& profile, const ScalarField& inner);

/// x |-> f(t*z, t^{alpha+1}*sigma) for the anisotropic dilation factors.
ScalarField compose_scaling(const ScalarField& f, const Vec& axis_factors);

/// 1-D profile t^e (singular where the power is: t <= 0 for non-integer e,
/// t = 0 for negative e).
ScalarField power_profile(double e);

/// 1-D profile log t (t > 0).
ScalarField log_profile();

/// C^2 compactly supported bump (max(0, 1 - |x|^2/r^2))^3.
ScalarField bump_field(int dim, double radius);

}  // namespace grushin
