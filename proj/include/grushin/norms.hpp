#pragma once

#include "grushin/field.hpp"
#include "grushin/jet.hpp"
#include "grushin/types.hpp"

#include <span>
#include <string>
#include <vector>

namespace grushin {

enum class NormFamily { Euclidean, PNorm, Ellipsoid };

/// A Minkowski norm M on R^n with M^2 strictly convex and C^2 away from 0.
/// Three built-in families: Euclidean |x|, the p-norm (exponent > 1), and the
/// ellipsoid norm sqrt(x^T A x) for A symmetric positive definite.
class NormSpec {
 public:
  static NormSpec euclidean(int dim);
  static NormSpec pnorm(int dim, double exponent);
  static NormSpec ellipsoid(const Mat& a);

  NormFamily family() const { return family_; }
  int dimension() const { return dim_; }
  double exponent() const { return exponent_; }
  const Mat& matrix() const { return a_; }

  /// p-norms with exponent < 2 have unbounded second derivatives on the
  /// coordinate hyperplanes; callers must keep a margin from them.
  bool hyperplaneSingular() const {
    return family_ == NormFamily::PNorm && exponent_ < 2.0 && dim_ > 1;
  }

  std::string describe() const;

 private:
  NormFamily family_ = NormFamily::Euclidean;
  int dim_ = 0;
  double exponent_ = 2.0;  // PNorm only
  Mat a_;                  // Ellipsoid only
};

struct DualSolverConfig {
  double tolerance = 1e-12;
  int max_iterations = 500;
};

/// M(x); defined everywhere, zero iff x = 0.
double norm_eval(const NormSpec& m, const Vec& x);

/// Closed-form value, gradient and Hessian of M at x != 0.
Jet2 norm_jet(const NormSpec& m, const Vec& x);

/// Analytic dual: Euclidean -> Euclidean, PNorm(p) -> PNorm(p/(p-1)),
/// Ellipsoid(A) -> Ellipsoid(A^{-1}).
NormSpec dual_norm_closed(const NormSpec& m);

/// M^0(x) = sup_{M(xi)=1} <x,xi> by ascent on the homogeneous quotient
/// <x,eta>/M(eta) with Newton refinement of the stationarity system.
double dual_norm_numeric(const NormSpec& m, const Vec& x, const DualSolverConfig& cfg = {});

/// Equivalence constants alpha,beta with alpha|x| <= M(x) <= beta|x|.
struct EquivalenceConstants {
  double alpha = 1.0;
  double beta = 1.0;
};
EquivalenceConstants equivalence_constants(const NormSpec& m);

/// Max deviations of the duality identities over a sample set:
/// M(grad M^0(x)) = M^0(grad M(x)) = 1, M^0(x) grad M(grad M^0(x)) = x (and
/// the swapped form), plus the Cauchy-Schwarz slack min over sample pairs.
struct NormIdentityReport {
  double max_unit_primal = 0.0;   // |M(grad M^0(x)) - 1|
  double max_unit_dual = 0.0;     // |M^0(grad M(x)) - 1|
  double max_inverse_primal = 0.0;  // |M^0(x) grad M(grad M^0(x)) - x|_inf / (1+|x|_inf)
  double max_inverse_dual = 0.0;    // |M(x) grad M^0(grad M(x)) - x|_inf / (1+|x|_inf)
  double min_cauchy_schwarz_slack = 0.0;  // min over pairs of M(x)M^0(y) - |<x,y>|
  double max_euler = 0.0;         // |<grad M(x), x> - M(x)| / M(x)
  int count = 0;
};
NormIdentityReport check_norm_identities(const NormSpec& m, const std::vector<Vec>& samples);

/// Empirical min/max of M(xi)^2/|xi|^2 over the samples (by homogeneity of
/// degree 2 this equals <grad(M^2)(xi), xi>/(2|xi|^2)); lands in
/// [alpha^2, beta^2] of the equivalence constants.
struct EllipticityBounds {
  double low = 0.0;
  double high = 0.0;
};
EllipticityBounds ellipticity_bounds(const NormSpec& m, const std::vector<Vec>& samples);

/// M(x) evaluated generically (double or Jet2 scalars) for field composition.
template <class T>
T norm_value_t(const NormSpec& m, std::span<const T> x);

/// M(x)^2, smooth at 0 for Euclidean/Ellipsoid (no square root taken).
template <class T>
T norm_squared_t(const NormSpec& m, std::span<const T> x);

/// The field x |-> M(x) with its declared singular set.
ScalarField norm_field(const NormSpec& m);

// --- template definitions -------------------------------------------------

template <class T>
T norm_squared_t(const NormSpec& m, std::span<const T> x) {
  if (static_cast<int>(x.size()) != m.dimension())
    throw DimensionMismatchError("norm_squared_t: dimension mismatch");
  switch (m.family()) {
    case NormFamily::Euclidean: {
      T s = x[0] * x[0];
      for (size_t i = 1; i < x.size(); ++i) s = s + x[i] * x[i];
      return s;
    }
    case NormFamily::Ellipsoid: {
      const Mat& a = m.matrix();
      T s = 0.0 * x[0];
      for (size_t i = 0; i < x.size(); ++i)
        for (size_t j = 0; j < x.size(); ++j)
          s = s + a(static_cast<int>(i), static_cast<int>(j)) * x[i] * x[j];
      return s;
    }
    case NormFamily::PNorm: {
      const double p = m.exponent();
      if (x.size() == 1) return x[0] * x[0];
      T s = abs_pow(x[0], p);
      for (size_t i = 1; i < x.size(); ++i) s = s + abs_pow(x[i], p);
      return pow(s, 2.0 / p);
    }
  }
  throw std::logic_error("norm_squared_t: unknown family");
}

template <class T>
T norm_value_t(const NormSpec& m, std::span<const T> x) {
  if (m.family() == NormFamily::PNorm && m.dimension() > 1) {
    const double p = m.exponent();
    T s = abs_pow(x[0], p);
    for (size_t i = 1; i < x.size(); ++i) s = s + abs_pow(x[i], p);
    return pow(s, 1.0 / p);
  }
  if (m.family() == NormFamily::PNorm && m.dimension() == 1) return abs(x[0]);
  return sqrt(norm_squared_t(m, x));
}

}  // namespace grushin
