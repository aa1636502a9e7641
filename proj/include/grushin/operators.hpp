#pragma once

#include "grushin/field.hpp"
#include "grushin/gauge.hpp"
#include "grushin/norms.hpp"

namespace grushin {

/// Evaluation context for the pointwise operators; singular_margin is the
/// degeneracy threshold for gradient blocks and weight singularities.
struct OperatorContext {
  GaugePair gauge;
  double singular_margin = 1e-6;

  OperatorContext(GaugePair g, double margin = 1e-6) : gauge(std::move(g)), singular_margin(margin) {
    if (!(singular_margin > 0.0)) throw ConfigError("OperatorContext: singular_margin must be > 0");
  }
};

/// Finsler Laplacian from an already-computed jet of u:
///   Delta_M u = sum_{ij} (d_iM d_jM + M d^2_{ij}M)(grad u) d^2_{ij}u.
/// Euclidean norms reduce to the plain Laplacian (trace), and 1-D norms to
/// M(1)^2 u''; both stay defined where the gradient vanishes.
double finsler_laplacian_from_jet(const NormSpec& m, const Jet2& ju, double singular_margin = 1e-6);

/// Delta_M(u)(x), u-derivatives from jet2_eval.
double finsler_laplacian(const NormSpec& m, const ScalarField& u, const Vec& x,
                         double singular_margin = 1e-6);

/// Both sides of the radial identity for v = profile o M^0:
///   Delta_M(v) = profile''(psi) + (n-1)/psi profile'(psi),  psi = M^0(x).
struct RadialCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};
RadialCheck radial_laplacian_check(const NormSpec& m, const ScalarField& profile, const Vec& x,
                                   double singular_margin = 1e-6);

/// Block pieces of the sub-Finsler operator at one point (all derived from
/// the same second-order jet of u in the full space).
struct GrushinEval {
  double delta_phi = 0.0;      // z-block Finsler Laplacian
  double delta_psi = 0.0;      // sigma-block Finsler Laplacian
  double weight = 0.0;         // Phi^0(z)^{2 alpha} / 4
  double gradient_square = 0.0;  // W(u) = Phi(grad_z u)^2 + weight Psi(grad_sigma u)^2
  double operator_value = 0.0;   // delta_phi + weight * delta_psi
};
GrushinEval grushin_eval_from_jet(const OperatorContext& ctx, const Jet2& ju, const Point& pt);

/// W(u)(pt) >= 0, the energy-density integrand of the functional.
double grushin_gradient_square(const OperatorContext& ctx, const ScalarField& u, const Point& pt);
double grushin_gradient_square_from_jet(const OperatorContext& ctx, const Jet2& ju, const Point& pt);

/// L_{Phi,Psi,alpha}(u) = Delta_Phi(u) + (Phi^0(z)^{2 alpha}/4) Delta_Psi(u).
double grushin_operator(const OperatorContext& ctx, const ScalarField& u, const Point& pt);
double grushin_operator_from_jet(const OperatorContext& ctx, const Jet2& ju, const Point& pt);

/// Euler-Lagrange operator of the p-energy in divergence form,
///   div_z(W^{(p-2)/2} Phi grad Phi(grad_z u))
///   + div_sigma(W^{(p-2)/2} (Phi^0(z)^{2a}/4) Psi grad Psi(grad_sigma u)),
/// expanded with the product rule (needs only D^2 u and norm derivatives).
/// Reduces exactly to grushin_operator at p = 2.
double grushin_operator_p(const OperatorContext& ctx, const ScalarField& u, const Point& pt);
double grushin_operator_p_from_jet(const OperatorContext& ctx, const Jet2& ju, const Point& pt);

}  // namespace grushin
