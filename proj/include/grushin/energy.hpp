#pragma once

#include "grushin/operators.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace grushin {

enum class QuadScheme { TensorMidpoint, TensorGaussLegendre };

struct QuadratureSpec {
  double box_half_width = 8.0;
  int points_per_axis = 48;
  QuadScheme scheme = QuadScheme::TensorGaussLegendre;
  double budget = 1e7;  // max total grid points

  void validate(int dim) const {
    if (!(box_half_width > 0.0)) throw ConfigError("QuadratureSpec: box_half_width must be > 0");
    if (points_per_axis < 8) throw ConfigError("QuadratureSpec: points_per_axis must be >= 8");
    if (dim > 5) throw ConfigError("QuadratureSpec: tensor quadrature capped at 5 dimensions");
    if (std::pow(static_cast<double>(points_per_axis), dim) > budget)
      throw BudgetExceededError("QuadratureSpec: grid exceeds the point budget");
  }
};

/// Axis-aligned box centered at the origin (per-axis half widths, so that
/// anisotropically dilated boxes are representable).
struct Box {
  Vec half_widths;
  static Box cube(double half_width, int dim) {
    Box b;
    b.half_widths = Vec::Constant(dim, half_width);
    return b;
  }
};

/// Gauss-Legendre nodes/weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

struct IntegralResult {
  double value = 0.0;
  long excluded_count = 0;
  long total_points = 0;
};

/// Tensor-product quadrature of fn over the box; singular points contribute 0
/// and are counted.
IntegralResult integrate_on_box(const Box& box, const QuadratureSpec& q,
                                const std::function<double(const Vec&)>& fn);

/// (1/p) integral of W(u)^{p/2} over the box of the spec.
IntegralResult energy(const OperatorContext& ctx, const ScalarField& u, const QuadratureSpec& q);
IntegralResult energy_on_box(const OperatorContext& ctx, const ScalarField& u, const Box& box,
                             const QuadratureSpec& q);

/// (integral of |u|^q_exp)^{1/q_exp} over the box.
IntegralResult lq_norm(const ScalarField& u, double q_exp, const QuadratureSpec& q);
IntegralResult lq_norm_on_box(const ScalarField& u, double q_exp, const Box& box,
                              const QuadratureSpec& q);

/// Critical exponent q with 1/p - 1/q = 1/Q.
double critical_q(const GrushinParams& params);

/// ||u||_q / (p * energy)^{1/p} at the critical exponent; dilation-invariant.
double sobolev_quotient(const OperatorContext& ctx, const ScalarField& u, const QuadratureSpec& q);

/// Quotient of u o delta_t re-quadratured on the dilated box delta_{1/t}(box);
/// equals sobolev_quotient(u) up to quadrature error at the critical exponent.
double sobolev_quotient_dilated(const OperatorContext& ctx, const ScalarField& u,
                                const QuadratureSpec& q, double t);

}  // namespace grushin
