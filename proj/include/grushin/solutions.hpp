#pragma once

#include "grushin/gauge.hpp"
#include "grushin/operators.hpp"
#include "grushin/report.hpp"

#include <vector>

namespace grushin {

/// Data for the explicit solutions of the critical equation (alpha = 1,
/// p = 2): the profile K(z,sigma) = (eps^2 + Phi^0(z)^2)^2 + 16 Psi^0(sigma+sigma0)^2,
/// rho = K^{1/4}, and the entire solution built on them.
struct YamabeSolutionSpec {
  GaugePair gauge;
  double epsilon = 1.0;
  Vec sigma0;

  YamabeSolutionSpec(GaugePair g, double eps, Vec s0)
      : gauge(std::move(g)), epsilon(eps), sigma0(std::move(s0)) {
    const GrushinParams& p = gauge.params();
    if (p.alpha != 1.0 || p.p != 2.0)
      throw ConfigError("YamabeSolutionSpec: requires alpha = 1 and p = 2");
    if (!(epsilon > 0.0)) throw ConfigError("YamabeSolutionSpec: epsilon must be > 0");
    if (sigma0.size() != p.k) throw DimensionMismatchError("YamabeSolutionSpec: sigma0 length != k");
    if (p.m + 2 * (p.k - 1) <= 0)
      throw ConfigError("YamabeSolutionSpec: m + 2(k-1) must be positive");
  }

  int criticalBeta() const { return gauge.params().m + 2 * (gauge.params().k - 1); }
};

/// K >= eps^4 > 0 everywhere.
double big_k(const YamabeSolutionSpec& spec, const Point& pt);
ScalarField big_k_field(const YamabeSolutionSpec& spec);

/// rho = K^{1/4}.
double rho(const YamabeSolutionSpec& spec, const Point& pt);
ScalarField rho_field(const YamabeSolutionSpec& spec);

/// K^{e/4} = rho^e for arbitrary real e (used by the intertwining identity).
ScalarField rho_power_field(const YamabeSolutionSpec& spec, double e);

/// The positive entire solution of the critical equation,
///   (m (m+2(k-1)) eps^2 / K)^{(m+2(k-1))/4}.
/// The numerator carries the factor m required for
/// L(u) + u^{(m+2(k+1))/(m+2(k-1))} = 0 to hold exactly (the intertwining
/// constant is lambda = m(m+2(k-1))eps^2, and the multiple must be lambda^{beta/4}).
double yamabe_solution(const YamabeSolutionSpec& spec, const Point& pt);
ScalarField yamabe_field(const YamabeSolutionSpec& spec);

/// Gauge powers/logs annihilated by the p-energy Euler-Lagrange operator:
/// normalization * Theta^0(pt)^{-(Q-p)/(p-1)} for p != Q, normalization * log Theta^0 at p = Q
/// (branch chosen by |p - Q| < 1e-12).
struct FundamentalSolutionSpec {
  GaugePair gauge;
  double normalization = 1.0;

  explicit FundamentalSolutionSpec(GaugePair g, double norm = 1.0)
      : gauge(std::move(g)), normalization(norm) {}

  bool logBranch() const {
    return std::abs(gauge.params().p - gauge.params().homogeneousDimension()) < 1e-12;
  }
};

double fundamental_solution(const FundamentalSolutionSpec& spec, const Point& pt);
ScalarField fundamental_field(const FundamentalSolutionSpec& spec);

/// W(K) = 16 Phi^0(z)^2 K, pointwise.
ResidualReport verify_lemma_yam3(const YamabeSolutionSpec& spec, const std::vector<Point>& samples);

/// Delta_Phi(K) = (4m+8)Phi^0(z)^2 + 4m eps^2, Delta_Psi(K) = 32k, and
/// L(K) = 4(m+2k+2)Phi^0(z)^2 + 4m eps^2.
struct LemmaYam2Reports {
  ResidualReport phi;   // Delta_Phi(K)
  ResidualReport psi;   // Delta_Psi(K)
  ResidualReport full;  // L(K)
};
LemmaYam2Reports verify_lemma_yam2(const YamabeSolutionSpec& spec, const std::vector<Point>& samples);

/// 4 L(K) = (m+2k+2) W(K)/K + A with A = 16 m eps^2; also recovers A by
/// least squares over the samples.
struct MagicReport {
  ResidualReport pointwise;
  double a_expected = 0.0;
  double a_least_squares = 0.0;
};
MagicReport verify_magic(const YamabeSolutionSpec& spec, const std::vector<Point>& samples);

/// L(rho^{-(m+2k-2)}) = -m(m+2(k-1)) eps^2 rho^{-(m+2k+2)}, plus the
/// constant-consistency and ODE kill-term checks.
struct IntertwiningReport {
  ResidualReport pointwise;
  double lambda_deviation = 0.0;  // |m(m+2(k-1))eps^2 - A(m+2k-2)/16| / lambda
  double max_ode_residual = 0.0;  // F'' + (m+2k-1)/t F' at sampled rho values
};
IntertwiningReport verify_intertwining(const YamabeSolutionSpec& spec,
                                       const std::vector<Point>& samples);

/// Residual of the critical equation L(u) + u^{(m+2(k+1))/(m+2(k-1))} = 0 for
/// the entire solution, with u-derivatives from jets or (oracle path) finite
/// differences.
ResidualReport verify_yamabe_residual(const YamabeSolutionSpec& spec,
                                      const std::vector<Point>& samples,
                                      bool finite_difference_path = false);

/// Residual of L_p(G) = 0 for the fundamental solution away from the pole,
/// normalized by the natural scale W^{(p-1)/2} / Theta^0.
ResidualReport verify_fundamental_residual(const FundamentalSolutionSpec& spec,
                                           const std::vector<Point>& samples);

}  // namespace grushin
