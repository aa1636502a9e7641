#pragma once

#include "grushin/norms.hpp"
#include "grushin/types.hpp"

#include <cmath>

namespace grushin {

/// Structural parameters (m, k, alpha, p) with the derived homogeneous
/// dimension Q = m + (alpha+1)k.
struct GrushinParams {
  int m = 0;
  int k = 0;
  double alpha = 1.0;
  double p = 2.0;

  GrushinParams() = default;
  GrushinParams(int m_, int k_, double alpha_, double p_) : m(m_), k(k_), alpha(alpha_), p(p_) {
    if (m < 1 || k < 1) throw ConfigError("GrushinParams: m and k must be positive");
    if (!(alpha > 0.0)) throw ConfigError("GrushinParams: alpha must be > 0");
    if (!(p > 1.0) || !std::isfinite(p)) throw ConfigError("GrushinParams: p must lie in (1, inf)");
    if (alpha == 1.0 && p == 2.0 && m + 2 * (k - 1) <= 0)
      throw ConfigError("GrushinParams: m + 2(k-1) must be positive for the critical case");
  }

  double homogeneousDimension() const { return m + (alpha + 1.0) * k; }
  int totalDim() const { return m + k; }
};

/// The norm pair (Phi on R^m, Psi on R^k) together with the parameters; the
/// closed-form duals are precomputed at construction.
class GaugePair {
 public:
  GaugePair(NormSpec phi, NormSpec psi, GrushinParams params)
      : phi_(std::move(phi)), psi_(std::move(psi)), params_(params) {
    if (phi_.dimension() != params_.m || psi_.dimension() != params_.k)
      throw DimensionMismatchError("GaugePair: norm dimensions must match (m, k)");
    phi0_ = dual_norm_closed(phi_);
    psi0_ = dual_norm_closed(psi_);
  }

  const NormSpec& phi() const { return phi_; }
  const NormSpec& psi() const { return psi_; }
  const NormSpec& phiDual() const { return phi0_; }
  const NormSpec& psiDual() const { return psi0_; }
  const GrushinParams& params() const { return params_; }

 private:
  NormSpec phi_, psi_;
  GrushinParams params_;
  NormSpec phi0_, psi0_;
};

/// delta_t(z, sigma) = (t z, t^{alpha+1} sigma), t > 0.
Point dilate(const GrushinParams& params, double t, const Point& pt);

/// Theta(z,sigma) = (Phi(z)^{2(a+1)} + 4(a+1)^2 Psi(sigma)^2)^{1/(2(a+1))}.
double theta(const GaugePair& g, const Point& pt);

/// Same shape built from the dual norms; for the Euclidean pair this is the
/// classical gauge R_alpha carrying the fundamental solutions.
double theta_dual_closed(const GaugePair& g, const Point& pt);

/// Theta^0 via its variational definition
///   Theta^0(z,s)^{a+1} = sup_{Theta(xi,tau)=1} (|<z,xi>|^{a+1} + 4(a+1)^2 <s,tau>),
/// maximized by dilation-normalized ascent on the homogeneous quotient with
/// multiple starts (both signs of the tau component).
double theta_dual_oracle(const GaugePair& g, const Point& pt, const DualSolverConfig& cfg = {});

/// Generic evaluation of Theta and Theta^0 for field composition.
template <class T>
T theta_t(const GaugePair& g, std::span<const T> z, std::span<const T> sigma) {
  const double a = g.params().alpha;
  const double c = 4.0 * (a + 1.0) * (a + 1.0);
  T phisq = norm_squared_t(g.phi(), z);
  T psisq = norm_squared_t(g.psi(), sigma);
  return pow(pow(phisq, a + 1.0) + c * psisq, 1.0 / (2.0 * (a + 1.0)));
}

template <class T>
T theta_dual_closed_t(const GaugePair& g, std::span<const T> z, std::span<const T> sigma) {
  const double a = g.params().alpha;
  const double c = 4.0 * (a + 1.0) * (a + 1.0);
  T phisq = norm_squared_t(g.phiDual(), z);
  T psisq = norm_squared_t(g.psiDual(), sigma);
  return pow(pow(phisq, a + 1.0) + c * psisq, 1.0 / (2.0 * (a + 1.0)));
}

}  // namespace grushin
