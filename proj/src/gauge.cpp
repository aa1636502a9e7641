#include "grushin/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace grushin {

Point dilate(const GrushinParams& params, double t, const Point& pt) {
  if (!(t > 0.0)) throw ConfigError("dilate: t must be > 0");
  if (pt.z.size() != params.m || pt.sigma.size() != params.k)
    throw DimensionMismatchError("dilate: point does not match (m, k)");
  Point out;
  out.z = t * pt.z;
  out.sigma = std::pow(t, params.alpha + 1.0) * pt.sigma;
  return out;
}

namespace {

void checkPoint(const GaugePair& g, const Point& pt, const char* who) {
  if (pt.z.size() != g.params().m || pt.sigma.size() != g.params().k)
    throw DimensionMismatchError(std::string(who) + ": point does not match (m, k)");
}

std::span<const double> spanOf(const Vec& v) {
  return {v.data(), static_cast<size_t>(v.size())};
}

}  // namespace

double theta(const GaugePair& g, const Point& pt) {
  checkPoint(g, pt, "theta");
  return theta_t<double>(g, spanOf(pt.z), spanOf(pt.sigma));
}

double theta_dual_closed(const GaugePair& g, const Point& pt) {
  checkPoint(g, pt, "theta_dual_closed");
  return theta_dual_closed_t<double>(g, spanOf(pt.z), spanOf(pt.sigma));
}

namespace {

struct OracleObjective {
  const GaugePair& g;
  const Point& pt;
  double a;   // alpha
  double c;   // 4(alpha+1)^2

  // J = |<z,xi>|^{a+1} + c <sigma,tau>
  double numerator(const Vec& xi, const Vec& tau) const {
    return std::pow(std::abs(pt.z.dot(xi)), a + 1.0) + c * pt.sigma.dot(tau);
  }

  // D = Phi(xi)^{2(a+1)} + c Psi(tau)^2  (= Theta^{2(a+1)})
  double denominator(const Vec& xi, const Vec& tau) const {
    const double phi = norm_eval(g.phi(), xi);
    const double psi = norm_eval(g.psi(), tau);
    return std::pow(phi, 2.0 * (a + 1.0)) + c * psi * psi;
  }

  double value(const Vec& xi, const Vec& tau) const {
    return numerator(xi, tau) / std::sqrt(denominator(xi, tau));
  }

  void gradient(const Vec& xi, const Vec& tau, Vec& gxi, Vec& gtau) const {
    const double u = pt.z.dot(xi);
    const double j = numerator(xi, tau);
    const double d = denominator(xi, tau);
    const double sd = std::sqrt(d);
    Vec jxi = (a + 1.0) * std::pow(std::abs(u), a) * (u >= 0.0 ? 1.0 : -1.0) * pt.z;
    Vec jtau = c * pt.sigma;
    Vec dxi = Vec::Zero(xi.size());
    if (!xi.isZero(0.0)) {
      Jet2 jphi = norm_jet(g.phi(), xi);
      dxi = 2.0 * (a + 1.0) * std::pow(jphi.val, 2.0 * a + 1.0) * jphi.grad;
    }
    Vec dtau = Vec::Zero(tau.size());
    if (!tau.isZero(0.0)) {
      Jet2 jpsi = norm_jet(g.psi(), tau);
      dtau = 2.0 * c * jpsi.val * jpsi.grad;
    }
    const double fac = 0.5 * j / (d * sd);
    gxi = jxi / sd - fac * dxi;
    gtau = jtau / sd - fac * dtau;
  }

  // Dilation-normalize so that Theta(xi, tau) = 1.
  void normalize(Vec& xi, Vec& tau) const {
    const double th = std::pow(denominator(xi, tau), 1.0 / (2.0 * (a + 1.0)));
    if (!(th > 0.0)) throw SingularPointError("theta_dual_oracle: zero iterate");
    xi /= th;
    tau /= std::pow(th, a + 1.0);
  }

  // Newton refinement of the KKT system for max J s.t. D = 1:
  //   grad J - lambda grad D = 0,  D - 1 = 0.
  // Fails (returns false) near the block degeneracies where the Hessians of
  // the norm powers stop existing; callers then keep the ascent iterate.
  bool newtonRefine(Vec& xi, Vec& tau, double tol, int max_iter) const {
    const int m = static_cast<int>(xi.size());
    const int k = static_cast<int>(tau.size());
    const double c4 = c;
    double lambda = 0.0;
    bool lambda_set = false;
    for (int it = 0; it < max_iter; ++it) {
      const double u = pt.z.dot(xi);
      if (xi.isZero(0.0) || tau.isZero(0.0)) return false;
      if (a < 1.0 && u == 0.0) return false;
      Jet2 jphi = norm_jet(g.phi(), xi);
      Jet2 jpsi = norm_jet(g.psi(), tau);

      Vec jx = (a + 1.0) * std::pow(std::abs(u), a) * (u >= 0.0 ? 1.0 : -1.0) * pt.z;
      Vec jt = c4 * pt.sigma;
      Vec dx = 2.0 * (a + 1.0) * std::pow(jphi.val, 2.0 * a + 1.0) * jphi.grad;
      Vec dt = 2.0 * c4 * jpsi.val * jpsi.grad;

      Eigen::VectorXd grad_j(m + k), grad_d(m + k);
      grad_j << jx, jt;
      grad_d << dx, dt;
      if (!lambda_set) {
        lambda = grad_j.dot(grad_d) / grad_d.squaredNorm();
        lambda_set = true;
      }

      Eigen::MatrixXd hess_j = Eigen::MatrixXd::Zero(m + k, m + k);
      hess_j.topLeftCorner(m, m) =
          (a + 1.0) * a * std::pow(std::abs(u), a - 1.0) * (pt.z * pt.z.transpose());
      Eigen::MatrixXd hess_d = Eigen::MatrixXd::Zero(m + k, m + k);
      hess_d.topLeftCorner(m, m) =
          2.0 * (a + 1.0) *
          ((2.0 * a + 1.0) * std::pow(jphi.val, 2.0 * a) * (jphi.grad * jphi.grad.transpose()) +
           std::pow(jphi.val, 2.0 * a + 1.0) * jphi.hess);
      hess_d.bottomRightCorner(k, k) =
          2.0 * c4 * (jpsi.grad * jpsi.grad.transpose() + jpsi.val * jpsi.hess);

      Eigen::VectorXd f1 = grad_j - lambda * grad_d;
      const double f2 = denominator(xi, tau) - 1.0;
      const double res = std::max(f1.cwiseAbs().maxCoeff(), std::abs(f2));
      if (res <= tol) return true;

      Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m + k + 1, m + k + 1);
      jac.topLeftCorner(m + k, m + k) = hess_j - lambda * hess_d;
      jac.topRightCorner(m + k, 1) = -grad_d;
      jac.bottomLeftCorner(1, m + k) = grad_d.transpose();
      Eigen::VectorXd rhs(m + k + 1);
      rhs.head(m + k) = -f1;
      rhs(m + k) = -f2;
      Eigen::VectorXd d = jac.fullPivLu().solve(rhs);
      if (!d.allFinite()) return false;
      xi += d.head(m);
      tau += d.segment(m, k);
      lambda += d(m + k);
    }
    return false;
  }
};

}  // namespace

double theta_dual_oracle(const GaugePair& g, const Point& pt, const DualSolverConfig& cfg) {
  checkPoint(g, pt, "theta_dual_oracle");
  if (pt.z.isZero(0.0) && pt.sigma.isZero(0.0))
    throw SingularPointError("theta_dual_oracle: point is the origin");
  if (cfg.tolerance <= 0.0 || cfg.max_iterations < 1)
    throw ConfigError("theta_dual_oracle: invalid solver config");

  const int m = g.params().m;
  const int k = g.params().k;
  const double a = g.params().alpha;
  OracleObjective obj{g, pt, a, 4.0 * (a + 1.0) * (a + 1.0)};

  // Directional starts: dual gradients point at the closed-form maximizer;
  // sign flips cover the basins of the signed <sigma,tau> term.
  Vec xi_dir = Vec::Zero(m);
  if (!pt.z.isZero(0.0)) xi_dir = norm_jet(g.phiDual(), pt.z).grad;
  Vec tau_dir = Vec::Zero(k);
  if (!pt.sigma.isZero(0.0)) tau_dir = norm_jet(g.psiDual(), pt.sigma).grad;

  std::vector<std::pair<Vec, Vec>> starts;
  for (double sx : {1.0, -1.0})
    for (double st : {1.0, -1.0}) {
      Vec xi = sx * xi_dir + Vec::Constant(m, 0.05 * sx);
      Vec tau = st * tau_dir + Vec::Constant(k, 0.05 * st);
      starts.emplace_back(xi, tau);
    }
  starts.emplace_back(Vec::Constant(m, 1.0), Vec::Constant(k, 1.0));
  if (!pt.z.isZero(0.0) || !pt.sigma.isZero(0.0)) starts.emplace_back(pt.z, pt.sigma);

  double best = -std::numeric_limits<double>::infinity();
  bool any_converged = false;
  for (auto& [xi, tau] : starts) {
    if (xi.isZero(0.0) && tau.isZero(0.0)) continue;
    try {
      obj.normalize(xi, tau);
    } catch (const SingularPointError&) {
      continue;
    }
    double val = obj.value(xi, tau);
    int flat = 0;
    bool settled = false;
    for (int it = 0; it < cfg.max_iterations && !settled; ++it) {
      Vec gxi(m), gtau(k);
      obj.gradient(xi, tau, gxi, gtau);
      // backtracking line search along the (normalized) ascent direction
      double step = 1.0;
      bool accepted = false;
      for (int bt = 0; bt < 60; ++bt) {
        Vec nxi = xi + step * gxi;
        Vec ntau = tau + step * gtau;
        if (!(nxi.isZero(0.0) && ntau.isZero(0.0))) {
          obj.normalize(nxi, ntau);
          const double nval = obj.value(nxi, ntau);
          if (nval > val) {
            flat = (nval - val <= cfg.tolerance * std::max(1.0, std::abs(val))) ? flat + 1 : 0;
            xi = nxi;
            tau = ntau;
            val = nval;
            accepted = true;
            break;
          }
        }
        step *= 0.5;
      }
      if (!accepted) flat = 5;  // no ascent at any step size: stationary
      if (flat >= 5) settled = true;

      // once the ascent has located the basin, polish with the KKT Newton;
      // steepest ascent alone zigzags on the anisotropic ridge
      if (settled || (it > 0 && it % 25 == 0)) {
        Vec rxi = xi, rtau = tau;
        try {
          if (obj.newtonRefine(rxi, rtau, cfg.tolerance, 30)) {
            obj.normalize(rxi, rtau);
            const double rval = obj.value(rxi, rtau);
            if (rval >= val) {
              xi = rxi;
              tau = rtau;
              val = rval;
            }
            settled = true;
          }
        } catch (const SingularPointError&) {
          // refinement stepped onto a singular set; keep the ascent iterate
        }
      }
    }
    if (settled) any_converged = true;
    best = std::max(best, val);
  }
  if (!any_converged)
    throw NoConvergenceError("theta_dual_oracle: no start converged within max_iterations");
  if (!(best > 0.0)) throw NoConvergenceError("theta_dual_oracle: nonpositive supremum");
  return std::pow(best, 1.0 / (a + 1.0));
}

}  // namespace grushin
