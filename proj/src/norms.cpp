#include "grushin/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace grushin {

NormSpec NormSpec::euclidean(int dim) {
  if (dim < 1) throw DimensionMismatchError("NormSpec: dimension must be positive");
  NormSpec s;
  s.family_ = NormFamily::Euclidean;
  s.dim_ = dim;
  return s;
}

NormSpec NormSpec::pnorm(int dim, double exponent) {
  if (dim < 1) throw DimensionMismatchError("NormSpec: dimension must be positive");
  if (!(exponent > 1.0)) throw ConfigError("NormSpec: p-norm exponent must be > 1");
  NormSpec s;
  s.family_ = NormFamily::PNorm;
  s.dim_ = dim;
  s.exponent_ = exponent;
  return s;
}

NormSpec NormSpec::ellipsoid(const Mat& a) {
  if (a.rows() < 1 || a.rows() != a.cols())
    throw DimensionMismatchError("NormSpec: ellipsoid matrix must be square");
  const double scale = a.cwiseAbs().maxCoeff();
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ConfigError("NormSpec: ellipsoid matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
    throw ConfigError("NormSpec: ellipsoid matrix is not positive definite");
  NormSpec s;
  s.family_ = NormFamily::Ellipsoid;
  s.dim_ = static_cast<int>(a.rows());
  s.a_ = 0.5 * (a + a.transpose());
  return s;
}

std::string NormSpec::describe() const {
  std::ostringstream os;
  switch (family_) {
    case NormFamily::Euclidean: os << "euclidean(" << dim_ << ")"; break;
    case NormFamily::PNorm: os << "pnorm(" << dim_ << ",p=" << exponent_ << ")"; break;
    case NormFamily::Ellipsoid: os << "ellipsoid(" << dim_ << ")"; break;
  }
  return os.str();
}

double norm_eval(const NormSpec& m, const Vec& x) {
  if (x.size() != m.dimension()) throw DimensionMismatchError("norm_eval: dimension mismatch");
  switch (m.family()) {
    case NormFamily::Euclidean:
      return x.norm();
    case NormFamily::PNorm: {
      const double p = m.exponent();
      if (x.size() == 1) return std::abs(x(0));
      double s = 0.0;
      for (int i = 0; i < x.size(); ++i) s += std::pow(std::abs(x(i)), p);
      return std::pow(s, 1.0 / p);
    }
    case NormFamily::Ellipsoid:
      return std::sqrt(x.dot(m.matrix() * x));
  }
  throw std::logic_error("norm_eval: unknown family");
}

Jet2 norm_jet(const NormSpec& m, const Vec& x) {
  const int n = m.dimension();
  if (x.size() != n) throw DimensionMismatchError("norm_jet: dimension mismatch");
  if (x.isZero(0.0)) throw SingularPointError("norm_jet: norm is not differentiable at 0");

  Jet2 j(0.0, n);
  switch (m.family()) {
    case NormFamily::Euclidean: {
      const double v = x.norm();
      j.val = v;
      j.grad = x / v;
      j.hess = (Mat::Identity(n, n) - j.grad * j.grad.transpose()) / v;
      return j;
    }
    case NormFamily::Ellipsoid: {
      const Mat& a = m.matrix();
      const Vec ax = a * x;
      const double v = std::sqrt(x.dot(ax));
      j.val = v;
      j.grad = ax / v;
      j.hess = a / v - ax * ax.transpose() / (v * v * v);
      return j;
    }
    case NormFamily::PNorm: {
      const double p = m.exponent();
      if (n == 1) {
        j.val = std::abs(x(0));
        j.grad(0) = x(0) > 0.0 ? 1.0 : -1.0;
        j.hess(0, 0) = 0.0;  // |x| is linear on each half-line
        return j;
      }
      if (p == 2.0) {
        const double v = x.norm();
        j.val = v;
        j.grad = x / v;
        j.hess = (Mat::Identity(n, n) - j.grad * j.grad.transpose()) / v;
        return j;
      }
      if (m.hyperplaneSingular()) {
        for (int i = 0; i < n; ++i)
          if (x(i) == 0.0)
            throw SingularPointError("norm_jet: p-norm with p<2 on a coordinate hyperplane");
      }
      double s = 0.0;
      Vec ap1(n);  // sign(x_i)|x_i|^{p-1}
      Vec ap2(n);  // |x_i|^{p-2}
      for (int i = 0; i < n; ++i) {
        const double a = std::abs(x(i));
        s += std::pow(a, p);
        ap1(i) = (x(i) >= 0.0 ? 1.0 : -1.0) * std::pow(a, p - 1.0);
        ap2(i) = a == 0.0 ? 0.0 : std::pow(a, p - 2.0);
      }
      const double v = std::pow(s, 1.0 / p);
      const double v1p = std::pow(v, 1.0 - p);
      j.val = v;
      j.grad = v1p * ap1;
      j.hess = (p - 1.0) * v1p *
               (ap2.asDiagonal().toDenseMatrix() - ap1 * ap1.transpose() / s);
      return j;
    }
  }
  throw std::logic_error("norm_jet: unknown family");
}

NormSpec dual_norm_closed(const NormSpec& m) {
  switch (m.family()) {
    case NormFamily::Euclidean:
      return m;
    case NormFamily::PNorm: {
      const double p = m.exponent();
      return NormSpec::pnorm(m.dimension(), p / (p - 1.0));
    }
    case NormFamily::Ellipsoid: {
      Mat inv = m.matrix().inverse();
      return NormSpec::ellipsoid(0.5 * (inv + inv.transpose()));
    }
  }
  throw std::logic_error("dual_norm_closed: unknown family");
}

EquivalenceConstants equivalence_constants(const NormSpec& m) {
  switch (m.family()) {
    case NormFamily::Euclidean:
      return {1.0, 1.0};
    case NormFamily::PNorm: {
      const double p = m.exponent();
      const double n = static_cast<double>(m.dimension());
      const double c = std::pow(n, 1.0 / p - 0.5);  // |x|_p vs |x|_2 extremal ratio
      return p >= 2.0 ? EquivalenceConstants{c, 1.0} : EquivalenceConstants{1.0, c};
    }
    case NormFamily::Ellipsoid: {
      Eigen::SelfAdjointEigenSolver<Mat> es(m.matrix());
      return {std::sqrt(es.eigenvalues().minCoeff()), std::sqrt(es.eigenvalues().maxCoeff())};
    }
  }
  throw std::logic_error("equivalence_constants: unknown family");
}

double dual_norm_numeric(const NormSpec& m, const Vec& x, const DualSolverConfig& cfg) {
  const int n = m.dimension();
  if (x.size() != n) throw DimensionMismatchError("dual_norm_numeric: dimension mismatch");
  if (x.isZero(0.0)) throw SingularPointError("dual_norm_numeric: x = 0");
  if (cfg.tolerance <= 0.0 || cfg.max_iterations < 1)
    throw ConfigError("dual_norm_numeric: invalid solver config");

  const double xinf = x.cwiseAbs().maxCoeff();

  auto quotient = [&](const Vec& eta) { return x.dot(eta) / norm_eval(m, eta); };

  // Ascent on the homogeneous quotient, iterates kept on the Euclidean sphere.
  Vec eta = x.normalized();
  double r = quotient(eta);
  double step = 1.0;
  int used = 0;
  bool plateau = false;
  for (; used < cfg.max_iterations; ++used) {
    Jet2 mj = norm_jet(m, eta);
    Vec g = x / mj.val - (x.dot(eta) / (mj.val * mj.val)) * mj.grad;
    Vec cand = (eta + step * g).normalized();
    const double rc = quotient(cand);
    if (rc > r) {
      const bool small = std::abs(rc - r) <= cfg.tolerance * std::max(1.0, std::abs(r));
      eta = cand;
      r = rc;
      step = std::min(step * 1.5, 1e3);
      if (small) {
        plateau = true;
        break;
      }
    } else {
      step *= 0.5;
      if (step < 1e-14) {
        plateau = true;
        break;
      }
    }
  }

  // Newton refinement of the stationarity system
  //   x - lambda grad M(xi) = 0,  M(xi) = 1.
  Vec xi = eta / norm_eval(m, eta);
  double lambda = x.dot(xi);
  bool converged = false;
  for (; used < cfg.max_iterations; ++used) {
    Jet2 mj = norm_jet(m, xi);
    Vec f1 = x - lambda * mj.grad;
    const double f2 = mj.val - 1.0;
    const double res = std::max(f1.cwiseAbs().maxCoeff() / (1.0 + xinf), std::abs(f2));
    if (res <= cfg.tolerance) {
      converged = true;
      break;
    }
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n + 1, n + 1);
    jac.topLeftCorner(n, n) = -lambda * mj.hess;
    jac.topRightCorner(n, 1) = -mj.grad;
    jac.bottomLeftCorner(1, n) = mj.grad.transpose();
    Eigen::VectorXd rhs(n + 1);
    rhs.head(n) = -f1;
    rhs(n) = -f2;
    Eigen::VectorXd d = jac.fullPivLu().solve(rhs);
    xi += d.head(n);
    lambda += d(n);
    if (!xi.allFinite() || !std::isfinite(lambda))
      throw NoConvergenceError("dual_norm_numeric: Newton iteration diverged");
  }
  if (!converged && !plateau)
    throw NoConvergenceError("dual_norm_numeric: no convergence within max_iterations");
  xi /= norm_eval(m, xi);  // maximizer reported on the M-unit sphere
  return x.dot(xi);
}

NormIdentityReport check_norm_identities(const NormSpec& m, const std::vector<Vec>& samples) {
  NormIdentityReport rep;
  const NormSpec m0 = dual_norm_closed(m);
  rep.min_cauchy_schwarz_slack = std::numeric_limits<double>::infinity();
  for (const Vec& x : samples) {
    const double xinf = x.cwiseAbs().maxCoeff();
    Jet2 jm = norm_jet(m, x);
    Jet2 jm0 = norm_jet(m0, x);
    // unit identities (Finsler gradient property)
    rep.max_unit_primal = std::max(rep.max_unit_primal, std::abs(norm_eval(m, jm0.grad) - 1.0));
    rep.max_unit_dual = std::max(rep.max_unit_dual, std::abs(norm_eval(m0, jm.grad) - 1.0));
    // inverse-gradient identities
    Jet2 jm_at = norm_jet(m, jm0.grad);
    Jet2 jm0_at = norm_jet(m0, jm.grad);
    const double dev_p = (jm0.val * jm_at.grad - x).cwiseAbs().maxCoeff() / (1.0 + xinf);
    const double dev_d = (jm.val * jm0_at.grad - x).cwiseAbs().maxCoeff() / (1.0 + xinf);
    rep.max_inverse_primal = std::max(rep.max_inverse_primal, dev_p);
    rep.max_inverse_dual = std::max(rep.max_inverse_dual, dev_d);
    // Euler identity <grad M(x), x> = M(x)
    rep.max_euler = std::max(rep.max_euler, std::abs(jm.grad.dot(x) - jm.val) / jm.val);
    ++rep.count;
  }
  for (size_t i = 0; i < samples.size(); ++i) {
    const Vec& a = samples[i];
    const Vec& b = samples[(i + 1) % samples.size()];
    const double slack = norm_eval(m, a) * norm_eval(m0, b) - std::abs(a.dot(b));
    rep.min_cauchy_schwarz_slack = std::min(rep.min_cauchy_schwarz_slack, slack);
  }
  return rep;
}

EllipticityBounds ellipticity_bounds(const NormSpec& m, const std::vector<Vec>& samples) {
  EllipticityBounds b;
  b.low = std::numeric_limits<double>::infinity();
  b.high = -std::numeric_limits<double>::infinity();
  for (const Vec& xi : samples) {
    const double nv = norm_eval(m, xi);
    const double ratio = nv * nv / xi.squaredNorm();
    b.low = std::min(b.low, ratio);
    b.high = std::max(b.high, ratio);
  }
  return b;
}

ScalarField norm_field(const NormSpec& m) {
  NormSpec spec = m;
  SingularPredicate sing = [spec](std::span<const double> x) {
    bool all_zero = true;
    for (double v : x) all_zero = all_zero && v == 0.0;
    if (all_zero) return true;
    if (spec.hyperplaneSingular()) {
      for (double v : x)
        if (v == 0.0) return true;
    }
    return false;
  };
  return ScalarField::make(
      m.dimension(),
      [spec](auto x) {
        using T = std::remove_cvref_t<decltype(x[0])>;
        return norm_value_t<T>(spec, x);
      },
      std::move(sing));
}

}  // namespace grushin
