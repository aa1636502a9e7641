#include "grushin/solutions.hpp"

#include <cmath>

namespace grushin {

namespace {

/// Singular set of a block expression M^0(x_block + shift)^2 inside a field on
/// the product space: p-norm duals with exponent != 2 lose C^2 at the block
/// origin, and additionally on coordinate hyperplanes when the exponent < 2.
struct BlockSingularity {
  bool active = false;
  bool hyperplanes = false;
  int offset = 0;
  int len = 0;
  Vec shift;

  bool operator()(std::span<const double> x) const {
    if (!active) return false;
    bool all_zero = true;
    for (int i = 0; i < len; ++i) {
      const double v = x[static_cast<size_t>(offset + i)] + (shift.size() ? shift(i) : 0.0);
      if (v != 0.0) all_zero = false;
      else if (hyperplanes) return true;
    }
    return all_zero;
  }
};

BlockSingularity block_singularity(const NormSpec& dual, int offset, int len, const Vec& shift) {
  BlockSingularity b;
  b.offset = offset;
  b.len = len;
  b.shift = shift;
  if (dual.family() == NormFamily::PNorm && dual.exponent() != 2.0) {
    b.active = true;
    b.hyperplanes = dual.exponent() < 2.0 && len > 1;
  }
  return b;
}

SingularPredicate k_singularity(const YamabeSolutionSpec& spec) {
  const GrushinParams& p = spec.gauge.params();
  BlockSingularity bz = block_singularity(spec.gauge.phiDual(), 0, p.m, Vec());
  BlockSingularity bs = block_singularity(spec.gauge.psiDual(), p.m, p.k, spec.sigma0);
  if (!bz.active && !bs.active) return {};
  return [bz, bs](std::span<const double> x) { return bz(x) || bs(x); };
}

OperatorContext context_of(const GaugePair& g) { return OperatorContext(g); }

}  // namespace

ScalarField big_k_field(const YamabeSolutionSpec& spec) {
  const GrushinParams& par = spec.gauge.params();
  const NormSpec phi0 = spec.gauge.phiDual();
  const NormSpec psi0 = spec.gauge.psiDual();
  const double eps2 = spec.epsilon * spec.epsilon;
  const Vec sigma0 = spec.sigma0;
  const int m = par.m;
  const int k = par.k;
  return ScalarField::make(
      m + k,
      [phi0, psi0, eps2, sigma0, m, k](auto x) {
        using T = std::remove_cvref_t<decltype(x[0])>;
        std::vector<T> shifted;
        shifted.reserve(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) shifted.push_back(x[static_cast<size_t>(m + i)] + sigma0(i));
        T phisq = norm_squared_t(phi0, x.subspan(0, static_cast<size_t>(m)));
        T psisq = norm_squared_t(psi0, std::span<const T>(shifted.data(), shifted.size()));
        return sq(eps2 + phisq) + 16.0 * psisq;
      },
      k_singularity(spec));
}

double big_k(const YamabeSolutionSpec& spec, const Point& pt) {
  ScalarField f = big_k_field(spec);
  Vec x = pt.flatten();
  return f.value({x.data(), static_cast<size_t>(x.size())});
}

ScalarField rho_field(const YamabeSolutionSpec& spec) { return rho_power_field(spec, 1.0); }

double rho(const YamabeSolutionSpec& spec, const Point& pt) {
  return std::pow(big_k(spec, pt), 0.25);
}

ScalarField rho_power_field(const YamabeSolutionSpec& spec, double e) {
  ScalarField k = big_k_field(spec);
  return ScalarField::make(
      k.dimension(),
      [k, e](auto x) {
        using T = std::remove_cvref_t<decltype(x[0])>;
        return pow(eval_field<T>(k, x), 0.25 * e);
      },
      k_singularity(spec));
}

ScalarField yamabe_field(const YamabeSolutionSpec& spec) {
  const GrushinParams& par = spec.gauge.params();
  const double beta = spec.criticalBeta();
  // the multiple lambda^{beta/4} with lambda = m beta eps^2 makes the critical
  // equation exact
  const double numerator = par.m * beta * spec.epsilon * spec.epsilon;
  ScalarField k = big_k_field(spec);
  return ScalarField::make(
      k.dimension(),
      [k, numerator, beta](auto x) {
        using T = std::remove_cvref_t<decltype(x[0])>;
        return pow(numerator / eval_field<T>(k, x), 0.25 * beta);
      },
      k_singularity(spec));
}

double yamabe_solution(const YamabeSolutionSpec& spec, const Point& pt) {
  ScalarField f = yamabe_field(spec);
  Vec x = pt.flatten();
  return f.value({x.data(), static_cast<size_t>(x.size())});
}

ScalarField fundamental_field(const FundamentalSolutionSpec& spec) {
  const GrushinParams& par = spec.gauge.params();
  const GaugePair gauge = spec.gauge;
  const double a = par.alpha;
  const double q = par.homogeneousDimension();
  const double p = par.p;
  const double norm = spec.normalization;
  const bool log_branch = spec.logBranch();
  const int m = par.m;
  const int k = par.k;

  BlockSingularity bz = block_singularity(gauge.phiDual(), 0, m, Vec());
  BlockSingularity bs = block_singularity(gauge.psiDual(), m, k, Vec());
  const bool z_origin_singular = std::round(a + 1.0) != a + 1.0;
  SingularPredicate sing = [bz, bs, z_origin_singular, m](std::span<const double> x) {
    bool origin = true;
    for (double v : x) origin = origin && v == 0.0;
    if (origin) return true;  // pole
    if (z_origin_singular) {
      bool z_zero = true;
      for (int i = 0; i < m; ++i) z_zero = z_zero && x[static_cast<size_t>(i)] == 0.0;
      if (z_zero) return true;
    }
    return bz(x) || bs(x);
  };

  return ScalarField::make(
      m + k,
      [gauge, a, q, p, norm, log_branch, m](auto x) {
        using T = std::remove_cvref_t<decltype(x[0])>;
        const double c = 4.0 * (a + 1.0) * (a + 1.0);
        T phisq = norm_squared_t(gauge.phiDual(), x.subspan(0, static_cast<size_t>(m)));
        T psisq = norm_squared_t(gauge.psiDual(), x.subspan(static_cast<size_t>(m)));
        T d = pow(phisq, a + 1.0) + c * psisq;  // Theta^0 ^ {2(a+1)}
        if (log_branch) return norm / (2.0 * (a + 1.0)) * log(d);
        const double expnt = -(q - p) / (p - 1.0) / (2.0 * (a + 1.0));
        return norm * pow(d, expnt);
      },
      std::move(sing));
}

double fundamental_solution(const FundamentalSolutionSpec& spec, const Point& pt) {
  if (pt.z.isZero(0.0) && pt.sigma.isZero(0.0))
    throw PolePointError("fundamental_solution: evaluation at the pole");
  ScalarField f = fundamental_field(spec);
  Vec x = pt.flatten();
  return f.value({x.data(), static_cast<size_t>(x.size())});
}

namespace {

template <class Fn>
void sweep(ResidualReport& rep, const std::vector<Point>& samples, Fn&& per_point) {
  for (const Point& pt : samples) {
    try {
      per_point(pt);
    } catch (const SingularPointError&) {
      ++rep.excluded_count;
    } catch (const DegenerateGradientError&) {
      ++rep.excluded_count;
    }
  }
}

}  // namespace

ResidualReport verify_lemma_yam3(const YamabeSolutionSpec& spec, const std::vector<Point>& samples) {
  ResidualReport rep;
  rep.suite = "lemma_yam3";
  OperatorContext ctx = context_of(spec.gauge);
  ScalarField k = big_k_field(spec);
  sweep(rep, samples, [&](const Point& pt) {
    const double w = grushin_gradient_square(ctx, k, pt);
    const double phi0 = norm_eval(spec.gauge.phiDual(), pt.z);
    const double rhs = 16.0 * phi0 * phi0 * big_k(spec, pt);
    rep.add(pt.flatten(), w, rhs);
  });
  return rep;
}

LemmaYam2Reports verify_lemma_yam2(const YamabeSolutionSpec& spec,
                                   const std::vector<Point>& samples) {
  LemmaYam2Reports out;
  out.phi.suite = "lemma_yam2_phi";
  out.psi.suite = "lemma_yam2_psi";
  out.full.suite = "lemma_yam2_full";
  const GrushinParams& par = spec.gauge.params();
  OperatorContext ctx = context_of(spec.gauge);
  ScalarField k = big_k_field(spec);
  const double eps2 = spec.epsilon * spec.epsilon;
  for (const Point& pt : samples) {
    try {
      Jet2 ju = jet2_eval(k, pt.flatten());
      GrushinEval ev = grushin_eval_from_jet(ctx, ju, pt);
      const double phi0sq = 4.0 * ev.weight;  // alpha = 1: weight = Phi^0(z)^2/4
      out.phi.add(pt.flatten(), ev.delta_phi, (4.0 * par.m + 8.0) * phi0sq + 4.0 * par.m * eps2);
      out.psi.add(pt.flatten(), ev.delta_psi, 32.0 * par.k);
      out.full.add(pt.flatten(), ev.operator_value,
                   4.0 * (par.m + 2.0 * par.k + 2.0) * phi0sq + 4.0 * par.m * eps2);
    } catch (const SingularPointError&) {
      ++out.phi.excluded_count;
      ++out.psi.excluded_count;
      ++out.full.excluded_count;
    } catch (const DegenerateGradientError&) {
      ++out.phi.excluded_count;
      ++out.psi.excluded_count;
      ++out.full.excluded_count;
    }
  }
  return out;
}

MagicReport verify_magic(const YamabeSolutionSpec& spec, const std::vector<Point>& samples) {
  MagicReport out;
  out.pointwise.suite = "magic";
  const GrushinParams& par = spec.gauge.params();
  OperatorContext ctx = context_of(spec.gauge);
  ScalarField k = big_k_field(spec);
  out.a_expected = 16.0 * par.m * spec.epsilon * spec.epsilon;
  double a_sum = 0.0;
  long a_n = 0;
  sweep(out.pointwise, samples, [&](const Point& pt) {
    Jet2 ju = jet2_eval(k, pt.flatten());
    GrushinEval ev = grushin_eval_from_jet(ctx, ju, pt);
    const double kv = ju.val;
    const double lhs = 4.0 * ev.operator_value;
    const double main = (par.m + 2.0 * par.k + 2.0) * ev.gradient_square / kv;
    const double rhs = main + out.a_expected;
    out.pointwise.add(pt.flatten(), lhs, rhs, out.a_expected + std::abs(lhs));
    a_sum += lhs - main;
    ++a_n;
  });
  out.a_least_squares = a_n > 0 ? a_sum / static_cast<double>(a_n) : 0.0;
  return out;
}

IntertwiningReport verify_intertwining(const YamabeSolutionSpec& spec,
                                       const std::vector<Point>& samples) {
  IntertwiningReport out;
  out.pointwise.suite = "intertwining";
  const GrushinParams& par = spec.gauge.params();
  OperatorContext ctx = context_of(spec.gauge);
  const double beta = spec.criticalBeta();
  const double eps2 = spec.epsilon * spec.epsilon;
  const double lambda = par.m * beta * eps2;
  ScalarField u = rho_power_field(spec, -beta);

  const double a_const = 16.0 * par.m * eps2;
  out.lambda_deviation = std::abs(lambda - a_const * (par.m + 2.0 * par.k - 2.0) / 16.0) / lambda;

  sweep(out.pointwise, samples, [&](const Point& pt) {
    const double lhs = grushin_operator(ctx, u, pt);
    const double rv = rho(spec, pt);
    const double rhs = -lambda * std::pow(rv, -(beta + 4.0));
    out.pointwise.add(pt.flatten(), lhs, rhs);
    // ODE kill term: F(t) = t^{-beta} solves F'' + (m+2k-1)/t F' = 0.
    const double f1 = -beta * std::pow(rv, -beta - 1.0);
    const double f2 = beta * (beta + 1.0) * std::pow(rv, -beta - 2.0);
    const double ode = std::abs(f2 + (par.m + 2.0 * par.k - 1.0) / rv * f1) / std::abs(f2);
    out.max_ode_residual = std::max(out.max_ode_residual, ode);
  });
  return out;
}

ResidualReport verify_yamabe_residual(const YamabeSolutionSpec& spec,
                                      const std::vector<Point>& samples,
                                      bool finite_difference_path) {
  ResidualReport rep;
  rep.suite = finite_difference_path ? "yamabe_residual_fd" : "yamabe_residual";
  const GrushinParams& par = spec.gauge.params();
  OperatorContext ctx = context_of(spec.gauge);
  ScalarField u = yamabe_field(spec);
  const double exponent = (par.m + 2.0 * (par.k + 1.0)) / (par.m + 2.0 * (par.k - 1.0));
  sweep(rep, samples, [&](const Point& pt) {
    Vec x = pt.flatten();
    Jet2 ju = finite_difference_path ? fd_jet2(u, x) : jet2_eval(u, x);
    const double lhs = grushin_operator_from_jet(ctx, ju, pt);
    const double uval = u.value({x.data(), static_cast<size_t>(x.size())});
    const double rhs = -std::pow(uval, exponent);
    rep.add(x, lhs, rhs);
  });
  return rep;
}

ResidualReport verify_fundamental_residual(const FundamentalSolutionSpec& spec,
                                           const std::vector<Point>& samples) {
  ResidualReport rep;
  rep.suite = "fundamental";
  const GrushinParams& par = spec.gauge.params();
  OperatorContext ctx = context_of(spec.gauge);
  ScalarField g = fundamental_field(spec);
  sweep(rep, samples, [&](const Point& pt) {
    const double lhs = grushin_operator_p(ctx, g, pt);
    const double w = grushin_gradient_square(ctx, g, pt);
    const double th = theta_dual_closed(spec.gauge, pt);
    const double scale = std::pow(w, 0.5 * (par.p - 1.0)) / th;
    rep.add(pt.flatten(), lhs, 0.0, std::max(scale, 1e-300));
  });
  return rep;
}

}  // namespace grushin
