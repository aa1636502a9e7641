#include "grushin/energy.hpp"

#include <cmath>
#include <numbers>
#include <atomic>
#include <mutex>
#include <thread>

namespace grushin {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  if (n < 1) throw ConfigError("gauss_legendre: n must be >= 1");
  std::vector<double> x(static_cast<size_t>(n)), w(static_cast<size_t>(n));
  // P_n(t) and P_{n-1}(t) by the three-term recurrence.
  auto legendre = [n](double t) {
    double prev = 0.0, cur = 1.0;
    for (int j = 0; j < n; ++j) {
      const double tmp = prev;
      prev = cur;
      cur = ((2.0 * j + 1.0) * t * prev - j * tmp) / (j + 1.0);
    }
    return std::pair<double, double>{cur, prev};
  };
  // Newton from the Chebyshev initial guess; roots come in symmetric pairs.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      auto [pn, pn1] = legendre(t);
      const double deriv = n * (t * pn - pn1) / (t * t - 1.0);
      const double dt = pn / deriv;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    auto [pn, pn1] = legendre(t);
    const double deriv = n * (t * pn - pn1) / (t * t - 1.0);
    x[static_cast<size_t>(i)] = -t;
    x[static_cast<size_t>(n - 1 - i)] = t;
    const double wi = 2.0 / ((1.0 - t * t) * deriv * deriv);
    w[static_cast<size_t>(i)] = wi;
    w[static_cast<size_t>(n - 1 - i)] = wi;
  }
  return {x, w};
}

namespace {

struct AxisRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

AxisRule axis_rule(double half_width, const QuadratureSpec& q) {
  AxisRule r;
  const int n = q.points_per_axis;
  r.nodes.resize(static_cast<size_t>(n));
  r.weights.resize(static_cast<size_t>(n));
  if (q.scheme == QuadScheme::TensorMidpoint) {
    const double h = 2.0 * half_width / n;
    for (int i = 0; i < n; ++i) {
      r.nodes[static_cast<size_t>(i)] = -half_width + (i + 0.5) * h;
      r.weights[static_cast<size_t>(i)] = h;
    }
  } else {
    auto [xs, ws] = gauss_legendre(n);
    for (int i = 0; i < n; ++i) {
      r.nodes[static_cast<size_t>(i)] = half_width * xs[static_cast<size_t>(i)];
      r.weights[static_cast<size_t>(i)] = half_width * ws[static_cast<size_t>(i)];
    }
  }
  return r;
}

}  // namespace

IntegralResult integrate_on_box(const Box& box, const QuadratureSpec& q,
                                const std::function<double(const Vec&)>& fn) {
  const int dim = static_cast<int>(box.half_widths.size());
  q.validate(dim);
  std::vector<AxisRule> rules;
  rules.reserve(static_cast<size_t>(dim));
  for (int d = 0; d < dim; ++d) rules.push_back(axis_rule(box.half_widths(d), q));

  const int n = q.points_per_axis;

  // One slab per index of the last axis. Each slab accumulates in a fixed
  // nested order and slabs are combined in index order afterwards, so the
  // result does not depend on the thread schedule.
  std::vector<double> slab_sum(static_cast<size_t>(n), 0.0);
  std::vector<long> slab_excluded(static_cast<size_t>(n), 0);
  std::atomic<int> next{0};
  std::mutex err_mutex;
  std::exception_ptr error;

  auto run_slab = [&](int outer) {
    std::vector<int> idx(static_cast<size_t>(dim), 0);
    Vec x(dim);
    x(dim - 1) = rules[static_cast<size_t>(dim - 1)].nodes[static_cast<size_t>(outer)];
    const double wout = rules[static_cast<size_t>(dim - 1)].weights[static_cast<size_t>(outer)];
    double sum = 0.0;
    long excluded = 0;
    while (true) {
      double wprod = wout;
      for (int d = 0; d < dim - 1; ++d) {
        x(d) = rules[static_cast<size_t>(d)].nodes[static_cast<size_t>(idx[static_cast<size_t>(d)])];
        wprod *= rules[static_cast<size_t>(d)].weights[static_cast<size_t>(idx[static_cast<size_t>(d)])];
      }
      try {
        sum += wprod * fn(x);
      } catch (const SingularPointError&) {
        ++excluded;
      } catch (const DegenerateGradientError&) {
        ++excluded;
      }
      int d = 0;
      for (; d < dim - 1; ++d) {
        if (++idx[static_cast<size_t>(d)] < n) break;
        idx[static_cast<size_t>(d)] = 0;
      }
      if (d == dim - 1) break;
    }
    slab_sum[static_cast<size_t>(outer)] = sum;
    slab_excluded[static_cast<size_t>(outer)] = excluded;
  };

  auto worker = [&]() {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        run_slab(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int n_threads = static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(n)));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  IntegralResult out;
  for (int i = 0; i < n; ++i) {
    out.value += slab_sum[static_cast<size_t>(i)];
    out.excluded_count += slab_excluded[static_cast<size_t>(i)];
  }
  out.total_points = 1;
  for (int d = 0; d < dim; ++d) out.total_points *= n;
  return out;
}

IntegralResult energy_on_box(const OperatorContext& ctx, const ScalarField& u, const Box& box,
                             const QuadratureSpec& q) {
  const GrushinParams& par = ctx.gauge.params();
  if (u.dimension() != par.totalDim())
    throw DimensionMismatchError("energy: field dimension != m + k");
  const double p = par.p;
  auto integrand = [&](const Vec& x) {
    std::span<const double> xs(x.data(), static_cast<size_t>(x.size()));
    if (u.singularAt(xs)) throw SingularPointError("energy: singular grid point");
    Jet2 ju = jet2_eval(u, x);
    const double w = grushin_gradient_square_from_jet(ctx, ju, Point::split(x, par.m, par.k));
    return std::pow(w, 0.5 * p) / p;
  };
  return integrate_on_box(box, q, integrand);
}

IntegralResult energy(const OperatorContext& ctx, const ScalarField& u, const QuadratureSpec& q) {
  return energy_on_box(ctx, u, Box::cube(q.box_half_width, u.dimension()), q);
}

IntegralResult lq_norm_on_box(const ScalarField& u, double q_exp, const Box& box,
                              const QuadratureSpec& q) {
  if (!(q_exp > 0.0)) throw ConfigError("lq_norm: exponent must be > 0");
  auto integrand = [&](const Vec& x) {
    std::span<const double> xs(x.data(), static_cast<size_t>(x.size()));
    if (u.singularAt(xs)) throw SingularPointError("lq_norm: singular grid point");
    return std::pow(std::abs(u.value(xs)), q_exp);
  };
  IntegralResult r = integrate_on_box(box, q, integrand);
  r.value = std::pow(r.value, 1.0 / q_exp);
  return r;
}

IntegralResult lq_norm(const ScalarField& u, double q_exp, const QuadratureSpec& q) {
  return lq_norm_on_box(u, q_exp, Box::cube(q.box_half_width, u.dimension()), q);
}

double critical_q(const GrushinParams& params) {
  const double q_dim = params.homogeneousDimension();
  if (!(params.p < q_dim)) throw ConfigError("critical_q: requires p < Q");
  return params.p * q_dim / (q_dim - params.p);
}

double sobolev_quotient(const OperatorContext& ctx, const ScalarField& u, const QuadratureSpec& q) {
  const GrushinParams& par = ctx.gauge.params();
  const double qc = critical_q(par);
  const double num = lq_norm(u, qc, q).value;
  const double en = energy(ctx, u, q).value;
  return num / std::pow(par.p * en, 1.0 / par.p);
}

double sobolev_quotient_dilated(const OperatorContext& ctx, const ScalarField& u,
                                const QuadratureSpec& q, double t) {
  if (!(t > 0.0)) throw ConfigError("sobolev_quotient_dilated: t must be > 0");
  const GrushinParams& par = ctx.gauge.params();
  const double qc = critical_q(par);
  Vec factors(par.totalDim());
  Box box;
  box.half_widths = Vec(par.totalDim());
  const double ts = std::pow(t, par.alpha + 1.0);
  for (int i = 0; i < par.m; ++i) {
    factors(i) = t;
    box.half_widths(i) = q.box_half_width / t;
  }
  for (int i = par.m; i < par.totalDim(); ++i) {
    factors(i) = ts;
    box.half_widths(i) = q.box_half_width / ts;
  }
  ScalarField v = compose_scaling(u, factors);
  const double num = lq_norm_on_box(v, qc, box, q).value;
  const double en = energy_on_box(ctx, v, box, q).value;
  return num / std::pow(par.p * en, 1.0 / par.p);
}

}  // namespace grushin
