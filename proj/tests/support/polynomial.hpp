#pragma once

// Test-side symbolic oracle: multivariate polynomials with closed-form
// value/gradient/Hessian, independent of the jet arithmetic under test.

#include "grushin/field.hpp"
#include "grushin/sampling.hpp"
#include "grushin/types.hpp"

#include <vector>

namespace grushin::testing {

struct PolyTerm {
  double coef = 0.0;
  std::vector<int> exps;  // one exponent per variable
};

struct Polynomial {
  int dim = 0;
  std::vector<PolyTerm> terms;

  static double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
  }

  double value(const Vec& x) const {
    double s = 0.0;
    for (const auto& t : terms) {
      double m = t.coef;
      for (int i = 0; i < dim; ++i) m *= ipow(x(i), t.exps[static_cast<size_t>(i)]);
      s += m;
    }
    return s;
  }

  Polynomial derivative(int var) const {
    Polynomial d;
    d.dim = dim;
    for (const auto& t : terms) {
      const int e = t.exps[static_cast<size_t>(var)];
      if (e == 0) continue;
      PolyTerm nt = t;
      nt.coef = t.coef * e;
      nt.exps[static_cast<size_t>(var)] = e - 1;
      d.terms.push_back(std::move(nt));
    }
    return d;
  }

  Vec gradient(const Vec& x) const {
    Vec g(dim);
    for (int i = 0; i < dim; ++i) g(i) = derivative(i).value(x);
    return g;
  }

  Mat hessian(const Vec& x) const {
    Mat h(dim, dim);
    for (int i = 0; i < dim; ++i) {
      Polynomial di = derivative(i);
      for (int j = 0; j < dim; ++j) h(i, j) = di.derivative(j).value(x);
    }
    return h;
  }

  /// The same polynomial as a ScalarField evaluated through the jet
  /// arithmetic (the implementation path under test).
  ScalarField field() const {
    Polynomial self = *this;
    return ScalarField::make(dim, [self](auto xs) {
      using T = std::remove_cvref_t<decltype(xs[0])>;
      T s = 0.0 * xs[0];
      for (const auto& t : self.terms) {
        T m = t.coef + 0.0 * xs[0];
        for (int i = 0; i < self.dim; ++i)
          for (int e = 0; e < t.exps[static_cast<size_t>(i)]; ++e) m = m * xs[static_cast<size_t>(i)];
        s = s + m;
      }
      return s;
    });
  }
};

/// Random polynomial of total degree <= max_degree with coefficients in [-2, 2].
inline Polynomial random_polynomial(Rng& rng, int dim, int max_degree, int n_terms) {
  Polynomial p;
  p.dim = dim;
  for (int t = 0; t < n_terms; ++t) {
    PolyTerm term;
    term.coef = rng.uniform(-2.0, 2.0);
    term.exps.assign(static_cast<size_t>(dim), 0);
    int budget = max_degree;
    for (int i = 0; i < dim; ++i) {
      const int e = static_cast<int>(rng.uniform(0.0, budget + 1.0));
      term.exps[static_cast<size_t>(i)] = e;
      budget -= e;
    }
    p.terms.push_back(std::move(term));
  }
  return p;
}

}  // namespace grushin::testing
