#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace grushin {

// Ambient dimensions stay small (m + k <= 16), so vectors and Hessians use
// fixed-capacity Eigen storage and never touch the heap.
inline constexpr int kMaxDim = 16;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

struct DimensionMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Evaluation requested on (or too close to) a declared singular set.
struct SingularPointError : std::domain_error {
  using std::domain_error::domain_error;
};

/// A quasilinear operator was asked for at a point where the relevant
/// gradient block is below the degeneracy margin.
struct DegenerateGradientError : std::domain_error {
  using std::domain_error::domain_error;
};

struct NoConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PolePointError : std::domain_error {
  using std::domain_error::domain_error;
};

struct BudgetExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A point of the product space R^m x R^k.
struct Point {
  Vec z;
  Vec sigma;

  Point() = default;
  Point(Vec z_, Vec sigma_) : z(std::move(z_)), sigma(std::move(sigma_)) {}

  int totalDim() const { return static_cast<int>(z.size() + sigma.size()); }

  Vec flatten() const {
    Vec x(totalDim());
    x.head(z.size()) = z;
    x.tail(sigma.size()) = sigma;
    return x;
  }

  static Point split(const Vec& x, int m, int k) {
    if (x.size() != m + k) throw DimensionMismatchError("Point::split: size != m+k");
    Point p;
    p.z = x.head(m);
    p.sigma = x.tail(k);
    return p;
  }
};

}  // namespace grushin
