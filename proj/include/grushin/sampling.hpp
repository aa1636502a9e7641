#pragma once

#include "grushin/gauge.hpp"

#include <cstdint>
#include <vector>

namespace grushin {

/// Seeded 64-bit generator (splitmix64). Chosen over std distributions so the
/// sample stream is bit-identical across platforms; reports name the
/// algorithm together with the seed.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "splitmix64";

  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t nextU64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(nextU64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

 private:
  std::uint64_t state_;
};

/// Sampling policy for the verification sweeps: points land in the gauge
/// annulus Theta^0 in [theta_lo, theta_hi], away from the z-origin, from the
/// shifted sigma-origin when Psi is anisotropic, and off the p-norm
/// coordinate hyperplanes.
struct SamplePolicy {
  double theta_lo = 0.3;
  double theta_hi = 3.0;
  double z_margin = 1e-3;
  double sigma_margin = 1e-3;
  double hyperplane_margin = 1e-3;
  int max_attempts = 100000;
};

/// One point drawn by rejection + dilation rescaling; deterministic given the
/// rng state.
Point sample_annulus_point(Rng& rng, const GaugePair& gauge, const Vec& sigma0,
                           const SamplePolicy& policy = {});

std::vector<Point> sample_annulus_points(Rng& rng, const GaugePair& gauge, const Vec& sigma0,
                                         int count, const SamplePolicy& policy = {});

/// Nonzero block samples for the norm-identity suites: uniform in
/// [-2,2]^n with |x|_inf >= floor and coordinates kept off the hyperplanes
/// when the family needs it.
Vec sample_norm_point(Rng& rng, const NormSpec& m, double floor_inf = 0.1,
                      double hyperplane_margin = 1e-3);

std::vector<Vec> sample_norm_points(Rng& rng, const NormSpec& m, int count,
                                    double floor_inf = 0.1, double hyperplane_margin = 1e-3);

}  // namespace grushin
