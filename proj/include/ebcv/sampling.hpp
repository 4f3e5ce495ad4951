#pragma once

// Seeded sampling of points, parameters and cotangent states.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ebcv/geodesic.hpp"
#include "ebcv/manifold.hpp"
#include "ebcv/polynomial.hpp"

namespace ebcv {

inline constexpr double kBoxHalfWidth = 0.5;
inline constexpr double kMinK = 0.1;

/// Uniform doubles in [0,1) from the top 53 bits; identical on every platform.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  CoordPoint box_point(double half = kBoxHalfWidth) {
    CoordPoint q;
    for (double& v : q.c) v = uniform(-half, half);
    return q;
  }

  /// Box point with K(q) > kMinK.
  CoordPoint point(const ModelParams& p, int max_tries = 100000) {
    if (!std::isfinite(p.m) || !std::isfinite(p.l))
      throw DomainViolation("non-finite model parameters");
    for (int i = 0; i < max_tries; ++i) {
      CoordPoint q = box_point();
      if (detail::k_factor_t(q.c, p) > kMinK) return q;
    }
    throw DomainViolation("sample box has no point with K > 0.1 for m = " +
                          std::to_string(p.m));
  }

  std::vector<CoordPoint> points(const ModelParams& p, int n) {
    std::vector<CoordPoint> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(point(p));
    return out;
  }

  /// (m, l) in [-1,1] x [-2,2].
  ModelParams params() {
    ModelParams p;
    p.m = uniform(-1.0, 1.0);
    p.l = uniform(-2.0, 2.0);
    return p;
  }

  /// Momenta uniform in the unit ball, position from point().
  CotangentState state(const ModelParams& p, double pmax = 1.0) {
    CotangentState s;
    s.q = point(p);
    for (;;) {
      double n2 = 0.0;
      for (double& v : s.p) {
        v = uniform(-pmax, pmax);
        n2 += v * v;
      }
      if (n2 <= pmax * pmax) break;
    }
    return s;
  }

  /// Every coefficient of every component uniform in [-1,1].
  PolyVectorField field() {
    PolyVectorField X;
    for (auto& f : X.f)
      for (double& c : f.c) c = uniform(-1.0, 1.0);
    return X;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline std::vector<CoordPoint> sample_points(const ModelParams& p, int n, std::uint64_t seed) {
  Sampler s(seed);
  return s.points(p, n);
}

/// Ten points used for rank and Killing residual checks.
inline std::vector<CoordPoint> standard_sample(std::uint64_t seed = 2024) {
  return sample_points(ModelParams{0.0, 1.0}, 10, seed);
}

}  // namespace ebcv
