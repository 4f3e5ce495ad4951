#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace ebcv {

// Numeric tolerances shared by the library, the verification report and the
// tests.
inline constexpr double TOL_EXACT = 1e-12;
inline constexpr double TOL_DERIV = 1e-8;
inline constexpr double TOL_FD = 1e-6;

inline constexpr int kDim = 7;
inline constexpr int kVertical = 3;  // X1..X3 span the vertical distribution

template <class S>
using Vec7T = std::array<S, 7>;
template <class S>
using Mat7T = std::array<std::array<S, 7>, 7>;  // [row][col]
using Vec7 = Vec7T<double>;
using Mat7 = Mat7T<double>;

// ---------------------------------------------------------------------------
// Errors

/// The point lies outside the chart K(q) > 0.
struct DomainViolation : std::domain_error {
  using std::domain_error::domain_error;
};

/// The frame matrix could not be inverted.
struct SingularFrame : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Heisenberg geodesic mode requested with (m,l) != (0,1).
struct ModeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InconclusiveClassification : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TooFewSamples : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Domain types

/// Coordinates in the fixed order (r, s, t, w, x, y, z). Index i of the array
/// is the direction of frame vector X_{i+1} at the origin.
struct CoordPoint {
  Vec7 c{};

  CoordPoint() = default;
  explicit CoordPoint(const Vec7& v) : c(v) {}
  CoordPoint(double r, double s, double t, double w, double x, double y,
             double z)
      : c{r, s, t, w, x, y, z} {}

  static CoordPoint origin() { return {}; }

  double r() const { return c[0]; }
  double s() const { return c[1]; }
  double t() const { return c[2]; }
  double w() const { return c[3]; }
  double x() const { return c[4]; }
  double y() const { return c[5]; }
  double z() const { return c[6]; }

  double operator[](std::size_t i) const { return c[i]; }
  double& operator[](std::size_t i) { return c[i]; }

  bool finite() const {
    for (double v : c)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

inline constexpr std::array<const char*, 7> kCoordNames = {"r", "s", "t", "w",
                                                           "x", "y", "z"};

/// Parameters (m, l) of the metric family: m is the conformal parameter, l the
/// twist.
struct ModelParams {
  double m = 0.0;
  double l = 0.0;
};

/// Tangent vector by its coefficients in the orthonormal frame X1..X7.
/// Indexing through operator() is 1-based to match the frame labels.
struct FrameVector {
  Vec7 c{};

  FrameVector() = default;
  explicit FrameVector(const Vec7& v) : c(v) {}

  double operator()(int a) const { return c[static_cast<std::size_t>(a - 1)]; }
  double& operator()(int a) { return c[static_cast<std::size_t>(a - 1)]; }

  static FrameVector unit(int a) {
    FrameVector v;
    v(a) = 1.0;
    return v;
  }

  double norm() const {
    double s = 0.0;
    for (double x : c) s += x * x;
    return std::sqrt(s);
  }
  double max_abs() const {
    double m = 0.0;
    for (double x : c) m = std::max(m, std::abs(x));
    return m;
  }
};

inline FrameVector operator+(FrameVector a, const FrameVector& b) {
  for (int i = 0; i < kDim; ++i) a.c[i] += b.c[i];
  return a;
}
inline FrameVector operator-(FrameVector a, const FrameVector& b) {
  for (int i = 0; i < kDim; ++i) a.c[i] -= b.c[i];
  return a;
}
inline FrameVector operator*(double s, FrameVector a) {
  for (double& x : a.c) x *= s;
  return a;
}
inline double dot(const FrameVector& a, const FrameVector& b) {
  double s = 0.0;
  for (int i = 0; i < kDim; ++i) s += a.c[i] * b.c[i];
  return s;
}

/// Columns are X1..X7 in coordinate components: m[mu][a] = X_a^mu.
struct FrameMatrix {
  Mat7 m{};
  Vec7 coords_of(int a) const {
    Vec7 v{};
    for (int mu = 0; mu < kDim; ++mu) v[mu] = m[mu][a - 1];
    return v;
  }
};

/// Fully lowered curvature in the orthonormal frame,
///   R(a,b,c,d) = <R(X_a,X_b) X_d, X_c>,   R(X,Y) = [∇X,∇Y] − ∇[X,Y],
/// so that R(a,b,a,b) is the sectional curvature of the plane {X_a, X_b}.
/// operator() is 1-based; at() is 0-based.
struct Curvature4 {
  std::array<double, 2401> v{};

  double& at(int a, int b, int c, int d) {
    return v[static_cast<std::size_t>(((a * 7 + b) * 7 + c) * 7 + d)];
  }
  double at(int a, int b, int c, int d) const {
    return v[static_cast<std::size_t>(((a * 7 + b) * 7 + c) * 7 + d)];
  }
  double operator()(int a, int b, int c, int d) const {
    return at(a - 1, b - 1, c - 1, d - 1);
  }
};

inline void check_frame_index(int a) {
  if (a < 1 || a > kDim)
    throw std::out_of_range("frame index must lie in 1..7, got " +
                            std::to_string(a));
}

inline bool is_vertical(int a) { return a >= 1 && a <= kVertical; }

}  // namespace ebcv
