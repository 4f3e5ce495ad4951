#pragma once

#include <cmath>

namespace ebcv {

/// w + i x + j y + k z.
struct Quaternion {
  double w = 0.0, x = 0.0, y = 0.0, z = 0.0;

  static Quaternion imaginary(double a, double b, double c) { return {0.0, a, b, c}; }

  double norm2() const { return w * w + x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm2()); }
  Quaternion conj() const { return {w, -x, -y, -z}; }
  Quaternion inverse() const {
    const double n = norm2();
    return {w / n, -x / n, -y / n, -z / n};
  }
};

inline Quaternion operator+(const Quaternion& a, const Quaternion& b) {
  return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
}
inline Quaternion operator-(const Quaternion& a, const Quaternion& b) {
  return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
}
inline Quaternion operator-(const Quaternion& a) { return {-a.w, -a.x, -a.y, -a.z}; }
inline Quaternion operator*(double s, const Quaternion& a) {
  return {s * a.w, s * a.x, s * a.y, s * a.z};
}
inline Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

/// exp(v) = e^{Re v} (cos|Im v| + (Im v/|Im v|) sin|Im v|).
inline Quaternion qexp(const Quaternion& v) {
  const double n = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
  double c = 0.0, s_over_n = 0.0;
  if (n < 1e-8) {
    const double n2 = n * n;
    c = 1.0 - n2 / 2.0 + n2 * n2 / 24.0;
    s_over_n = 1.0 - n2 / 6.0 + n2 * n2 / 120.0;
  } else {
    c = std::cos(n);
    s_over_n = std::sin(n) / n;
  }
  const double e = v.w == 0.0 ? 1.0 : std::exp(v.w);
  return {e * c, e * s_over_n * v.x, e * s_over_n * v.y, e * s_over_n * v.z};
}

}  // namespace ebcv
