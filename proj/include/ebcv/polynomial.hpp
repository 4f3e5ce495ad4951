#pragma once

// Polynomials of total degree <= 2 in the seven coordinates.

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ebcv/types.hpp"

namespace ebcv {

struct PolynomialDegreeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class Poly2 {
 public:
  static constexpr int kTerms = 36;  // 1 + 7 + 28

  std::array<double, kTerms> c{};

  static Poly2 constant(double v) {
    Poly2 p;
    p.c[0] = v;
    return p;
  }
  static Poly2 variable(int i) {
    Poly2 p;
    p.c[static_cast<std::size_t>(1 + i)] = 1.0;
    return p;
  }

  /// Slot of the monomial q_i q_j (i <= j).
  static int quad_index(int i, int j) {
    if (i > j) std::swap(i, j);
    // rows i = 0..6 hold 7, 6, ..., 1 entries
    return 8 + i * 7 - i * (i - 1) / 2 + (j - i);
  }

  static std::array<int, 7> exponents(int k) {
    std::array<int, 7> e{};
    if (k == 0) return e;
    if (k < 8) {
      e[static_cast<std::size_t>(k - 1)] = 1;
      return e;
    }
    for (int i = 0; i < 7; ++i)
      for (int j = i; j < 7; ++j)
        if (quad_index(i, j) == k) {
          e[static_cast<std::size_t>(i)] += 1;
          e[static_cast<std::size_t>(j)] += 1;
          return e;
        }
    throw std::out_of_range("monomial index");
  }

  static int index_of(const std::array<int, 7>& e) {
    int deg = 0;
    for (int v : e) {
      if (v < 0) throw PolynomialDegreeError("negative exponent");
      deg += v;
    }
    if (deg > 2) throw PolynomialDegreeError("monomial degree exceeds 2");
    if (deg == 0) return 0;
    int first = -1, second = -1;
    for (int i = 0; i < 7; ++i) {
      for (int r = 0; r < e[static_cast<std::size_t>(i)]; ++r) {
        if (first < 0) first = i;
        else second = i;
      }
    }
    if (deg == 1) return 1 + first;
    return quad_index(first, second);
  }

  /// "e_r,e_s,e_t,e_w,e_x,e_y,e_z".
  static std::string key_of(int k) {
    const auto e = exponents(k);
    std::ostringstream os;
    for (int i = 0; i < 7; ++i) os << (i ? "," : "") << e[static_cast<std::size_t>(i)];
    return os.str();
  }

  static std::array<int, 7> parse_key(const std::string& key) {
    std::array<int, 7> e{};
    std::istringstream is(key);
    std::string tok;
    int i = 0;
    while (std::getline(is, tok, ',')) {
      if (i >= 7) throw PolynomialDegreeError("exponent key has more than 7 entries: " + key);
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(tok, &used);
      } catch (const std::exception&) {
        throw PolynomialDegreeError("bad exponent key: " + key);
      }
      if (used != tok.size()) throw PolynomialDegreeError("bad exponent key: " + key);
      e[static_cast<std::size_t>(i++)] = v;
    }
    if (i != 7) throw PolynomialDegreeError("exponent key needs 7 entries: " + key);
    return e;
  }

  template <class S>
  S eval(const Vec7T<S>& q) const {
    S acc = S(c[0]);
    for (int i = 0; i < 7; ++i)
      if (c[static_cast<std::size_t>(1 + i)] != 0.0) acc += c[static_cast<std::size_t>(1 + i)] * q[i];
    for (int i = 0; i < 7; ++i)
      for (int j = i; j < 7; ++j) {
        const double k = c[static_cast<std::size_t>(quad_index(i, j))];
        if (k != 0.0) acc += k * (q[i] * q[j]);
      }
    return acc;
  }

  bool is_zero() const {
    for (double v : c)
      if (v != 0.0) return false;
    return true;
  }

  int degree() const {
    int d = -1;
    for (int k = 0; k < kTerms; ++k)
      if (c[static_cast<std::size_t>(k)] != 0.0) d = std::max(d, k == 0 ? 0 : (k < 8 ? 1 : 2));
    return d;
  }

  Poly2& operator+=(const Poly2& o) {
    for (int k = 0; k < kTerms; ++k) c[k] += o.c[k];
    return *this;
  }
  Poly2& operator-=(const Poly2& o) {
    for (int k = 0; k < kTerms; ++k) c[k] -= o.c[k];
    return *this;
  }
  Poly2& operator*=(double s) {
    for (double& v : c) v *= s;
    return *this;
  }
};

inline Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
inline Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }
inline Poly2 operator-(Poly2 a) { return a *= -1.0; }
inline Poly2 operator*(double s, Poly2 a) { return a *= s; }
inline Poly2 operator*(Poly2 a, double s) { return a *= s; }
inline Poly2 operator+(Poly2 a, double s) {
  a.c[0] += s;
  return a;
}

/// Product; throws when the result would exceed degree 2.
inline Poly2 operator*(const Poly2& a, const Poly2& b) {
  if (a.degree() + b.degree() > 2)
    throw PolynomialDegreeError("product exceeds degree 2");
  Poly2 out;
  for (int i = 0; i < Poly2::kTerms; ++i) {
    if (a.c[i] == 0.0) continue;
    const auto ei = Poly2::exponents(i);
    for (int j = 0; j < Poly2::kTerms; ++j) {
      if (b.c[j] == 0.0) continue;
      auto e = Poly2::exponents(j);
      for (int k = 0; k < 7; ++k) e[k] += ei[k];
      out.c[static_cast<std::size_t>(Poly2::index_of(e))] += a.c[i] * b.c[j];
    }
  }
  return out;
}

/// X = sum_a f_a X_a with polynomial coefficients.
struct PolyVectorField {
  std::array<Poly2, 7> f{};

  /// Frame coefficients at q for any scalar type.
  template <class S>
  Vec7T<S> operator()(const Vec7T<S>& q) const {
    Vec7T<S> out{};
    for (int a = 0; a < 7; ++a) out[a] = f[a].eval(q);
    return out;
  }

  static PolyVectorField frame_field(int a) {
    check_frame_index(a);
    PolyVectorField X;
    X.f[static_cast<std::size_t>(a - 1)] = Poly2::constant(1.0);
    return X;
  }
};

}  // namespace ebcv
