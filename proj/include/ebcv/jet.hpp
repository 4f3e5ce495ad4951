#pragma once

// Forward-mode automatic differentiation.
//
// Jet<S, N> carries a value and N directional derivatives, each of scalar type
// S. Nesting gives higher derivatives: Jet<Jet<double, 7>, 7> holds the value,
// gradient and Hessian of a function of seven variables. Only the field
// operations are provided; every quantity in this library is a rational
// function of the coordinates.

#include <array>
#include <cstddef>
#include <type_traits>

namespace ebcv {

template <class S, int N>
struct Jet;

template <class T>
struct is_jet : std::false_type {};
template <class S, int N>
struct is_jet<Jet<S, N>> : std::true_type {};
template <class T>
inline constexpr bool is_jet_v = is_jet<T>::value;

template <class S, int N>
struct Jet {
  using scalar_type = S;
  static constexpr int size = N;

  S v{};
  std::array<S, N> d{};

  Jet() = default;

  template <class U>
    requires std::is_arithmetic_v<U>
  Jet(U c) : v(static_cast<double>(c)) {}  // NOLINT(google-explicit-constructor)

  explicit Jet(const S& value)
    requires(!std::is_arithmetic_v<S>)
      : v(value) {}

  Jet(const S& value, const std::array<S, N>& grad) : v(value), d(grad) {}

  Jet& operator+=(const Jet& o) {
    v += o.v;
    for (int i = 0; i < N; ++i) d[i] += o.d[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    for (int i = 0; i < N; ++i) d[i] -= o.d[i];
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    for (int i = 0; i < N; ++i) d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }
  Jet& operator/=(const Jet& o) {
    const S inv = S(1.0) / o.v;
    v *= inv;
    for (int i = 0; i < N; ++i) d[i] = (d[i] - v * o.d[i]) * inv;
    return *this;
  }
  Jet& operator*=(double c) {
    v *= c;
    for (auto& x : d) x *= c;
    return *this;
  }
};

template <class S, int N>
Jet<S, N> operator-(Jet<S, N> a) {
  a.v = -a.v;
  for (auto& x : a.d) x = -x;
  return a;
}
template <class S, int N>
Jet<S, N> operator+(Jet<S, N> a, const Jet<S, N>& b) {
  return a += b;
}
template <class S, int N>
Jet<S, N> operator-(Jet<S, N> a, const Jet<S, N>& b) {
  return a -= b;
}
template <class S, int N>
Jet<S, N> operator*(Jet<S, N> a, const Jet<S, N>& b) {
  return a *= b;
}
template <class S, int N>
Jet<S, N> operator/(Jet<S, N> a, const Jet<S, N>& b) {
  return a /= b;
}

// Mixed arithmetic with plain doubles.
template <class S, int N>
Jet<S, N> operator+(Jet<S, N> a, double c) {
  a.v += c;
  return a;
}
template <class S, int N>
Jet<S, N> operator+(double c, Jet<S, N> a) {
  a.v += c;
  return a;
}
template <class S, int N>
Jet<S, N> operator-(Jet<S, N> a, double c) {
  a.v -= c;
  return a;
}
template <class S, int N>
Jet<S, N> operator-(double c, const Jet<S, N>& a) {
  return Jet<S, N>(c) - a;
}
template <class S, int N>
Jet<S, N> operator*(Jet<S, N> a, double c) {
  return a *= c;
}
template <class S, int N>
Jet<S, N> operator*(double c, Jet<S, N> a) {
  return a *= c;
}
template <class S, int N>
Jet<S, N> operator/(Jet<S, N> a, double c) {
  return a *= (1.0 / c);
}
template <class S, int N>
Jet<S, N> operator/(double c, const Jet<S, N>& a) {
  return Jet<S, N>(c) / a;
}

/// Innermost double value of a (possibly nested) jet.
inline double value_of(double x) { return x; }
template <class S, int N>
double value_of(const Jet<S, N>& x) {
  return value_of(x.v);
}

/// Independent variable number `i` of a jet whose base value is `x`.
template <class S, int N>
Jet<S, N> variable(const S& x, int i) {
  Jet<S, N> j;
  j.v = x;
  j.d[static_cast<std::size_t>(i)] = S(1.0);
  return j;
}

/// Seeds every component of `q` as an independent variable (first order).
template <int N, class S>
std::array<Jet<S, N>, N> seed_gradient(const std::array<S, N>& q) {
  std::array<Jet<S, N>, N> out;
  for (int i = 0; i < N; ++i) out[i] = variable<S, N>(q[i], i);
  return out;
}

/// Seeds `q` for second derivatives: f(x).d[j].d[k] = ∂j∂k f.
template <int N, class S>
std::array<Jet<Jet<S, N>, N>, N> seed_hessian(const std::array<S, N>& q) {
  std::array<Jet<Jet<S, N>, N>, N> out;
  for (int i = 0; i < N; ++i)
    out[i] = variable<Jet<S, N>, N>(variable<S, N>(q[i], i), i);
  return out;
}

/// Drops the outermost derivative layer.
template <class S, int N>
S strip(const Jet<S, N>& x) {
  return x.v;
}

}  // namespace ebcv
