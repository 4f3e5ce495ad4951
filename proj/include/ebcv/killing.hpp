#pragma once

// Killing equation in the orthonormal frame, the 28-equation system, the
// closed-form m = 0 family and a point-evaluation rank test.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ebcv/expression.hpp"
#include "ebcv/jet.hpp"
#include "ebcv/manifold.hpp"
#include "ebcv/polynomial.hpp"
#include "ebcv/types.hpp"

namespace ebcv {

/// Matrix <nabla_{X_a} X, X_b> + <nabla_{X_b} X, X_a>, 0-based [a][b]. `field`
/// maps Vec7T<Jet<double,7>> to the frame coefficients of X.
template <class Field>
Mat7 killing_residual(const Field& field, const CoordPoint& q, const ModelParams& p) {
  using J = Jet<double, 7>;
  detail::check_domain(q.c, p);
  const auto qj = seed_gradient<7>(q.c);
  const Vec7T<J> f = field(qj);
  const Mat7 F = detail::frame_t(q.c, p);
  const Tab3<double> G = detail::connection_table_t(q.c, p);
  Mat7 out{};
  for (int a = 0; a < 7; ++a)
    for (int b = a; b < 7; ++b) {
      double v = detail::along(f[b], F, a) + detail::along(f[a], F, b);
      for (int c = 0; c < 7; ++c) v += f[c].v * (G[a][c][b] + G[b][c][a]);
      out[a][b] = v;
      out[b][a] = v;
    }
  return out;
}

inline double max_abs(const Mat7& m) {
  double mx = 0.0;
  for (const auto& row : m)
    for (double v : row) mx = std::max(mx, std::abs(v));
  return mx;
}

// ---------------------------------------------------------------------------
// The 28-equation system.

/// Frame pair (0-based) that equation k is the component of.
inline const std::array<std::array<int, 2>, 28>& pde_pairs() {
  static const std::array<std::array<int, 2>, 28> pairs = [] {
    std::array<std::array<int, 2>, 28> out{};
    int k = 0;
    for (int i = 0; i < 3; ++i) out[k++] = {i, i};
    out[k++] = {0, 1};
    out[k++] = {0, 2};
    out[k++] = {1, 2};
    for (int i = 0; i < 3; ++i)
      for (int a = 3; a < 7; ++a) out[k++] = {i, a};
    for (int a = 3; a < 7; ++a)
      for (int b = a; b < 7; ++b) out[k++] = {a, b};
    return out;
  }();
  return pairs;
}

/// Slots: r..z, K, m, l, f1..f7, then D<v>(i) for v in r..z and i in 1..7.
inline const SymbolTable& pde_symbols() {
  static const SymbolTable table = [] {
    SymbolTable t;
    for (const char* n : kCoordNames) t.add(n);
    t.add("K");
    t.add("m");
    t.add("l");
    for (int i = 1; i <= 7; ++i) t.add("f" + std::to_string(i));
    for (const char* n : kCoordNames)
      for (int i = 1; i <= 7; ++i) t.add(std::string("D") + n + "(" + std::to_string(i) + ")");
    return t;
  }();
  return table;
}

/// General-m system, written as printed except for two sign corrections
/// (equation 13: +lz/2 d_r f2; equation 15: -ml(wy-xz) f5).
inline const std::array<const char*, 28>& pde_sources() {
  static const std::array<const char*, 28> src = {
      "Dr(1)",
      "Ds(2)",
      "Dt(3)",
      "Dr(2)+Ds(1)",
      "Dr(3)+Dt(1)",
      "Ds(3)+Dt(2)",
      "Dr(4)+K*Dw(1)+l*y/2*Ds(1)+l*z/2*Dt(1)-l*(1+m*(y^2+z^2))*f5-m*l*(w*z-x*y)*f6+m*l*(w*y+x*z)*f7",
      "Dr(5)+K*Dx(1)-l*z/2*Ds(1)+l*y/2*Dt(1)+l*(1+m*(y^2+z^2))*f4-m*l*(w*y+x*z)*f6-m*l*(w*z-x*y)*f7",
      "Dr(6)+K*Dy(1)-l*w/2*Ds(1)-l*x/2*Dt(1)+m*l*(w*z-x*y)*f4+m*l*(w*y+x*z)*f5-l*(1+m*(w^2+x^2))*f7",
      "Dr(7)+K*Dz(1)+l*x/2*Ds(1)-l*w/2*Dt(1)-m*l*(w*y+x*z)*f4+m*l*(w*z-x*y)*f5+l*(1+m*(w^2+x^2))*f6",
      "Ds(4)+K*Dw(2)+l*x/2*Dr(2)+l*z/2*Dt(2)+m*l*(w*z+x*y)*f5-l*(1+m*(x^2+z^2))*f6-m*l*(w*x-y*z)*f7",
      "Ds(5)+K*Dx(2)-l*w/2*Dr(2)+l*y/2*Dt(2)-m*l*(w*z+x*y)*f4+m*l*(w*x-y*z)*f6+l*(1+m*(w^2+y^2))*f7",
      "Ds(6)+K*Dy(2)+l*z/2*Dr(2)-l*x/2*Dt(2)+l*(1+m*(x^2+z^2))*f4-m*l*(w*x-y*z)*f5-m*l*(w*z+x*y)*f7",
      "Ds(7)+K*Dz(2)-l*y/2*Dr(2)-l*w/2*Dt(2)+m*l*(w*x-y*z)*f4-l*(1+m*(w^2+y^2))*f5+m*l*(w*z+x*y)*f6",
      "Dt(4)+K*Dw(3)+l*x/2*Dr(3)+l*y/2*Ds(3)-m*l*(w*y-x*z)*f5+m*l*(w*x+y*z)*f6-l*(1+m*(x^2+y^2))*f7",
      "Dt(5)+K*Dx(3)-l*w/2*Dr(3)-l*z/2*Ds(3)+m*l*(w*y-x*z)*f4-l*(1+m*(w^2+z^2))*f6+m*l*(w*x+y*z)*f7",
      "Dt(6)+K*Dy(3)+l*z/2*Dr(3)-l*w/2*Ds(3)-m*l*(w*x+y*z)*f4+l*(1+m*(w^2+z^2))*f5+m*l*(w*y-x*z)*f7",
      "Dt(7)+K*Dz(3)-l*y/2*Dr(3)+l*x/2*Ds(3)+l*(1+m*(x^2+y^2))*f4-m*l*(w*x+y*z)*f5-m*l*(w*y-x*z)*f6",
      "K*Dw(4)+l*x/2*Dr(4)+l*y/2*Ds(4)+l*z/2*Dt(4)-2*m*x*f5-2*m*y*f6-2*m*z*f7",
      "K*Dw(5)+l*x/2*Dr(5)+l*y/2*Ds(5)+l*z/2*Dt(5)+K*Dx(4)-l*w/2*Dr(4)-l*z/2*Ds(4)+l*y/2*Dt(4)+2*m*x*f4+2*m*w*f5",
      "K*Dw(6)+l*x/2*Dr(6)+l*y/2*Ds(6)+l*z/2*Dt(6)+K*Dy(4)+l*z/2*Dr(4)-l*w/2*Ds(4)-l*x/2*Dt(4)+2*m*y*f4+2*m*w*f6",
      "K*Dw(7)+l*x/2*Dr(7)+l*y/2*Ds(7)+l*z/2*Dt(7)+K*Dz(4)-l*y/2*Dr(4)+l*x/2*Ds(4)-l*w/2*Dt(4)+2*m*z*f4+2*m*w*f7",
      "K*Dx(5)-l*w/2*Dr(5)-l*z/2*Ds(5)+l*y/2*Dt(5)-2*m*w*f4-2*m*y*f6-2*m*z*f7",
      "K*Dx(6)-l*w/2*Dr(6)-l*z/2*Ds(6)+l*y/2*Dt(6)+K*Dy(5)+l*z/2*Dr(5)-l*w/2*Ds(5)-l*x/2*Dt(5)+2*m*y*f5+2*m*x*f6",
      "K*Dx(7)-l*w/2*Dr(7)-l*z/2*Ds(7)+l*y/2*Dt(7)+K*Dz(5)-l*y/2*Dr(5)+l*x/2*Ds(5)-l*w/2*Dt(5)+2*m*z*f5+2*m*x*f7",
      "K*Dy(6)+l*z/2*Dr(6)-l*w/2*Ds(6)-l*x/2*Dt(6)-2*m*w*f4-2*m*x*f5-2*m*z*f7",
      "K*Dy(7)+l*z/2*Dr(7)-l*w/2*Ds(7)-l*x/2*Dt(7)+K*Dz(6)-l*y/2*Dr(6)+l*x/2*Ds(6)-l*w/2*Dt(6)+2*m*z*f6+2*m*y*f7",
      "K*Dz(7)-l*y/2*Dr(7)+l*x/2*Ds(7)-l*w/2*Dt(7)-2*m*w*f4-2*m*x*f5-2*m*y*f6",
  };
  return src;
}

inline std::vector<Expression> compile_system(const std::vector<std::string>& sources) {
  std::vector<Expression> out;
  out.reserve(sources.size());
  for (const auto& s : sources) out.push_back(pde_symbols().compile(s));
  return out;
}

inline const std::vector<Expression>& pde_system() {
  static const std::vector<Expression> sys = [] {
    std::vector<std::string> s(pde_sources().begin(), pde_sources().end());
    return compile_system(s);
  }();
  return sys;
}

/// Slot values for pde_symbols() from the field values and coordinate gradients.
template <class Field>
std::vector<double> pde_slots(const Field& field, const CoordPoint& q, const ModelParams& p) {
  using J = Jet<double, 7>;
  detail::check_domain(q.c, p);
  const auto qj = seed_gradient<7>(q.c);
  const Vec7T<J> f = field(qj);
  std::vector<double> v;
  v.reserve(pde_symbols().size());
  for (double c : q.c) v.push_back(c);
  v.push_back(detail::k_factor_t(q.c, p));
  v.push_back(p.m);
  v.push_back(p.l);
  for (int i = 0; i < 7; ++i) v.push_back(f[i].v);
  for (int mu = 0; mu < 7; ++mu)
    for (int i = 0; i < 7; ++i) v.push_back(f[i].d[mu]);
  return v;
}

template <class Field>
std::vector<double> evaluate_system(const std::vector<Expression>& system, const Field& field,
                                    const CoordPoint& q, const ModelParams& p) {
  const auto slots = pde_slots(field, q, p);
  std::vector<double> out;
  out.reserve(system.size());
  for (const auto& e : system) out.push_back(e.eval(slots));
  return out;
}

/// The 28 residuals of the general-m system at q.
template <class Field>
std::array<double, 28> pde_residuals(const Field& field, const CoordPoint& q,
                                     const ModelParams& p) {
  const auto v = evaluate_system(pde_system(), field, q, p);
  std::array<double, 28> out{};
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

// ---------------------------------------------------------------------------
// m = 0 family.

struct KillingParamsM0 {
  double M = 0, N = 0, P = 0, Q = 0, R = 0, S = 0, T = 0, U = 0, V = 0, W = 0;
  double C1 = 0, C2 = 0, C3 = 0;

  static constexpr std::array<const char*, 13> names = {
      "M", "N", "P", "Q", "R", "S", "T", "U", "V", "W", "C1", "C2", "C3"};

  double& operator[](int i) {
    double* f[] = {&M, &N, &P, &Q, &R, &S, &T, &U, &V, &W, &C1, &C2, &C3};
    return *f[i];
  }

  static KillingParamsM0 unit(int i) {
    KillingParamsM0 k;
    k[i] = 1.0;
    return k;
  }

  PolyVectorField field(double l) const {
    const Poly2 r = Poly2::variable(0), s = Poly2::variable(1), t = Poly2::variable(2);
    const Poly2 w = Poly2::variable(3), x = Poly2::variable(4), y = Poly2::variable(5),
                z = Poly2::variable(6);
    const double h = 0.5 * l;
    PolyVectorField X;
    X.f[0] = (P + R) * s + (S - N) * t +
             h * (-M * (w * w + x * x) - U * (y * y + z * z) + (R - P) * (w * y + x * z) +
                  (N + S) * (w * z - x * y) + 2 * T * w - 2 * Q * x + 2 * W * y - 2 * V * z) +
             C1;
    X.f[1] = -(P + R) * r + (M + U) * t -
             h * (N * (w * w + y * y) - S * (x * x + z * z) + (R - P) * (w * x - y * z) +
                  (M - U) * (w * z + x * y) - 2 * V * w + 2 * W * x + 2 * Q * y - 2 * T * z) +
             C2;
    X.f[2] = -(S - N) * r - (M + U) * s -
             h * (P * (w * w + z * z) + R * (x * x + y * y) + (N + S) * (w * x + y * z) +
                  (U - M) * (w * y - x * z) - 2 * W * w - 2 * V * x + 2 * T * y + 2 * Q * z) +
             C3;
    X.f[3] = M * x + N * y + P * z + Q;
    X.f[4] = -M * w + R * y + S * z + T;
    X.f[5] = -N * w - R * x + U * z + V;
    X.f[6] = -P * w - S * x - U * y + W;
    return X;
  }
};

/// The 13 fields obtained by switching on one parameter at a time.
inline std::vector<PolyVectorField> killing_basis_m0(double l) {
  std::vector<PolyVectorField> out;
  out.reserve(13);
  for (int i = 0; i < 13; ++i) out.push_back(KillingParamsM0::unit(i).field(l));
  return out;
}

/// Coordinate bracket of two frame-expressed fields, returned in the frame.
template <class A, class B>
struct BracketField {
  A a;
  B b;
  ModelParams p;

  template <class S>
  Vec7T<S> operator()(const Vec7T<S>& q) const {
    using J = Jet<S, 7>;
    const auto qj = seed_gradient<7>(q);
    const Mat7T<J> F = detail::frame_t(qj, p);
    const Vec7T<J> fa = a(qj), fb = b(qj);
    Vec7T<J> va{}, vb{};
    for (int mu = 0; mu < 7; ++mu)
      for (int c = 0; c < 7; ++c) {
        va[mu] += F[mu][c] * fa[c];
        vb[mu] += F[mu][c] * fb[c];
      }
    Vec7T<S> br{};
    for (int mu = 0; mu < 7; ++mu) {
      S acc{};
      for (int nu = 0; nu < 7; ++nu) acc += va[nu].v * vb[mu].d[nu] - vb[nu].v * va[mu].d[nu];
      br[mu] = acc;
    }
    const Mat7T<S> O = detail::coframe_t(q, p);
    Vec7T<S> out{};
    for (int c = 0; c < 7; ++c)
      for (int mu = 0; mu < 7; ++mu) out[c] += O[c][mu] * br[mu];
    return out;
  }
};

template <class A, class B>
BracketField<A, B> lie_bracket(const A& a, const B& b, const ModelParams& p) {
  return BracketField<A, B>{a, b, p};
}

struct RankResult {
  int rank = 0;
  bool insufficient_samples = false;  // fewer evaluation rows than fields
  std::vector<double> singular_values;
};

/// Numerical rank of the stacked frame-coefficient evaluations; singular values
/// above 1e-8 times the largest count.
inline RankResult basis_rank(const std::vector<PolyVectorField>& basis,
                             const std::vector<CoordPoint>& points) {
  if (points.empty()) throw TooFewSamples("basis_rank needs at least one point");
  const auto rows = static_cast<Eigen::Index>(7 * points.size());
  const auto cols = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd A(rows, cols);
  for (std::size_t k = 0; k < points.size(); ++k)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const Vec7 v = basis[j](points[k].c);
      for (int a = 0; a < 7; ++a)
        A(static_cast<Eigen::Index>(7 * k + a), static_cast<Eigen::Index>(j)) = v[a];
    }
  RankResult res;
  res.insufficient_samples = rows < cols;
  if (cols == 0) return res;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  res.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double top = sv.size() ? sv(0) : 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-8 * top) ++res.rank;
  return res;
}

}  // namespace ebcv
