#pragma once

// Characteristic connection D = nabla + (P/2)(nabla P) of the vertical /
// horizontal splitting, its torsion, the Tricerri-Vanhecke membership tests and
// a numerical Ambrose-Singer check.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ebcv/jet.hpp"
#include "ebcv/manifold.hpp"
#include "ebcv/types.hpp"

namespace ebcv {

/// P = V - H acting on frame coefficients.
struct SplitProjector {
  /// +1 on X1..X3, -1 on X4..X7 (1-based index).
  static double sign(int a) { return is_vertical(a) ? 1.0 : -1.0; }

  static FrameVector P(const FrameVector& v) {
    FrameVector out = v;
    for (int a = 4; a <= 7; ++a) out(a) = -out(a);
    return out;
  }
  static FrameVector vertical(const FrameVector& v) {
    FrameVector out;
    for (int a = 1; a <= 3; ++a) out(a) = v(a);
    return out;
  }
  static FrameVector horizontal(const FrameVector& v) {
    FrameVector out;
    for (int a = 4; a <= 7; ++a) out(a) = v(a);
    return out;
  }
};

/// T[a][b][c] = <T(X_a, X_b), X_c>; operator() is 1-based.
struct Torsion3 {
  Tab3<double> T{};
  double operator()(int a, int b, int c) const { return T[a - 1][b - 1][c - 1]; }
};

namespace detail {

inline double eps0(int a) { return a < 3 ? 1.0 : -1.0; }

/// D_a X_b = projection of nabla_a X_b onto the block containing X_b.
template <class S>
Tab3<S> char_connection_projection(const Tab3<S>& G) {
  Tab3<S> D{};
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b)
      for (int c = 0; c < 7; ++c)
        if ((b < 3) == (c < 3)) D[a][b][c] = G[a][b][c];
  return D;
}

/// ((nabla_a P) X_b)_c = (eps_b - eps_c) Gamma[a][b][c].
template <class S>
S nablaP(const Tab3<S>& G, int a, int b, int c) {
  return (eps0(b) - eps0(c)) * G[a][b][c];
}

/// D_a X_b = nabla_a X_b + (P/2)(nabla_a P) X_b, assembled literally.
template <class S>
Tab3<S> char_connection_via_P(const Tab3<S>& G) {
  Tab3<S> D{};
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b)
      for (int c = 0; c < 7; ++c)
        D[a][b][c] = G[a][b][c] + (0.5 * eps0(c)) * nablaP(G, a, b, c);
  return D;
}

template <class S>
Tab3<S> torsion_from(const Tab3<S>& D, const Tab3<S>& C) {
  Tab3<S> T{};
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b)
      for (int c = 0; c < 7; ++c) T[a][b][c] = D[a][b][c] - D[b][a][c] - C[a][b][c];
  return T;
}

/// T(X_a, X_b) = (P/2)((nabla_a P) X_b - (nabla_b P) X_a).
template <class S>
Tab3<S> torsion_via_P(const Tab3<S>& G) {
  Tab3<S> T{};
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b)
      for (int c = 0; c < 7; ++c)
        T[a][b][c] = (0.5 * eps0(c)) * (nablaP(G, a, b, c) - nablaP(G, b, a, c));
  return T;
}

template <class S>
Tab3<S> torsion_D_t(const Vec7T<S>& q, const ModelParams& p) {
  const Tab3<S> C = bracket_table_t(q, p);
  const Tab3<S> G = connection_from_brackets(C);
  return torsion_from(char_connection_projection(G), C);
}

}  // namespace detail

/// Candidate homogeneous structure T^D, usable with any scalar type.
struct TorsionDStructure {
  template <class S>
  Tab3<S> operator()(const Vec7T<S>& q, const ModelParams& p) const {
    return detail::torsion_D_t(q, p);
  }
};

/// T_X Y = nabla_X Y on frame fields. At m = 0 the frame is left invariant and
/// this is the structure of the flat (-)-connection.
struct LeviCivitaStructure {
  template <class S>
  Tab3<S> operator()(const Vec7T<S>& q, const ModelParams& p) const {
    return detail::connection_table_t(q, p);
  }
};

inline Tab3<double> char_connection_table(const CoordPoint& q, const ModelParams& p) {
  return detail::char_connection_projection(connection_table(q, p));
}

inline Tab3<double> char_connection_table_via_P(const CoordPoint& q,
                                                const ModelParams& p) {
  return detail::char_connection_via_P(connection_table(q, p));
}

inline FrameVector char_connection(int a, int b, const CoordPoint& q,
                                   const ModelParams& p) {
  check_frame_index(a);
  check_frame_index(b);
  return FrameVector(char_connection_table(q, p)[a - 1][b - 1]);
}

inline Torsion3 torsion_table(const CoordPoint& q, const ModelParams& p) {
  detail::check_domain(q.c, p);
  return Torsion3{detail::torsion_D_t(q.c, p)};
}

inline Torsion3 torsion_table_via_P(const CoordPoint& q, const ModelParams& p) {
  return Torsion3{detail::torsion_via_P(connection_table(q, p))};
}

inline FrameVector torsion_D(int a, int b, const CoordPoint& q, const ModelParams& p) {
  check_frame_index(a);
  check_frame_index(b);
  return FrameVector(torsion_table(q, p).T[a - 1][b - 1]);
}

/// c12(T)(X_c) = sum_r T[r][r][c].
inline FrameVector c12_trace_of(const Torsion3& T) {
  FrameVector out;
  for (int c = 0; c < 7; ++c) {
    double s = 0.0;
    for (int r = 0; r < 7; ++r) s += T.T[r][r][c];
    out.c[c] = s;
  }
  return out;
}

inline FrameVector c12_trace(const CoordPoint& q, const ModelParams& p) {
  return c12_trace_of(torsion_table(q, p));
}

inline double cyclic_sum_of(const Torsion3& T, int a, int b, int c) {
  return T(a, b, c) + T(c, a, b) + T(b, c, a);
}

inline double cyclic_sum(int a, int b, int c, const CoordPoint& q, const ModelParams& p) {
  check_frame_index(a);
  check_frame_index(b);
  check_frame_index(c);
  return cyclic_sum_of(torsion_table(q, p), a, b, c);
}

/// max |T[a][b][c] + T[b][a][c]|.
inline double first_slots_antisymmetry(const Torsion3& T) {
  double mx = 0.0;
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b)
      for (int c = 0; c < 7; ++c) mx = std::max(mx, std::abs(T.T[a][b][c] + T.T[b][a][c]));
  return mx;
}

enum class StructureClass { T3, T2plusT3, Trivial };

inline const char* to_string(StructureClass c) {
  switch (c) {
    case StructureClass::T3: return "T3";
    case StructureClass::T2plusT3: return "T2+T3";
    case StructureClass::Trivial: return "trivial";
  }
  return "?";
}

struct StructureVerdict {
  StructureClass label = StructureClass::Trivial;
  std::array<int, 3> witness{};  // 1-based triple with nonzero cyclic sum
  std::size_t witness_point = 0;
  double witness_value = 0.0;
  double max_antisymmetry = 0.0;
  double max_c12 = 0.0;
  double max_abs_torsion = 0.0;
};

/// Membership tests on T^D over the given points. Triples are scanned in
/// lexicographic order; the first cyclic sum above 1e-6 is the witness.
inline StructureVerdict classify_structure(const ModelParams& p,
                                           const std::vector<CoordPoint>& points) {
  if (points.empty()) throw TooFewSamples("classify_structure needs sample points");
  StructureVerdict v;
  bool have_witness = false;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const Torsion3 T = torsion_table(points[k], p);
    v.max_antisymmetry = std::max(v.max_antisymmetry, first_slots_antisymmetry(T));
    v.max_c12 = std::max(v.max_c12, c12_trace_of(T).max_abs());
    for (const auto& plane : T.T)
      for (const auto& row : plane)
        for (double x : row) v.max_abs_torsion = std::max(v.max_abs_torsion, std::abs(x));
    if (have_witness) continue;
    for (int a = 1; a <= 7 && !have_witness; ++a)
      for (int b = 1; b <= 7 && !have_witness; ++b)
        for (int c = 1; c <= 7 && !have_witness; ++c) {
          const double cs = cyclic_sum_of(T, a, b, c);
          if (std::abs(cs) > 1e-6) {
            have_witness = true;
            v.witness = {a, b, c};
            v.witness_point = k;
            v.witness_value = cs;
          }
        }
  }
  if (v.max_abs_torsion <= TOL_EXACT) {
    v.label = StructureClass::Trivial;
    return v;
  }
  const bool anti = v.max_antisymmetry <= TOL_EXACT;
  const bool c12 = v.max_c12 <= TOL_EXACT;
  if (anti && have_witness) {
    v.label = StructureClass::T3;
  } else if (!anti && c12) {
    v.label = StructureClass::T2plusT3;
  } else {
    throw InconclusiveClassification(
        "torsion is nonzero but the sampled symmetries fit neither T3 nor T2+T3");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Ambrose-Singer equations for a candidate structure T (T_a X_b = T[a][b][c] X_c):
//   (i)   T[a][b][c] + T[a][c][b] = 0
//   (ii)  (nabla_a R)_{bc} = [T_a, R_{bc}] - R_{T_a b, c} - R_{b, T_a c}
//   (iii) (nabla_a T)_b = [T_a, T_b] - T_{T_a b}

struct AmbroseSingerReport {
  double res_i = 0.0;
  double res_ii = 0.0;
  double res_iii = 0.0;
  std::array<int, 5> worst_ii{};   // 1-based (a,b,c,e,d)
  std::array<int, 4> worst_iii{};  // 1-based (a,b,c,e)
};

template <class Structure>
AmbroseSingerReport ambrose_singer_residuals(const CoordPoint& q, const ModelParams& p,
                                             const Structure& structure) {
  using J = Jet<double, 7>;
  detail::check_domain(q.c, p);
  const auto qj = seed_gradient<7>(q.c);
  const Mat7 F = detail::frame_t(q.c, p);
  const Tab3<double> G = detail::connection_table_t(q.c, p);
  const Tab3<J> Tj = structure(qj, p);
  const std::vector<J> Rj = detail::riemann_frame_t(qj, p);

  Tab3<double> T{};
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b)
      for (int c = 0; c < 7; ++c) T[a][b][c] = Tj[a][b][c].v;
  std::vector<double> R(2401);
  for (std::size_t i = 0; i < R.size(); ++i) R[i] = Rj[i].v;
  auto r4 = [&](int a, int b, int c, int d) { return R[detail::idx4(a, b, c, d)]; };

  AmbroseSingerReport rep;
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b)
      for (int c = 0; c < 7; ++c)
        rep.res_i = std::max(rep.res_i, std::abs(T[a][b][c] + T[a][c][b]));

  // (ii): components <(.)(X_b, X_c) X_d, X_e> stored as R[b][c][e][d].
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b)
      for (int c = 0; c < 7; ++c)
        for (int e = 0; e < 7; ++e)
          for (int d = 0; d < 7; ++d) {
            double lhs = detail::along(Rj[detail::idx4(b, c, e, d)], F, a);
            double rhs = 0.0;
            for (int f = 0; f < 7; ++f) {
              lhs -= G[a][b][f] * r4(f, c, e, d) + G[a][c][f] * r4(b, f, e, d) +
                     G[a][e][f] * r4(b, c, f, d) + G[a][d][f] * r4(b, c, e, f);
              rhs += r4(b, c, f, d) * T[a][f][e] - T[a][d][f] * r4(b, c, e, f) -
                     T[a][b][f] * r4(f, c, e, d) - T[a][c][f] * r4(b, f, e, d);
            }
            const double res = std::abs(lhs - rhs);
            if (res > rep.res_ii) {
              rep.res_ii = res;
              rep.worst_ii = {a + 1, b + 1, c + 1, e + 1, d + 1};
            }
          }

  // (iii): components <(.)_b X_c, X_e>.
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b)
      for (int c = 0; c < 7; ++c)
        for (int e = 0; e < 7; ++e) {
          double lhs = detail::along(Tj[b][c][e], F, a);
          double rhs = 0.0;
          for (int f = 0; f < 7; ++f) {
            lhs -= G[a][b][f] * T[f][c][e] + G[a][c][f] * T[b][f][e] +
                   G[a][e][f] * T[b][c][f];
            rhs += T[b][c][f] * T[a][f][e] - T[a][c][f] * T[b][f][e] -
                   T[a][b][f] * T[f][c][e];
          }
          const double res = std::abs(lhs - rhs);
          if (res > rep.res_iii) {
            rep.res_iii = res;
            rep.worst_iii = {a + 1, b + 1, c + 1, e + 1};
          }
        }
  return rep;
}

/// Ambrose-Singer residuals with T = T^D.
inline AmbroseSingerReport ambrose_singer_check(const CoordPoint& q, const ModelParams& p) {
  return ambrose_singer_residuals(q, p, TorsionDStructure{});
}

/// max over (a,b,c,e) of |(D_a T^D)(X_b, X_c)_e|.
inline double d_parallel_torsion(const CoordPoint& q, const ModelParams& p) {
  using J = Jet<double, 7>;
  detail::check_domain(q.c, p);
  const auto qj = seed_gradient<7>(q.c);
  const Mat7 F = detail::frame_t(q.c, p);
  const Tab3<double> D = char_connection_table(q, p);
  const Tab3<J> Tj = detail::torsion_D_t(qj, p);
  double mx = 0.0;
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b)
      for (int c = 0; c < 7; ++c)
        for (int e = 0; e < 7; ++e) {
          double v = detail::along(Tj[b][c][e], F, a);
          for (int f = 0; f < 7; ++f)
            v -= D[a][b][f] * Tj[f][c][e].v + D[a][c][f] * Tj[b][f][e].v +
                 D[a][e][f] * Tj[b][c][f].v;
          mx = std::max(mx, std::abs(v));
        }
  return mx;
}

}  // namespace ebcv
