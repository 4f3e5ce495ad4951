#pragma once

// Frame, metric, brackets, Levi-Civita connection and curvature of the EBCV
// family on R^7. Coordinates are ordered (r,s,t,w,x,y,z); frame index a (0-based
// internally, 1-based in the public API) matches coordinate a at the origin.
//
// Everything below the `detail` line is templated on the scalar so that the
// same code runs on doubles and on nested jets.

#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "ebcv/jet.hpp"
#include "ebcv/types.hpp"

namespace ebcv {

template <class S>
using Tab3 = std::array<std::array<std::array<S, 7>, 7>, 7>;

namespace detail {

template <class S>
S k_factor_t(const Vec7T<S>& q, const ModelParams& p) {
  return 1.0 + p.m * (q[3] * q[3] + q[4] * q[4] + q[5] * q[5] + q[6] * q[6]);
}

inline void check_domain(const Vec7& q, const ModelParams& p) {
  for (double c : q)
    if (!std::isfinite(c)) throw DomainViolation("non-finite coordinate");
  if (!std::isfinite(p.m) || !std::isfinite(p.l))
    throw DomainViolation("non-finite model parameter");
  const double k = k_factor_t(q, p);
  if (!(k > 0.0))
    throw DomainViolation("K = " + std::to_string(k) + " <= 0 at sample point");
}

template <class S>
void check_domain_t(const Vec7T<S>& q, const ModelParams& p) {
  Vec7 v;
  for (int i = 0; i < 7; ++i) v[i] = value_of(q[i]);
  check_domain(v, p);
}

/// F[mu][a] = X_a^mu.
template <class S>
Mat7T<S> frame_t(const Vec7T<S>& q, const ModelParams& p) {
  const S K = k_factor_t(q, p);
  const double h = 0.5 * p.l;
  const S& w = q[3];
  const S& x = q[4];
  const S& y = q[5];
  const S& z = q[6];
  Mat7T<S> F{};
  F[0][0] = S(1.0);
  F[1][1] = S(1.0);
  F[2][2] = S(1.0);
  F[0][3] = h * x;  F[1][3] = h * y;  F[2][3] = h * z;  F[3][3] = K;
  F[0][4] = -h * w; F[1][4] = -h * z; F[2][4] = h * y;  F[4][4] = K;
  F[0][5] = h * z;  F[1][5] = -h * w; F[2][5] = -h * x; F[5][5] = K;
  F[0][6] = -h * y; F[1][6] = h * x;  F[2][6] = -h * w; F[6][6] = K;
  return F;
}

/// Omega = F^{-1}; Omega[a][mu] is the mu-component of the coframe form w^a.
/// F is block upper triangular [[I, L], [0, K I]], so the inverse is explicit.
template <class S>
Mat7T<S> coframe_t(const Vec7T<S>& q, const ModelParams& p) {
  const Mat7T<S> F = frame_t(q, p);
  const S K = F[3][3];
  if (value_of(K) == 0.0) throw SingularFrame("frame matrix is singular (K = 0)");
  const S invK = 1.0 / K;
  Mat7T<S> O{};
  for (int i = 0; i < 3; ++i) {
    O[i][i] = S(1.0);
    for (int a = 3; a < 7; ++a) O[i][a] = -(F[i][a] * invK);
  }
  for (int a = 3; a < 7; ++a) O[a][a] = invK;
  return O;
}

/// g_{mu nu} = sum_a Omega[a][mu] Omega[a][nu].
template <class S>
Mat7T<S> metric_t(const Vec7T<S>& q, const ModelParams& p) {
  const Mat7T<S> O = coframe_t(q, p);
  Mat7T<S> G{};
  for (int mu = 0; mu < 7; ++mu)
    for (int nu = mu; nu < 7; ++nu) {
      S acc{};
      for (int a = 0; a < 7; ++a) acc += O[a][mu] * O[a][nu];
      G[mu][nu] = acc;
      G[nu][mu] = acc;
    }
  return G;
}

/// g^{mu nu} = sum_a F[mu][a] F[nu][a].
template <class S>
Mat7T<S> inverse_metric_t(const Vec7T<S>& q, const ModelParams& p) {
  const Mat7T<S> F = frame_t(q, p);
  Mat7T<S> Gi{};
  for (int mu = 0; mu < 7; ++mu)
    for (int nu = mu; nu < 7; ++nu) {
      S acc{};
      for (int a = 0; a < 7; ++a) acc += F[mu][a] * F[nu][a];
      Gi[mu][nu] = acc;
      Gi[nu][mu] = acc;
    }
  return Gi;
}

/// C[a][b][c] = <[X_a, X_b], X_c>, from exact first derivatives of F.
template <class S>
Tab3<S> bracket_table_t(const Vec7T<S>& q, const ModelParams& p) {
  using J = Jet<S, 7>;
  const auto qj = seed_gradient<7>(q);
  const Mat7T<J> Fj = frame_t(qj, p);
  const Mat7T<S> O = coframe_t(q, p);
  Tab3<S> C{};
  for (int a = 0; a < 7; ++a)
    for (int b = a + 1; b < 7; ++b) {
      Vec7T<S> v{};
      for (int mu = 0; mu < 7; ++mu) {
        S acc{};
        for (int nu = 0; nu < 7; ++nu)
          acc += Fj[nu][a].v * Fj[mu][b].d[nu] - Fj[nu][b].v * Fj[mu][a].d[nu];
        v[mu] = acc;
      }
      for (int c = 0; c < 7; ++c) {
        S acc{};
        for (int mu = 0; mu < 7; ++mu) acc += O[c][mu] * v[mu];
        C[a][b][c] = acc;
        C[b][a][c] = -acc;
      }
    }
  return C;
}

/// Gamma[a][b][c] = <nabla_{X_a} X_b, X_c> by the Koszul formula.
template <class S>
Tab3<S> connection_from_brackets(const Tab3<S>& C) {
  Tab3<S> G{};
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b)
      for (int c = 0; c < 7; ++c)
        G[a][b][c] = 0.5 * (C[a][b][c] - C[b][c][a] + C[c][a][b]);
  return G;
}

template <class S>
Tab3<S> connection_table_t(const Vec7T<S>& q, const ModelParams& p) {
  return connection_from_brackets(bracket_table_t(q, p));
}

/// Derivative of a scalar jet along frame vector a: X_a(f) = F^mu_a d_mu f.
template <class S>
S along(const Jet<S, 7>& f, const Mat7T<S>& F, int a) {
  S acc{};
  for (int mu = 0; mu < 7; ++mu) acc += F[mu][a] * f.d[mu];
  return acc;
}

/// Coordinate Christoffel symbols of both kinds plus their first derivatives,
/// computed from exact first and second derivatives of g.
template <class S>
struct ChristoffelData {
  Tab3<S> first{};    // Gamma_{rho, mu sigma}
  Tab3<S> second{};   // Gamma^kappa_{mu sigma}
  std::vector<S> d_first;  // d_lambda Gamma_{rho, mu sigma}, index ((l*7+rho)*7+mu)*7+sigma
};

template <class S>
ChristoffelData<S> christoffel_t(const Vec7T<S>& q, const ModelParams& p,
                                 bool with_derivative) {
  using J1 = Jet<S, 7>;
  using J2 = Jet<J1, 7>;
  ChristoffelData<S> out;
  Mat7T<S> Gi = inverse_metric_t(q, p);
  // dg[k][i][j] = d_k g_ij ; ddg[(k*7+l)][i][j] = d_k d_l g_ij
  std::vector<Mat7T<S>> dg(7);
  std::vector<Mat7T<S>> ddg;
  if (with_derivative) {
    const auto qs = seed_hessian<7>(q);
    const Mat7T<J2> G = metric_t(qs, p);
    ddg.resize(49);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j)
        for (int k = 0; k < 7; ++k) {
          dg[k][i][j] = G[i][j].d[k].v;
          for (int l = 0; l < 7; ++l) ddg[k * 7 + l][i][j] = G[i][j].d[k].d[l];
        }
  } else {
    const auto qs = seed_gradient<7>(q);
    const Mat7T<J1> G = metric_t(qs, p);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j)
        for (int k = 0; k < 7; ++k) dg[k][i][j] = G[i][j].d[k];
  }
  for (int r = 0; r < 7; ++r)
    for (int mu = 0; mu < 7; ++mu)
      for (int s = 0; s < 7; ++s)
        out.first[r][mu][s] = 0.5 * (dg[mu][r][s] + dg[s][r][mu] - dg[r][mu][s]);
  for (int k = 0; k < 7; ++k)
    for (int mu = 0; mu < 7; ++mu)
      for (int s = 0; s < 7; ++s) {
        S acc{};
        for (int r = 0; r < 7; ++r) acc += Gi[k][r] * out.first[r][mu][s];
        out.second[k][mu][s] = acc;
      }
  if (with_derivative) {
    out.d_first.resize(2401);
    for (int l = 0; l < 7; ++l)
      for (int r = 0; r < 7; ++r)
        for (int mu = 0; mu < 7; ++mu)
          for (int s = 0; s < 7; ++s)
            out.d_first[static_cast<std::size_t>(((l * 7 + r) * 7 + mu) * 7 + s)] =
                0.5 * (ddg[mu * 7 + l][r][s] + ddg[s * 7 + l][r][mu] -
                       ddg[r * 7 + l][mu][s]);
  }
  return out;
}

inline std::size_t idx4(int a, int b, int c, int d) {
  return static_cast<std::size_t>(((a * 7 + b) * 7 + c) * 7 + d);
}

/// Coordinate curvature R_{rho sigma mu nu} = <R(d_mu, d_nu) d_sigma, d_rho>,
/// stored at idx4(rho, sigma, mu, nu).
template <class S>
std::vector<S> riemann_coord_t(const Vec7T<S>& q, const ModelParams& p) {
  const ChristoffelData<S> ch = christoffel_t(q, p, true);
  std::vector<S> R(2401);
  auto dG = [&](int l, int r, int mu, int s) -> const S& {
    return ch.d_first[idx4(l, r, mu, s)];
  };
  for (int r = 0; r < 7; ++r)
    for (int s = 0; s < 7; ++s)
      for (int mu = 0; mu < 7; ++mu)
        for (int nu = mu + 1; nu < 7; ++nu) {
          S acc = dG(mu, r, nu, s) - dG(nu, r, mu, s);
          for (int k = 0; k < 7; ++k)
            acc += ch.first[k][nu][r] * ch.second[k][mu][s] -
                   ch.first[k][mu][r] * ch.second[k][nu][s];
          R[idx4(r, s, mu, nu)] = acc;
          R[idx4(r, s, nu, mu)] = -acc;
        }
  return R;
}

/// Frame curvature R[a][b][c][d] = <R(X_a, X_b) X_d, X_c>, by transforming the
/// coordinate tensor one slot at a time.
template <class S>
std::vector<S> riemann_frame_t(const Vec7T<S>& q, const ModelParams& p) {
  const std::vector<S> Rc = riemann_coord_t(q, p);
  const Mat7T<S> F = frame_t(q, p);
  // Rc index (rho, sigma, mu, nu) -> target (a=mu, b=nu, c=rho, d=sigma).
  std::vector<S> t1(2401), t2(2401);
  // contract mu -> a: t1(rho,sigma,a,nu)
  for (int r = 0; r < 7; ++r)
    for (int s = 0; s < 7; ++s)
      for (int a = 0; a < 7; ++a)
        for (int nu = 0; nu < 7; ++nu) {
          S acc{};
          for (int mu = 0; mu < 7; ++mu) acc += F[mu][a] * Rc[idx4(r, s, mu, nu)];
          t1[idx4(r, s, a, nu)] = acc;
        }
  // nu -> b: t2(rho,sigma,a,b)
  for (int r = 0; r < 7; ++r)
    for (int s = 0; s < 7; ++s)
      for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b) {
          S acc{};
          for (int nu = 0; nu < 7; ++nu) acc += F[nu][b] * t1[idx4(r, s, a, nu)];
          t2[idx4(r, s, a, b)] = acc;
        }
  // rho -> c: t1(c,sigma,a,b)
  for (int c = 0; c < 7; ++c)
    for (int s = 0; s < 7; ++s)
      for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b) {
          S acc{};
          for (int r = 0; r < 7; ++r) acc += F[r][c] * t2[idx4(r, s, a, b)];
          t1[idx4(c, s, a, b)] = acc;
        }
  // sigma -> d, reorder to (a,b,c,d)
  std::vector<S> out(2401);
  for (int c = 0; c < 7; ++c)
    for (int d = 0; d < 7; ++d)
      for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b) {
          S acc{};
          for (int s = 0; s < 7; ++s) acc += F[s][d] * t1[idx4(c, s, a, b)];
          out[idx4(a, b, c, d)] = acc;
        }
  return out;
}

/// Frame curvature through the connection table instead of the metric:
/// R(a,b,c,d) = X_a(G_bdc) - X_b(G_adc) + G_bde G_aec - G_ade G_bec - C_abe G_edc.
inline std::vector<double> riemann_frame_via_connection(const Vec7& q,
                                                        const ModelParams& p) {
  using J = Jet<double, 7>;
  const auto qj = seed_gradient<7>(q);
  const Tab3<J> Gj = connection_table_t(qj, p);
  const Tab3<double> C = bracket_table_t(q, p);
  const Mat7 F = frame_t(q, p);
  Tab3<double> G{};
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b)
      for (int c = 0; c < 7; ++c) G[a][b][c] = Gj[a][b][c].v;
  std::vector<double> R(2401);
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b)
      for (int c = 0; c < 7; ++c)
        for (int d = 0; d < 7; ++d) {
          double acc = along(Gj[b][d][c], F, a) - along(Gj[a][d][c], F, b);
          for (int e = 0; e < 7; ++e)
            acc += G[b][d][e] * G[a][e][c] - G[a][d][e] * G[b][e][c] -
                   C[a][b][e] * G[e][d][c];
          R[idx4(a, b, c, d)] = acc;
        }
  return R;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Public double-precision API. Frame indices are 1-based.

inline double k_factor(const CoordPoint& q, const ModelParams& p) {
  detail::check_domain(q.c, p);
  return detail::k_factor_t(q.c, p);
}

inline FrameMatrix frame_matrix(const CoordPoint& q, const ModelParams& p) {
  detail::check_domain(q.c, p);
  return FrameMatrix{detail::frame_t(q.c, p)};
}

/// Omega = F^{-1}.
inline Mat7 coframe_matrix(const CoordPoint& q, const ModelParams& p) {
  detail::check_domain(q.c, p);
  return detail::coframe_t(q.c, p);
}

inline Mat7 metric_matrix(const CoordPoint& q, const ModelParams& p) {
  detail::check_domain(q.c, p);
  return detail::metric_t(q.c, p);
}

inline Mat7 inverse_metric_matrix(const CoordPoint& q, const ModelParams& p) {
  detail::check_domain(q.c, p);
  return detail::inverse_metric_t(q.c, p);
}

/// All brackets C[a][b][c] = <[X_{a+1}, X_{b+1}], X_{c+1}> (0-based table).
inline Tab3<double> bracket_table(const CoordPoint& q, const ModelParams& p) {
  detail::check_domain(q.c, p);
  return detail::bracket_table_t(q.c, p);
}

/// Levi-Civita table Gamma[a][b][c] = <nabla_{X_{a+1}} X_{b+1}, X_{c+1}>.
inline Tab3<double> connection_table(const CoordPoint& q, const ModelParams& p) {
  detail::check_domain(q.c, p);
  return detail::connection_table_t(q.c, p);
}

inline FrameVector bracket_frame(int a, int b, const CoordPoint& q,
                                 const ModelParams& p) {
  check_frame_index(a);
  check_frame_index(b);
  const auto C = bracket_table(q, p);
  return FrameVector(C[a - 1][b - 1]);
}

inline FrameVector levi_civita_frame(int a, int b, const CoordPoint& q,
                                     const ModelParams& p) {
  check_frame_index(a);
  check_frame_index(b);
  const auto G = connection_table(q, p);
  return FrameVector(G[a - 1][b - 1]);
}

/// Gamma^kappa_{mu sigma} in coordinates, 0-based [kappa][mu][sigma].
inline Tab3<double> christoffel_coordinates(const CoordPoint& q,
                                            const ModelParams& p) {
  detail::check_domain(q.c, p);
  return detail::christoffel_t(q.c, p, false).second;
}

inline Curvature4 riemann_frame(const CoordPoint& q, const ModelParams& p) {
  detail::check_domain(q.c, p);
  const auto R = detail::riemann_frame_t(q.c, p);
  Curvature4 out;
  for (std::size_t i = 0; i < R.size(); ++i) out.v[i] = R[i];
  return out;
}

/// Same tensor by differentiating the frame connection; used as a cross-check.
inline Curvature4 riemann_frame_connection_route(const CoordPoint& q,
                                                 const ModelParams& p) {
  detail::check_domain(q.c, p);
  const auto R = detail::riemann_frame_via_connection(q.c, p);
  Curvature4 out;
  for (std::size_t i = 0; i < R.size(); ++i) out.v[i] = R[i];
  return out;
}

inline Mat7 ricci_from(const Curvature4& R) {
  Mat7 Ric{};
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b) {
      double acc = 0.0;
      for (int c = 0; c < 7; ++c) acc += R.at(c, a, c, b);
      Ric[a][b] = acc;
    }
  return Ric;
}

/// Ric[a][b] = sum_c R[c][a][c][b] (0-based storage).
inline Mat7 ricci_frame(const CoordPoint& q, const ModelParams& p) {
  return ricci_from(riemann_frame(q, p));
}

inline double scalar_curvature(const CoordPoint& q, const ModelParams& p) {
  const Mat7 Ric = ricci_frame(q, p);
  double s = 0.0;
  for (int a = 0; a < 7; ++a) s += Ric[a][a];
  return s;
}

// ---------------------------------------------------------------------------
// Three-dimensional BCV baseline.

enum class BCVClass { Euclidean3, Sphere3, S2xR, H2xR, SU2, SL2R, Nil3 };

enum class Case2Predicate { Printed, Squared };

struct BCVResult {
  BCVClass label;
  int case_number;  // 1..7 for (i)..(vii)
};

inline const char* to_string(BCVClass c) {
  switch (c) {
    case BCVClass::Euclidean3: return "Euclidean3";
    case BCVClass::Sphere3: return "Sphere3";
    case BCVClass::S2xR: return "S2xR";
    case BCVClass::H2xR: return "H2xR";
    case BCVClass::SU2: return "SU2";
    case BCVClass::SL2R: return "SL2R";
    case BCVClass::Nil3: return "Nil3";
  }
  return "?";
}

inline const char* roman(int n) {
  static const char* names[] = {"", "i", "ii", "iii", "iv", "v", "vi", "vii"};
  return (n >= 1 && n <= 7) ? names[n] : "?";
}

/// First match in the order (i)..(vii). Equalities are tested with an absolute
/// slack of TOL_EXACT.
inline BCVResult bcv_classify(double m, double l,
                              Case2Predicate pred = Case2Predicate::Printed) {
  auto zero = [](double v) { return std::abs(v) <= TOL_EXACT; };
  const double target = pred == Case2Predicate::Printed ? l / 4.0 : l * l / 4.0;
  if (zero(m) && zero(l)) return {BCVClass::Euclidean3, 1};
  if (zero(m - target)) return {BCVClass::Sphere3, 2};
  if (m > 0 && zero(l)) return {BCVClass::S2xR, 3};
  if (m < 0 && zero(l)) return {BCVClass::H2xR, 4};
  if (m > 0) return {BCVClass::SU2, 5};
  if (m < 0) return {BCVClass::SL2R, 6};
  return {BCVClass::Nil3, 7};
}

/// Columns E1, E2, E3 in the coordinate basis (x, y, z): m[row][col].
inline std::array<std::array<double, 3>, 3> bcv_frame(double x, double y,
                                                      const ModelParams& p) {
  const double f = 1.0 + p.m * (x * x + y * y);
  if (!(f > 0.0) || !std::isfinite(f))
    throw DomainViolation("1 + m(x^2+y^2) must be positive");
  std::array<std::array<double, 3>, 3> E{};
  E[0][0] = f;
  E[2][0] = -0.5 * p.l * y;
  E[1][1] = f;
  E[2][1] = 0.5 * p.l * x;
  E[2][2] = 1.0;
  return E;
}

}  // namespace ebcv
