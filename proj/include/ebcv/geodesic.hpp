#pragma once

// Normal (sub-)Riemannian geodesics: momentum functions, Hamilton's equations,
// fixed-step RK4, the closed-form quaternionic solution and the circle test.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ebcv/jet.hpp"
#include "ebcv/manifold.hpp"
#include "ebcv/quaternion.hpp"
#include "ebcv/types.hpp"

namespace ebcv {

enum class GeodesicMode { Heisenberg, SubRiemannian, Riemannian };

inline const char* to_string(GeodesicMode m) {
  switch (m) {
    case GeodesicMode::Heisenberg: return "heisenberg";
    case GeodesicMode::SubRiemannian: return "subriemannian";
    case GeodesicMode::Riemannian: return "riemannian";
  }
  return "?";
}

inline GeodesicMode parse_mode(const std::string& s) {
  if (s == "heisenberg") return GeodesicMode::Heisenberg;
  if (s == "subriemannian") return GeodesicMode::SubRiemannian;
  if (s == "riemannian") return GeodesicMode::Riemannian;
  throw std::invalid_argument("unknown geodesic mode '" + s + "'");
}

/// Canonical coordinates; p is ordered (p_r, p_s, p_t, p_w, p_x, p_y, p_z).
struct CotangentState {
  CoordPoint q;
  Vec7 p{};
};

inline void check_mode(GeodesicMode mode, const ModelParams& par) {
  if (mode == GeodesicMode::Heisenberg && (par.m != 0.0 || par.l != 1.0))
    throw ModeMismatch("heisenberg mode requires m = 0 and l = 1");
}

inline int first_active(GeodesicMode mode) { return mode == GeodesicMode::Riemannian ? 0 : 3; }

/// P_a = p(X_a(q)) for a = 1..7 (0-based storage).
inline Vec7 momenta(const CotangentState& s, const ModelParams& par) {
  detail::check_domain(s.q.c, par);
  const Mat7 F = detail::frame_t(s.q.c, par);
  Vec7 P{};
  for (int a = 0; a < 7; ++a) {
    double acc = 0.0;
    for (int mu = 0; mu < 7; ++mu) acc += F[mu][a] * s.p[mu];
    P[a] = acc;
  }
  return P;
}

inline double hamiltonian(const CotangentState& s, const ModelParams& par, GeodesicMode mode) {
  check_mode(mode, par);
  const Vec7 P = momenta(s, par);
  double h = 0.0;
  for (int a = first_active(mode); a < 7; ++a) h += P[a] * P[a];
  return 0.5 * h;
}

/// (dq/du, dp/du): dq = dH/dp, dp = -dH/dq, with dH/dq from a jet over q.
inline std::array<double, 14> hamilton_rhs(const CotangentState& s, const ModelParams& par,
                                           GeodesicMode mode) {
  using J = Jet<double, 7>;
  check_mode(mode, par);
  detail::check_domain(s.q.c, par);
  const auto qj = seed_gradient<7>(s.q.c);
  const Mat7T<J> F = detail::frame_t(qj, par);
  J H{};
  std::array<double, 14> out{};
  for (int a = first_active(mode); a < 7; ++a) {
    J Pa{};
    for (int mu = 0; mu < 7; ++mu) Pa += F[mu][a] * s.p[mu];
    H += 0.5 * (Pa * Pa);
    for (int mu = 0; mu < 7; ++mu) out[mu] += Pa.v * F[mu][a].v;
  }
  for (int nu = 0; nu < 7; ++nu) out[7 + nu] = -H.d[nu];
  return out;
}

/// Rates of the frame momenta along the generic flow, d/du P_a for a = 1..7.
inline Vec7 momentum_rates(const CotangentState& s, const ModelParams& par, GeodesicMode mode) {
  using J = Jet<double, 7>;
  const auto rhs = hamilton_rhs(s, par, mode);
  const auto qj = seed_gradient<7>(s.q.c);
  const Mat7T<J> F = detail::frame_t(qj, par);
  Vec7 out{};
  for (int a = 0; a < 7; ++a) {
    double acc = 0.0;
    for (int mu = 0; mu < 7; ++mu) {
      double dF = 0.0;
      for (int nu = 0; nu < 7; ++nu) dF += F[mu][a].d[nu] * rhs[nu];
      acc += dF * s.p[mu] + F[mu][a].v * rhs[7 + mu];
    }
    out[a] = acc;
  }
  return out;
}

/// The printed 14-equation system at (m,l) = (0,1), transcribed literally.
/// qdot in coordinate order (r,s,t,w,x,y,z); Pdot in frame order
/// (P_r, P_s, P_t, P_W, P_X, P_Y, P_Z).
struct LemmaRates {
  Vec7 qdot{};
  Vec7 Pdot{};
};

inline LemmaRates lemma_rhs(const CotangentState& s) {
  const ModelParams par{0.0, 1.0};
  const Vec7 P = momenta(s, par);
  const double PW = P[3], PX = P[4], PY = P[5], PZ = P[6];
  const double pr = s.p[0], ps = s.p[1], pt = s.p[2];
  const double w = s.q.w(), x = s.q.x(), y = s.q.y(), z = s.q.z();
  LemmaRates L;
  L.qdot[3] = PW;
  L.qdot[4] = PX;
  L.qdot[5] = PY;
  L.qdot[6] = PZ;
  L.qdot[0] = 0.5 * (x * PW - w * PX + z * PY - y * PZ);
  L.qdot[1] = 0.5 * (y * PW - z * PX + x * PY - w * PZ);
  L.qdot[2] = 0.5 * (z * PW + y * PX - x * PY - w * PZ);
  L.Pdot[3] = pr * PX + ps * PY + pt * PZ;
  L.Pdot[4] = -pr * PW - ps * PZ + pt * PY;
  L.Pdot[5] = pr * PZ - ps * PW - pt * PX;
  L.Pdot[6] = -pr * PY + ps * PX - pt * PW;
  return L;
}

// ---------------------------------------------------------------------------
// Integration.

enum class TrajectoryStatus { Ok, DomainExit, StepRejected };

inline const char* to_string(TrajectoryStatus s) {
  switch (s) {
    case TrajectoryStatus::Ok: return "ok";
    case TrajectoryStatus::DomainExit: return "domain_exit";
    case TrajectoryStatus::StepRejected: return "step_rejected";
  }
  return "?";
}

struct TrajectorySample {
  double u = 0.0;
  CotangentState state;
  double H = 0.0;
};

struct Trajectory {
  GeodesicMode mode = GeodesicMode::Heisenberg;
  ModelParams params;
  double h = 0.0;
  std::vector<TrajectorySample> samples;
  TrajectoryStatus status = TrajectoryStatus::Ok;
  std::size_t failed_step = 0;  // 1-based step index when status != Ok
  std::string diagnostic;

  double max_energy_drift() const {
    double mx = 0.0;
    for (const auto& s : samples) mx = std::max(mx, std::abs(s.H - samples.front().H));
    return mx;
  }
};

inline CotangentState advance(const CotangentState& s, const std::array<double, 14>& k, double f) {
  CotangentState out = s;
  for (int i = 0; i < 7; ++i) {
    out.q.c[i] += f * k[i];
    out.p[i] += f * k[7 + i];
  }
  return out;
}

inline bool state_finite(const CotangentState& s) {
  for (int i = 0; i < 7; ++i)
    if (!std::isfinite(s.q.c[i]) || !std::isfinite(s.p[i])) return false;
  return true;
}

/// Classical fixed-step RK4 with n steps of size h.
inline Trajectory integrate(const CotangentState& s0, const ModelParams& par, GeodesicMode mode,
                            double h, int n) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("step size must be positive");
  if (n < 1) throw std::invalid_argument("step count must be at least 1");
  check_mode(mode, par);
  if (!state_finite(s0)) throw DomainViolation("initial state is not finite");
  detail::check_domain(s0.q.c, par);

  Trajectory tr;
  tr.mode = mode;
  tr.params = par;
  tr.h = h;
  tr.samples.reserve(static_cast<std::size_t>(n) + 1);
  tr.samples.push_back({0.0, s0, hamiltonian(s0, par, mode)});

  CotangentState s = s0;
  for (int i = 0; i < n; ++i) {
    CotangentState next;
    try {
      const auto k1 = hamilton_rhs(s, par, mode);
      const auto k2 = hamilton_rhs(advance(s, k1, 0.5 * h), par, mode);
      const auto k3 = hamilton_rhs(advance(s, k2, 0.5 * h), par, mode);
      const auto k4 = hamilton_rhs(advance(s, k3, h), par, mode);
      next = s;
      for (int j = 0; j < 14; ++j) {
        const double inc = h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        if (j < 7) next.q.c[j] += inc;
        else next.p[j - 7] += inc;
      }
    } catch (const DomainViolation& e) {
      tr.status = TrajectoryStatus::DomainExit;
      tr.failed_step = static_cast<std::size_t>(i) + 1;
      tr.diagnostic = std::string("left the chart K > 0 during step ") +
                      std::to_string(i + 1) + ": " + e.what();
      return tr;
    }
    if (!state_finite(next)) {
      tr.status = TrajectoryStatus::StepRejected;
      tr.failed_step = static_cast<std::size_t>(i) + 1;
      tr.diagnostic = "non-finite state at step " + std::to_string(i + 1);
      return tr;
    }
    if (!(detail::k_factor_t(next.q.c, par) > 0.0)) {
      tr.status = TrajectoryStatus::DomainExit;
      tr.failed_step = static_cast<std::size_t>(i) + 1;
      tr.diagnostic = "K <= 0 after step " + std::to_string(i + 1);
      return tr;
    }
    s = next;
    tr.samples.push_back({static_cast<double>(i + 1) * h, s, hamiltonian(s, par, mode)});
  }
  return tr;
}

/// omega^1..omega^3 of the velocity; zero for horizontal motion.
inline std::array<double, 3> vertical_velocity(const CotangentState& s, const ModelParams& par,
                                               GeodesicMode mode) {
  const auto rhs = hamilton_rhs(s, par, mode);
  const Mat7 O = detail::coframe_t(s.q.c, par);
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i)
    for (int mu = 0; mu < 7; ++mu) out[i] += O[i][mu] * rhs[mu];
  return out;
}

// ---------------------------------------------------------------------------
// Closed form at (m,l) = (0,1).

struct ClosedFormInit {
  Quaternion omega0;  // w + ix + jy + kz at u = 0
  Quaternion P0;      // P_W + iP_X + jP_Y + kP_Z at u = 0
  double pr = 0.0, ps = 0.0, pt = 0.0;
  double r0 = 0.0, s0 = 0.0, t0 = 0.0;

  Quaternion lambda() const { return Quaternion::imaginary(pr, ps, pt); }
};

inline ClosedFormInit closed_form_init(const CotangentState& s) {
  const Vec7 P = momenta(s, ModelParams{0.0, 1.0});
  ClosedFormInit c;
  c.omega0 = {s.q.w(), s.q.x(), s.q.y(), s.q.z()};
  c.P0 = {P[3], P[4], P[5], P[6]};
  c.pr = s.p[0];
  c.ps = s.p[1];
  c.pt = s.p[2];
  c.r0 = s.q.r();
  c.s0 = s.q.s();
  c.t0 = s.q.t();
  return c;
}

inline constexpr double kDegenerateLambda = 1e-12;

/// d omega / du = P(u) = exp(-Lambda u) P(0).
inline Quaternion closed_form_velocity(const ClosedFormInit& c, double u) {
  return qexp(-u * c.lambda()) * c.P0;
}

/// omega(u) = omega(0) + Lambda^{-1} (1 - exp(-Lambda u)) P(0).
inline Quaternion closed_form_omega(const ClosedFormInit& c, double u) {
  const Quaternion L = c.lambda();
  if (L.norm() < kDegenerateLambda) return c.omega0 + u * c.P0;
  const Quaternion one{1.0, 0.0, 0.0, 0.0};
  return c.omega0 + L.inverse() * (one - qexp(-u * L)) * c.P0;
}

/// The printed form (P(0)/Lambda)(exp(-Lambda u) - 1) + omega(0), with the
/// quotient taken as right multiplication by Lambda^{-1}.
inline Quaternion closed_form_omega_printed(const ClosedFormInit& c, double u) {
  const Quaternion L = c.lambda();
  if (L.norm() < kDegenerateLambda) return c.omega0 + u * c.P0;
  const Quaternion one{1.0, 0.0, 0.0, 0.0};
  return c.P0 * L.inverse() * (qexp(-u * L) - one) + c.omega0;
}

/// Point at parameter u; r, s, t by composite Simpson on
/// (1/2) Im(omega conj(d omega / du)) with an even panel count.
inline CoordPoint closed_form_geodesic(const ClosedFormInit& c, double u, int panels = 10000) {
  if (panels < 2) panels = 2;
  if (panels % 2) ++panels;
  const Quaternion om = closed_form_omega(c, u);
  double I[3] = {0.0, 0.0, 0.0};
  if (u != 0.0) {
    const double dh = u / panels;
    for (int k = 0; k <= panels; ++k) {
      const double tau = k * dh;
      const Quaternion v = closed_form_omega(c, tau) * closed_form_velocity(c, tau).conj();
      const double wgt = (k == 0 || k == panels) ? 1.0 : (k % 2 ? 4.0 : 2.0);
      I[0] += wgt * v.x;
      I[1] += wgt * v.y;
      I[2] += wgt * v.z;
    }
    for (double& v : I) v *= dh / 3.0 * 0.5;
  }
  return CoordPoint(c.r0 + I[0], c.s0 + I[1], c.t0 + I[2], om.w, om.x, om.y, om.z);
}

// ---------------------------------------------------------------------------
// Poisson brackets of the horizontal momentum functions.

struct PoissonPair {
  int a = 0, b = 0;        // 1-based frame indices
  double value = 0.0;      // {P_a, P_b} by the coordinate formula
  double expected = 0.0;   // -P_{[X_a, X_b]}
  double residual = 0.0;
};

inline std::array<PoissonPair, 6> poisson_check(const CotangentState& s,
                                                const ModelParams& par = {0.0, 1.0}) {
  using J = Jet<double, 7>;
  detail::check_domain(s.q.c, par);
  const auto qj = seed_gradient<7>(s.q.c);
  const Mat7T<J> F = detail::frame_t(qj, par);
  const Tab3<double> C = detail::bracket_table_t(s.q.c, par);
  const Vec7 P = momenta(s, par);
  std::array<J, 7> Pj{};
  for (int a = 0; a < 7; ++a)
    for (int mu = 0; mu < 7; ++mu) Pj[a] += F[mu][a] * s.p[mu];
  std::array<PoissonPair, 6> out{};
  int k = 0;
  for (int a = 3; a < 7; ++a)
    for (int b = a + 1; b < 7; ++b) {
      double v = 0.0;
      for (int i = 0; i < 7; ++i) v += Pj[a].d[i] * F[i][b].v - Pj[b].d[i] * F[i][a].v;
      double e = 0.0;
      for (int c = 0; c < 7; ++c) e -= C[a][b][c] * P[c];
      out[k++] = {a + 1, b + 1, v, e, std::abs(v - e)};
    }
  return out;
}

// ---------------------------------------------------------------------------
// Circle test on the (w,x,y,z) projection.

enum class CurveKind { Circle, Line, Neither };

inline const char* to_string(CurveKind k) {
  switch (k) {
    case CurveKind::Circle: return "circle";
    case CurveKind::Line: return "line";
    case CurveKind::Neither: return "neither";
  }
  return "?";
}

struct CircleVerdict {
  CurveKind kind = CurveKind::Neither;
  double radius = 0.0;
  Quaternion center;
  Quaternion lambda;
  double speed_variation = 0.0;
  double bend = 0.0;
  double residual = 0.0;
};

inline constexpr double kCircleTol = 1e-4;

/// Samples must be uniformly spaced in u. Fits d2w = -Lambda dw for an
/// imaginary Lambda by least squares over central differences.
inline CircleVerdict circle_check(const std::vector<double>& u,
                                  const std::vector<Quaternion>& omega) {
  const std::size_t n = omega.size();
  if (n < 8 || u.size() != n) throw TooFewSamples("circle_check needs at least 8 samples");
  const double h = (u.back() - u.front()) / static_cast<double>(n - 1);
  if (!(h > 0.0)) throw std::invalid_argument("circle_check needs increasing u");
  for (std::size_t k = 1; k < n; ++k)
    if (std::abs((u[k] - u[k - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw std::invalid_argument("circle_check needs uniformly spaced samples");

  std::vector<Quaternion> d1, d2, mid;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    d1.push_back((0.5 / h) * (omega[k + 1] - omega[k - 1]));
    d2.push_back((1.0 / (h * h)) * (omega[k + 1] - 2.0 * omega[k] + omega[k - 1]));
    mid.push_back(omega[k]);
  }
  const double L = u.back() - u.front();
  CircleVerdict v;
  double smin = 1e300, smax = 0.0, ssum = 0.0, s2 = 0.0, a2 = 0.0;
  for (std::size_t k = 0; k < d1.size(); ++k) {
    const double sp = d1[k].norm();
    smin = std::min(smin, sp);
    smax = std::max(smax, sp);
    ssum += sp;
    s2 += d1[k].norm2();
    a2 += d2[k].norm2();
  }
  const double m = static_cast<double>(d1.size());
  const double mean_speed = ssum / m;
  if (!(mean_speed > 0.0)) return v;
  v.speed_variation = (smax - smin) / mean_speed;
  if (v.speed_variation >= kCircleTol) return v;
  v.bend = std::sqrt(a2 / m) * L / std::sqrt(s2 / m);
  if (v.bend < kCircleTol) {
    v.kind = CurveKind::Line;
    return v;
  }
  const Quaternion units[3] = {{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  auto dotq = [](const Quaternion& p, const Quaternion& q) {
    return p.w * q.w + p.x * q.x + p.y * q.y + p.z * q.z;
  };
  for (std::size_t k = 0; k < d1.size(); ++k) {
    Quaternion cols[3];
    for (int i = 0; i < 3; ++i) cols[i] = units[i] * d1[k];
    for (int i = 0; i < 3; ++i) {
      b(i) -= dotq(cols[i], d2[k]);
      for (int j = 0; j < 3; ++j) A(i, j) += dotq(cols[i], cols[j]);
    }
  }
  const Eigen::Vector3d sol = A.ldlt().solve(b);
  v.lambda = Quaternion::imaginary(sol(0), sol(1), sol(2));
  double res2 = 0.0;
  for (std::size_t k = 0; k < d1.size(); ++k) res2 += (d2[k] + v.lambda * d1[k]).norm2();
  v.residual = std::sqrt(res2 / a2);
  if (v.residual >= kCircleTol || v.lambda.norm() == 0.0) return v;
  v.kind = CurveKind::Circle;
  v.radius = mean_speed / v.lambda.norm();
  Quaternion c{};
  for (std::size_t k = 0; k < d1.size(); ++k)
    c = c + (mid[k] + (v.radius / d2[k].norm()) * d2[k]);
  v.center = (1.0 / m) * c;
  return v;
}

inline CircleVerdict circle_check(const Trajectory& tr) {
  std::vector<double> u;
  std::vector<Quaternion> om;
  for (const auto& s : tr.samples) {
    u.push_back(s.u);
    om.push_back({s.state.q.w(), s.state.q.x(), s.state.q.y(), s.state.q.z()});
  }
  return circle_check(u, om);
}

}  // namespace ebcv
