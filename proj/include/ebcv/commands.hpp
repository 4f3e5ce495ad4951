#pragma once

// Subcommands behind the ebcv executable. Each writes to the given streams and
// returns the process exit code.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ebcv/geodesic.hpp"
#include "ebcv/io.hpp"
#include "ebcv/killing.hpp"
#include "ebcv/manifold.hpp"
#include "ebcv/paper_tables.hpp"
#include "ebcv/sampling.hpp"
#include "ebcv/verify.hpp"
#include "json.hpp"

namespace ebcv {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitDomain = 2,
  kExitDomainExit = 3,
  kExitMalformedInput = 4,
  kExitUsage = 64,
  kExitIo = 74,
};

namespace detail {

/// Writes to `path`, or to `fallback` when the path is empty.
inline bool emit(const std::string& path, const std::string& text, std::ostream& fallback,
                 std::ostream& err) {
  if (path.empty()) {
    fallback << text;
    return true;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot write " << path << "\n";
    return false;
  }
  f << text;
  return static_cast<bool>(f);
}

inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------

struct VerifyArgs {
  VerifyOptions options;
  std::string format = "text";
  std::string out;
  std::string tables = kDefaultTablesPath;
  bool elapsed = true;  // json only; off gives byte-identical reports
};

inline int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  PaperTables tables;
  try {
    tables = load_tables(a.tables);
  } catch (const TableError& e) {
    err << "error: " << e.what() << "\n";
    return kExitMalformedInput;
  }
  VerifyReport rep;
  try {
    rep = run_verify(a.options, tables);
  } catch (const DomainViolation& e) {
    err << "error: domain violation: " << e.what() << "\n";
    return kExitDomain;
  } catch (const TooFewSamples& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  const std::string text =
      a.format == "json" ? to_json(rep, a.elapsed).dump(2) + "\n" : to_text(rep);
  if (!detail::emit(a.out, text, out, err)) return kExitIo;
  if (!a.out.empty())
    out << rep.count(CheckStatus::Pass) << " pass, " << rep.count(CheckStatus::Fail) << " fail, "
        << rep.count(CheckStatus::PaperDiscrepancy) << " paper-discrepancy\n";
  return rep.ok() ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------

struct GeodesicArgs {
  std::string mode = "heisenberg";
  ModelParams params{0.0, 1.0};
  std::vector<double> init;  // r s t w x y z pr ps pt pw px py pz
  bool random_init = false;
  std::uint64_t seed = 7;
  double h = 1e-3;
  int n = 1000;
  std::string out;
  std::string format = "csv";
};

inline std::string describe(const CircleVerdict& v) {
  if (v.kind == CurveKind::Circle) return "circle, radius " + detail::fixed6(v.radius);
  return to_string(v.kind);
}

inline int cmd_geodesic(const GeodesicArgs& a, std::ostream& out, std::ostream& err) {
  GeodesicMode mode;
  try {
    mode = parse_mode(a.mode);
    check_mode(mode, a.params);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  CotangentState s0;
  if (a.random_init) {
    try {
      s0 = Sampler(a.seed).state(a.params);
    } catch (const DomainViolation& e) {
      err << "error: domain violation: " << e.what() << "\n";
      return kExitDomain;
    }
  } else {
    if (a.init.size() != 14) {
      err << "error: --init needs 14 values (r s t w x y z pr ps pt pw px py pz)\n";
      return kExitUsage;
    }
    for (int i = 0; i < 7; ++i) {
      s0.q.c[i] = a.init[static_cast<std::size_t>(i)];
      s0.p[i] = a.init[static_cast<std::size_t>(7 + i)];
    }
  }

  Trajectory tr;
  try {
    tr = integrate(s0, a.params, mode, a.h, a.n);
  } catch (const DomainViolation& e) {
    err << "error: domain violation: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  if (!a.out.empty()) {
    std::ostringstream os;
    if (a.format == "json") os << trajectory_json(tr).dump(2) << "\n";
    else write_trajectory_csv(os, tr);
    if (!detail::emit(a.out, os.str(), out, err)) return kExitIo;
  }

  out << "mode " << to_string(mode) << ", m=" << fmt(a.params.m) << ", l=" << fmt(a.params.l)
      << ", h=" << fmt(a.h) << ", steps " << tr.samples.size() - 1 << "\n";
  out << "H drift " << std::scientific << std::setprecision(3) << tr.max_energy_drift()
      << std::defaultfloat << "\n";
  if (tr.samples.size() >= 8) {
    try {
      out << "verdict " << describe(circle_check(tr)) << "\n";
    } catch (const std::exception& e) {
      out << "verdict unavailable: " << e.what() << "\n";
    }
  }
  if (mode == GeodesicMode::Heisenberg && tr.status == TrajectoryStatus::Ok) {
    const auto& end = tr.samples.back();
    const CoordPoint cf = closed_form_geodesic(closed_form_init(s0), end.u, 20000);
    double dev = 0.0;
    for (int i = 0; i < 7; ++i) dev = std::max(dev, std::abs(cf.c[i] - end.state.q.c[i]));
    out << "closed-form endpoint deviation " << std::scientific << std::setprecision(3) << dev
        << std::defaultfloat << "\n";
  }
  if (tr.status != TrajectoryStatus::Ok) {
    err << "error: " << to_string(tr.status) << " at step " << tr.failed_step << ": "
        << tr.diagnostic << "\n";
    return tr.status == TrajectoryStatus::DomainExit ? kExitDomainExit : kExitCheckFailed;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

inline constexpr double kKillingThreshold = 1e-8;

struct KillingArgs {
  std::string action = "list";
  ModelParams params{0.0, 1.0};
  std::string input;
  std::string out;
};

/// Standard sample plus the origin.
inline std::vector<CoordPoint> killing_check_points() {
  auto pts = standard_sample();
  pts.insert(pts.begin(), CoordPoint::origin());
  return pts;
}

inline nlohmann::ordered_json killing_check_json(const PolyVectorField& X, const ModelParams& p) {
  double worst = 0.0;
  CoordPoint at = CoordPoint::origin();
  int wa = 1, wb = 1;
  for (const auto& q : killing_check_points()) {
    const Mat7 r = killing_residual(X, q, p);
    for (int a = 0; a < 7; ++a)
      for (int b = a; b < 7; ++b)
        if (std::abs(r[a][b]) > worst) {
          worst = std::abs(r[a][b]);
          at = q;
          wa = a + 1;
          wb = b + 1;
        }
  }
  nlohmann::ordered_json j;
  j["m"] = p.m;
  j["l"] = p.l;
  j["points"] = killing_check_points().size();
  j["threshold"] = kKillingThreshold;
  j["max_residual"] = worst;
  j["entry"] = {wa, wb};
  j["witness"] = at.c;
  j["verdict"] = worst < kKillingThreshold ? "killing" : "not-killing";
  return j;
}

inline int cmd_killing(const KillingArgs& a, std::ostream& out, std::ostream& err) {
  nlohmann::ordered_json j;
  if (a.action == "list") {
    j = killing_basis_json(a.params.l);
  } else if (a.action == "check") {
    if (a.input.empty()) {
      err << "error: check needs --input FILE\n";
      return kExitUsage;
    }
    PolyVectorField X;
    try {
      X = read_field_file(a.input);
    } catch (const MalformedInput& e) {
      err << "error: malformed input: " << e.what() << "\n";
      return kExitMalformedInput;
    }
    try {
      j = killing_check_json(X, a.params);
    } catch (const DomainViolation& e) {
      err << "error: domain violation: " << e.what() << "\n";
      return kExitDomain;
    }
  } else {
    err << "error: unknown action '" << a.action << "' (list or check)\n";
    return kExitUsage;
  }
  return detail::emit(a.out, j.dump(2) + "\n", out, err) ? kExitOk : kExitIo;
}

// ---------------------------------------------------------------------------

struct ClassifyArgs {
  double m = 0.0, l = 0.0;
  std::string case2 = "printed";
  std::string format = "text";
};

inline int cmd_classify(const ClassifyArgs& a, std::ostream& out, std::ostream& err) {
  Case2Predicate pred;
  if (a.case2 == "printed") pred = Case2Predicate::Printed;
  else if (a.case2 == "squared") pred = Case2Predicate::Squared;
  else {
    err << "error: --case2 must be printed or squared\n";
    return kExitUsage;
  }
  const BCVResult r = bcv_classify(a.m, a.l, pred);
  if (a.format == "json") {
    nlohmann::ordered_json j;
    j["m"] = a.m;
    j["l"] = a.l;
    j["case2"] = a.case2;
    j["label"] = to_string(r.label);
    j["case"] = roman(r.case_number);
    out << j.dump(2) << "\n";
  } else {
    out << to_string(r.label) << " (" << roman(r.case_number) << ")\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CurvatureArgs {
  ModelParams params{0.0, 1.0};
  std::vector<double> point;  // empty means the origin
  std::string out;
};

inline nlohmann::ordered_json curvature_json(const CoordPoint& q, const ModelParams& p) {
  nlohmann::ordered_json j;
  j["m"] = p.m;
  j["l"] = p.l;
  j["point"] = q.c;
  j["K"] = detail::k_factor_t(q.c, p);
  j["frame"] = frame_matrix(q, p).m;
  j["metric"] = metric_matrix(q, p);
  auto br = nlohmann::ordered_json::array();
  auto cn = nlohmann::ordered_json::array();
  const auto C = bracket_table(q, p);
  const auto L = connection_table(q, p);
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b) {
      std::vector<double> cv(C[a][b].begin(), C[a][b].end());
      std::vector<double> lv(L[a][b].begin(), L[a][b].end());
      if (a < b) br.push_back({{"a", a + 1}, {"b", b + 1}, {"coeffs", cv}});
      cn.push_back({{"a", a + 1}, {"b", b + 1}, {"coeffs", lv}});
    }
  j["brackets"] = std::move(br);
  j["connection"] = std::move(cn);
  const Curvature4 R = riemann_frame(q, p);
  auto rj = nlohmann::ordered_json::array();
  for (int a = 0; a < 7; ++a)
    for (int b = a + 1; b < 7; ++b)
      for (int c = 0; c < 7; ++c)
        for (int d = c + 1; d < 7; ++d) {
          if (a * 7 + b > c * 7 + d) continue;
          const double v = R.at(a, b, c, d);
          if (std::abs(v) > 1e-14) rj.push_back({{"index", {a + 1, b + 1, c + 1, d + 1}}, {"value", v}});
        }
  j["riemann"] = std::move(rj);
  const Mat7 Ric = ricci_from(R);
  j["ricci"] = Ric;
  double S = 0.0;
  for (int a = 0; a < 7; ++a) S += Ric[a][a];
  j["scalar"] = S;
  return j;
}

inline int cmd_curvature(const CurvatureArgs& a, std::ostream& out, std::ostream& err) {
  CoordPoint q = CoordPoint::origin();
  if (!a.point.empty()) {
    if (a.point.size() != 7) {
      err << "error: --point needs 7 values (r s t w x y z)\n";
      return kExitUsage;
    }
    for (int i = 0; i < 7; ++i) q.c[i] = a.point[static_cast<std::size_t>(i)];
  }
  nlohmann::ordered_json j;
  try {
    j = curvature_json(q, a.params);
  } catch (const DomainViolation& e) {
    err << "error: domain violation: " << e.what() << "\n";
    return kExitDomain;
  }
  return detail::emit(a.out, j.dump(2) + "\n", out, err) ? kExitOk : kExitIo;
}

}  // namespace ebcv
