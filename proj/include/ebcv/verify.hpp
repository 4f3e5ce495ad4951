#pragma once

// The verification suite: internal consistency of the oracle paths plus a
// table-driven comparison against the printed formulas.

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ebcv/geodesic.hpp"
#include "ebcv/homogeneous.hpp"
#include "ebcv/killing.hpp"
#include "ebcv/manifold.hpp"
#include "ebcv/paper_tables.hpp"
#include "ebcv/sampling.hpp"
#include "json.hpp"

namespace ebcv {

enum class CheckStatus { Pass, Fail, PaperDiscrepancy };
enum class CheckKind { Internal, Paper };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::PaperDiscrepancy: return "paper-discrepancy";
  }
  return "?";
}
inline const char* to_string(CheckKind k) { return k == CheckKind::Internal ? "internal" : "paper"; }

struct CheckRecord {
  std::string id;
  CheckKind kind = CheckKind::Internal;
  CheckStatus status = CheckStatus::Pass;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::optional<CoordPoint> witness;
  std::string paper_ref;  // the printed statement being checked
  std::string oracle;     // oracle value or expression, for paper checks
  std::string printed;    // printed value or expression, for paper checks
  std::string detail;
  int points = 0;
};

struct VerifySummary {
  ModelParams params;
  std::uint64_t seed = 0;
  int samples = 0;
  double tol_scale = 1.0;
  std::string tables;
  double elapsed_s = 0.0;
};

struct VerifyReport {
  VerifySummary summary;
  std::vector<CheckRecord> checks;

  int count(CheckStatus s) const {
    return static_cast<int>(std::count_if(checks.begin(), checks.end(),
                                          [s](const CheckRecord& c) { return c.status == s; }));
  }
  bool ok() const { return count(CheckStatus::Fail) == 0; }
  const CheckRecord* find(const std::string& id) const {
    for (const auto& c : checks)
      if (c.id == id) return &c;
    return nullptr;
  }
};

struct VerifyOptions {
  ModelParams params{0.0, 1.0};
  int samples = 100;
  std::uint64_t seed = 7;
  double tol_scale = 1.0;
};

/// Shortest round-trip decimal form.
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string fmt_point(const CoordPoint& q) {
  std::string s = "(";
  for (int i = 0; i < 7; ++i) s += std::string(i ? ", " : "") + kCoordNames[i] + "=" + fmt(q.c[i]);
  return s + ")";
}

namespace detail {

/// Running maximum with the point where it occurred.
struct Worst {
  double value = 0.0;
  std::optional<CoordPoint> at;
  std::string where;
  void take(double r, const CoordPoint& q, const std::string& label = {}) {
    if (!(r <= value)) {  // also catches NaN
      value = r;
      at = q;
      where = label;
    }
  }
};

inline double max_abs_diff(const Tab3<double>& a, const Tab3<double>& b) {
  double m = 0.0;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j)
      for (int k = 0; k < 7; ++k) m = std::max(m, std::abs(a[i][j][k] - b[i][j][k]));
  return m;
}

class Suite {
 public:
  Suite(const VerifyOptions& o, const PaperTables& t, const std::vector<CoordPoint>& pts)
      : opt(o), tab(t), points(pts), p(o.params), p0{0.0, o.params.l} {}

  VerifyReport run() {
    manifold_checks();
    table_checks();
    homogeneous_checks();
    killing_checks();
    geodesic_checks();
    bcv_checks();
    std::sort(rep.checks.begin(), rep.checks.end(),
              [](const CheckRecord& a, const CheckRecord& b) { return a.id < b.id; });
    return std::move(rep);
  }

 private:
  const VerifyOptions& opt;
  const PaperTables& tab;
  const std::vector<CoordPoint>& points;
  ModelParams p, p0;
  VerifyReport rep;

  double tol(double base) const { return base * opt.tol_scale; }

  std::vector<CoordPoint> first(std::size_t n) const {
    return {points.begin(), points.begin() + static_cast<std::ptrdiff_t>(std::min(n, points.size()))};
  }

  void internal(const std::string& id, const Worst& w, double tolerance, const std::string& ref,
                int npts, std::string detail = {}) {
    CheckRecord r;
    r.id = id;
    r.kind = CheckKind::Internal;
    r.max_residual = w.value;
    r.tolerance = tolerance;
    r.witness = w.at;
    r.paper_ref = ref;
    r.points = npts;
    r.status = w.value <= tolerance ? CheckStatus::Pass : CheckStatus::Fail;
    if (!w.where.empty()) detail += (detail.empty() ? "" : "; ") + ("worst at " + w.where);
    r.detail = std::move(detail);
    rep.checks.push_back(std::move(r));
  }

  void paper(const std::string& id, const Worst& w, double tolerance, const std::string& ref,
             int npts, std::string oracle, std::string printed, std::string detail = {}) {
    CheckRecord r;
    r.id = id;
    r.kind = CheckKind::Paper;
    r.max_residual = w.value;
    r.tolerance = tolerance;
    r.witness = w.at;
    r.paper_ref = ref;
    r.points = npts;
    r.status = w.value <= tolerance ? CheckStatus::Pass : CheckStatus::PaperDiscrepancy;
    r.oracle = std::move(oracle);
    r.printed = std::move(printed);
    if (!w.where.empty()) detail += (detail.empty() ? "" : "; ") + ("worst at " + w.where);
    r.detail = std::move(detail);
    rep.checks.push_back(std::move(r));
  }

  // -------------------------------------------------------------------------
  void manifold_checks() {
    const int n = static_cast<int>(points.size());
    Worst ortho, pd, anti, compat, tfree, sym, bianchi, routes, fd, ricsym;
    for (const auto& q : points) {
      const Mat7 F = frame_matrix(q, p).m;
      const Mat7 G = metric_matrix(q, p);
      double e = 0.0;
      Eigen::Matrix<double, 7, 7> Ge;
      for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b) {
          double v = 0.0;
          for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j) v += F[i][a] * G[i][j] * F[j][b];
          e = std::max(e, std::abs(v - (a == b ? 1.0 : 0.0)));
          Ge(a, b) = G[a][b];
        }
      ortho.take(e, q);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 7, 7>> es(Ge, Eigen::EigenvaluesOnly);
      pd.take(std::max(0.0, -es.eigenvalues().minCoeff()), q);

      const Tab3<double> C = bracket_table(q, p);
      const Tab3<double> L = connection_table(q, p);
      double ea = 0.0, ec = 0.0, et = 0.0;
      for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b)
          for (int c = 0; c < 7; ++c) {
            ea = std::max(ea, std::abs(C[a][b][c] + C[b][a][c]));
            ec = std::max(ec, std::abs(L[a][b][c] + L[a][c][b]));
            et = std::max(et, std::abs(L[a][b][c] - L[b][a][c] - C[a][b][c]));
          }
      anti.take(ea, q);
      compat.take(ec, q);
      tfree.take(et, q);

      const Curvature4 R = riemann_frame(q, p);
      const Curvature4 R2 = riemann_frame_connection_route(q, p);
      double es1 = 0.0, eb = 0.0, er = 0.0;
      for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b)
          for (int c = 0; c < 7; ++c)
            for (int d = 0; d < 7; ++d) {
              const double v = R.at(a, b, c, d);
              es1 = std::max({es1, std::abs(v + R.at(b, a, c, d)), std::abs(v + R.at(a, b, d, c)),
                              std::abs(v - R.at(c, d, a, b))});
              eb = std::max(eb, std::abs(v + R.at(b, c, a, d) + R.at(c, a, b, d)));
              er = std::max(er, std::abs(v - R2.at(a, b, c, d)));
            }
      sym.take(es1, q);
      bianchi.take(eb, q);
      routes.take(er, q);

      const Mat7 Ric = ricci_from(R);
      double rs = 0.0, rmax = 1.0;
      for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b) {
          rs = std::max(rs, std::abs(Ric[a][b] - Ric[b][a]));
          rmax = std::max(rmax, std::abs(Ric[a][b]));
        }
      ricsym.take(rs / rmax, q);
    }
    // Finite differences of the metric against the exact Christoffel symbols.
    for (const auto& q : first(10)) {
      const Tab3<double> Gam = christoffel_coordinates(q, p);
      const Mat7 Gi = inverse_metric_matrix(q, p);
      const double h = 1e-5;
      std::array<Mat7, 7> dg{};
      for (int k = 0; k < 7; ++k) {
        CoordPoint qp = q, qm = q;
        qp.c[k] += h;
        qm.c[k] -= h;
        const Mat7 Gp = metric_matrix(qp, p), Gm = metric_matrix(qm, p);
        for (int i = 0; i < 7; ++i)
          for (int j = 0; j < 7; ++j) dg[k][i][j] = (Gp[i][j] - Gm[i][j]) / (2 * h);
      }
      double e = 0.0, scale = 1.0;
      for (int k = 0; k < 7; ++k)
        for (int i = 0; i < 7; ++i)
          for (int j = 0; j < 7; ++j) {
            double v = 0.0;
            for (int r = 0; r < 7; ++r)
              v += Gi[k][r] * 0.5 * (dg[i][r][j] + dg[j][r][i] - dg[r][i][j]);
            e = std::max(e, std::abs(v - Gam[k][i][j]));
            scale = std::max(scale, std::abs(Gam[k][i][j]));
          }
      fd.take(e / (scale * scale * scale), q);
    }
    Worst origin;
    {
      const Mat7 F = frame_matrix(CoordPoint::origin(), p).m;
      double e = 0.0;
      for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b) e = std::max(e, std::abs(F[a][b] - (a == b ? 1.0 : 0.0)));
      origin.take(e, CoordPoint::origin());
    }
    internal("frame-orthonormality", ortho, tol(TOL_EXACT), "ds^2 = sum omega^a (x) omega^a", n,
             "max |F^T G F - I|");
    internal("frame-identity-at-origin", origin, 0.0, "X_1 = d_r, ..., X_4 = K d_w + ...", 1);
    internal("metric-positive-definite", pd, 0.0, "ds^2 = sum omega^a (x) omega^a", n,
             "max of -(smallest eigenvalue of G), clipped at 0");
    internal("bracket-antisymmetry", anti, 0.0, "[X_a, X_b] = -[X_b, X_a]", n);
    internal("connection-metric-compatibility", compat, tol(1e-10), "Levi-Civita connection", n);
    internal("connection-torsion-free", tfree, tol(1e-10), "Levi-Civita connection", n);
    internal("curvature-symmetries", sym, tol(TOL_DERIV), "curvature tensor", n);
    internal("curvature-first-bianchi", bianchi, tol(TOL_DERIV), "curvature tensor", n);
    internal("curvature-two-routes", routes, tol(TOL_DERIV), "curvature tensor", n,
             "coordinate route vs frame-connection route");
    internal("christoffel-vs-finite-difference", fd, tol(TOL_FD), "Levi-Civita connection",
             static_cast<int>(first(10).size()),
             "central differences, step 1e-5; error divided by max(1, |Gamma|)^3");
    internal("ricci-symmetric", ricsym, tol(TOL_EXACT), "Ricci tensor", n,
             "relative to max(1, |Ric|)");
  }

  // -------------------------------------------------------------------------
  // Printed-table comparisons.

  void compare_vectors(const std::string& id, const std::vector<PrintedVector>& rows,
                       const ModelParams& par, bool brackets, const std::string& ref) {
    Worst w;
    const PrintedVector* worst_row = nullptr;
    int worst_comp = 0;
    for (const auto& q : points) {
      const Tab3<double> O = brackets ? bracket_table(q, par) : connection_table(q, par);
      for (const auto& row : rows) {
        const FrameVector v = row.eval(q, par);
        for (int k = 1; k <= 7; ++k) {
          const double d = std::abs(v(k) - O[row.a - 1][row.b - 1][k - 1]);
          if (!(d <= w.value)) {
            worst_row = &row;
            worst_comp = k;
          }
          w.take(d, q, row.printed + ", X" + std::to_string(k) + "-coefficient");
        }
      }
    }
    std::string oracle, printed;
    if (worst_row && w.at) {
      const Tab3<double> O = brackets ? bracket_table(*w.at, par) : connection_table(*w.at, par);
      oracle = fmt(O[worst_row->a - 1][worst_row->b - 1][worst_comp - 1]);
      printed = worst_row->coeff_text(worst_comp) + " = " +
                fmt(worst_row->eval(*w.at, par)(worst_comp));
    }
    paper(id, w, tol(TOL_EXACT), ref, static_cast<int>(points.size()), oracle, printed);
  }

  void table_checks() {
    const int n = static_cast<int>(points.size());
    compare_vectors("m0-brackets", tab.brackets_m0, p0, true, "[X_4, X_5] = -l X_1, ... (m = 0)");
    compare_vectors("m0-connection", tab.connection_m0, p0, false,
                    "nabla_X1 X4 = (l/2) X5, ... (m = 0)");
    compare_vectors("appendix-connection", tab.connection_appendix, p, false,
                    "nabla_X1 X4 = (l/2){1+m(y^2+z^2)} X5 + ...");

    // One record per printed bracket, with the erratum quoted where recorded.
    for (const auto& row : tab.brackets_appendix) {
      Worst w;
      int comp = 0;
      for (const auto& q : points) {
        const Tab3<double> C = bracket_table(q, p);
        const FrameVector v = row.eval(q, p);
        for (int k = 1; k <= 7; ++k) {
          const double d = std::abs(v(k) - C[row.a - 1][row.b - 1][k - 1]);
          if (!(d <= w.value)) comp = k;
          w.take(d, q, "X" + std::to_string(k) + "-coefficient");
        }
      }
      std::string oracle, printed, detail;
      if (w.at && comp) {
        const double ov = bracket_table(*w.at, p)[row.a - 1][row.b - 1][comp - 1];
        oracle = fmt(ov);
        if (row.erratum_component == comp)
          oracle = row.erratum_oracle.text + " = " + fmt(row.erratum_oracle(*w.at, p)) +
                   " (direct differentiation: " + fmt(ov) + ")";
        printed = row.coeff_text(comp) + " = " + fmt(row.eval(*w.at, p)(comp));
      }
      if (row.erratum_component) detail = row.note;
      paper("appendix-bracket-" + std::to_string(row.a) + std::to_string(row.b), w, tol(TOL_EXACT),
            row.printed, n, oracle, printed, detail);
    }

    // Curvature.
    {
      Worst w0, wa;
      for (const auto& q : points) {
        const Curvature4 R0 = riemann_frame(q, p0);
        for (const auto& c : tab.curvature_m0)
          w0.take(std::abs(R0(c.index[0], c.index[1], c.index[2], c.index[3]) - c.value(q, p0)), q,
                  "R" + std::to_string(c.index[0]) + std::to_string(c.index[1]) +
                      std::to_string(c.index[2]) + std::to_string(c.index[3]));
        const Curvature4 R = riemann_frame(q, p);
        for (const auto& c : tab.curvature_appendix)
          wa.take(std::abs(R(c.index[0], c.index[1], c.index[2], c.index[3]) - c.value(q, p)), q,
                  "R" + std::to_string(c.index[0]) + std::to_string(c.index[1]) +
                      std::to_string(c.index[2]) + std::to_string(c.index[3]));
      }
      paper("m0-curvature", w0, tol(1e-9), "R_X1X4X1X4 = l^2/4, R_X6X7X6X7 = -3l^2/4", n, "", "");
      paper("appendix-curvature", wa, tol(TOL_DERIV),
            "R_X1X4X1X4 = (l^2/4){1+m(K+1)(y^2+z^2)}, ...", n, "", "");
    }

    // Ricci and scalar curvature.
    {
      Worst wd, wp, wc, wt;
      std::string sc_oracle, sc_printed;
      for (const auto& q : points) {
        const Mat7 R0 = ricci_frame(q, p0);
        for (int a = 0; a < 7; ++a)
          for (int b = 0; b < 7; ++b) {
            const double printed = a == b ? tab.ricci_m0_diagonal[a](q, p0) : 0.0;
            wd.take(std::abs(R0[a][b] - printed), q,
                    "Ric" + std::to_string(a + 1) + std::to_string(b + 1));
          }
        const Mat7 Ric = ricci_frame(q, p);
        double trace_printed = 0.0, S = 0.0;
        for (int a = 0; a < 7; ++a) {
          for (int b = 0; b < 7; ++b)
            wp.take(std::abs(Ric[a][b] - tab.ricci_proposition[a][b](q, p)), q,
                    "Ric" + std::to_string(a + 1) + std::to_string(b + 1));
          trace_printed += tab.ricci_proposition[a][a](q, p);
          S += Ric[a][a];
        }
        wt.take(std::abs(S - trace_printed), q);
        const double cor = tab.scalar_corollary(q, p);
        if (!(std::abs(S - cor) <= wc.value)) {
          sc_oracle = "S = " + fmt(S);
          sc_printed = tab.scalar_corollary.text + " = " + fmt(cor);
        }
        wc.take(std::abs(S - cor), q);
      }
      paper("ricci-m0", wd, tol(1e-9), "Ric_1 = diag(l^2, l^2, l^2, -3/2 l^2, ...)", n, "", "");
      paper("ricci-proposition", wp, tol(TOL_DERIV),
            "Ricci matrix with A = -l^2(K+1), B = 12m - 3/2 l^2", n, "", "");
      paper("scalar-vs-proposition-trace", wt, tol(TOL_DERIV), "trace of the printed Ricci matrix",
            n, "", "");
      if (wc.value <= tol(TOL_DERIV)) {
        sc_oracle.clear();
        sc_printed.clear();
      }
      paper("scalar-vs-corollary", wc, tol(TOL_DERIV), "constant scalar curvature S = 48 m", n,
            sc_oracle, sc_printed, "oracle trace equals 48m - (3/2) l^2 (K^2 + 1)");
    }
  }

  // -------------------------------------------------------------------------
  void homogeneous_checks() {
    const int n = static_cast<int>(points.size());
    Worst dmc, routes, anti, c12, horiz, vh, cyc;
    std::string cyc_oracle, cyc_printed, vh_oracle;
    for (const auto& q : points) {
      const Tab3<double> D = char_connection_table(q, p);
      double e = 0.0;
      for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b)
          for (int c = 0; c < 7; ++c) e = std::max(e, std::abs(D[a][b][c] + D[a][c][b]));
      dmc.take(e, q);
      const Torsion3 T = torsion_table(q, p);
      routes.take(max_abs_diff(T.T, torsion_table_via_P(q, p).T), q);
      anti.take(first_slots_antisymmetry(T), q);
      c12.take(c12_trace_of(T).max_abs(), q);
      for (const auto& row : tab.torsion_horizontal) {
        const FrameVector v = row.eval(q, p);
        for (int k = 1; k <= 7; ++k)
          horiz.take(std::abs(v(k) - T(row.a, row.b, k)), q, row.printed);
      }
      for (int i = 1; i <= 3; ++i)
        for (int a = 4; a <= 7; ++a)
          for (int k = 1; k <= 7; ++k) {
            const double v = std::abs(T(i, a, k));
            if (!(v <= vh.value))
              vh_oracle = "T^D(X" + std::to_string(i) + ", X" + std::to_string(a) + ") has X" +
                          std::to_string(k) + "-coefficient " + fmt(T(i, a, k));
            vh.take(v, q);
          }
      const double cs = cyclic_sum_of(T, 1, 4, 5);
      const double pr = tab.cyclic_sum_145(q, p);
      if (!(std::abs(cs - pr) <= cyc.value)) {
        cyc_oracle = fmt(cs) + " (= 2l{1+m(y^2+z^2)})";
        cyc_printed = tab.cyclic_sum_145.text + " = " + fmt(pr);
      }
      cyc.take(std::abs(cs - pr), q);
    }
    internal("char-connection-metric", dmc, tol(1e-10), "D = nabla + (P/2)(nabla P)", n);
    internal("torsion-two-routes", routes, tol(1e-10),
             "T^D(L,M) = D_L M - D_M L - [L,M] = (P/2)((nabla_L P)M - (nabla_M P)L)", n);
    paper("torsion-first-slots-antisymmetry", anti, 0.0, "T^D_XYZ + T^D_YXZ = 0", n, "", "");
    paper("torsion-c12", c12, tol(TOL_EXACT), "c12(T) = sum T_Xr Xr = 0", n, "", "");
    paper("torsion-horizontal", horiz, tol(TOL_EXACT), "T^D(X_4, X_5) = l{(1+m(y^2+z^2)) X_1 ...}",
          n, "", "");
    if (vh.value <= tol(TOL_EXACT)) vh_oracle.clear();
    paper("torsion-vertical-horizontal", vh, tol(TOL_EXACT), tab.torsion_vertical_horizontal, n,
          vh_oracle, vh.value <= tol(TOL_EXACT) ? "" : tab.torsion_vertical_horizontal,
          "both torsion routes give T^D(X_i, X_a) = nabla_{X_a} X_i");
    if (cyc.value <= tol(TOL_EXACT)) cyc_oracle = cyc_printed = "";
    paper("cyclic-sum-145", cyc, tol(TOL_EXACT), "T^D_X1X4X5 + T^D_X5X1X4 + T^D_X4X5X1", n,
          cyc_oracle, cyc_printed);

    // Classification.
    {
      CheckRecord r;
      r.id = "structure-class";
      r.kind = CheckKind::Paper;
      r.paper_ref = "T^D lies in T3";
      r.points = n;
      try {
        const StructureVerdict v = classify_structure(p, points);
        const bool expect_trivial = std::abs(p.l) <= TOL_EXACT;
        const bool ok = v.label == (expect_trivial ? StructureClass::Trivial : StructureClass::T3);
        r.status = ok ? CheckStatus::Pass : CheckStatus::PaperDiscrepancy;
        r.detail = std::string("label ") + to_string(v.label);
        if (v.label == StructureClass::T3)
          r.detail += ", witness (" + std::to_string(v.witness[0]) + "," +
                      std::to_string(v.witness[1]) + "," + std::to_string(v.witness[2]) +
                      ") = " + fmt(v.witness_value);
        if (!ok) {
          r.oracle = to_string(v.label);
          r.printed = "T3";
        }
        r.max_residual = v.max_antisymmetry;
      } catch (const InconclusiveClassification& e) {
        r.status = CheckStatus::PaperDiscrepancy;
        r.oracle = "inconclusive";
        r.printed = "T3";
        r.detail = e.what();
      }
      rep.checks.push_back(std::move(r));
    }

    // Ambrose-Singer and parallelism claims on a subset.
    const auto sub = first(10);
    const int ns = static_cast<int>(sub.size());
    Worst as_i, as_ii, as_iii, dpar, lc;
    for (const auto& q : sub) {
      const AmbroseSingerReport a = ambrose_singer_check(q, p);
      as_i.take(a.res_i, q);
      as_ii.take(a.res_ii, q);
      as_iii.take(a.res_iii, q);
      dpar.take(d_parallel_torsion(q, p), q);
      const AmbroseSingerReport b = ambrose_singer_residuals(q, p0, LeviCivitaStructure{});
      lc.take(std::max({b.res_ii, b.res_iii}), q);
    }
    const std::string as_ref = "T^D defines a homogeneous structure (Ambrose-Singer equations)";
    paper("ambrose-singer-i", as_i, tol(TOL_EXACT), as_ref, ns, as_i.value > 0 ? fmt(as_i.value) : "",
          as_i.value > 0 ? "0" : "", "residual of T_X g = 0");
    paper("ambrose-singer-ii", as_ii, tol(1e-7), as_ref, ns,
          as_ii.value > tol(1e-7) ? fmt(as_ii.value) : "", as_ii.value > tol(1e-7) ? "0" : "",
          "residual of nabla~ R = 0");
    paper("ambrose-singer-iii", as_iii, tol(1e-7), as_ref, ns,
          as_iii.value > tol(1e-7) ? fmt(as_iii.value) : "", as_iii.value > tol(1e-7) ? "0" : "",
          "residual of nabla~ T = 0");
    paper("d-parallel-torsion", dpar, tol(1e-7),
          "D makes parallel both the curvature and the torsion tensors", ns,
          dpar.value > tol(1e-7) ? fmt(dpar.value) : "", dpar.value > tol(1e-7) ? "0" : "",
          "max |(D_a T^D)(X_b, X_c)|");
    internal("ambrose-singer-checker", lc, tol(1e-7), "Ambrose-Singer equations", ns,
             "T_X Y = nabla_X Y at m = 0 must satisfy (ii) and (iii)");
  }

  // -------------------------------------------------------------------------
  void killing_checks() {
    const int n = static_cast<int>(points.size());
    const auto basis = killing_basis_m0(p.l);
    Worst wb;
    for (const auto& q : points)
      for (std::size_t i = 0; i < basis.size(); ++i)
        wb.take(max_abs(killing_residual(basis[i], q, p0)), q,
                std::string("parameter ") + KillingParamsM0::names[i]);
    paper("killing-basis-m0", wb, tol(1e-9), "13-parameter solution of the Killing system at m = 0",
          n, "", "");

    {
      const RankResult rr = basis_rank(basis, standard_sample());
      CheckRecord r;
      r.id = "killing-basis-rank";
      r.kind = CheckKind::Paper;
      r.paper_ref = "the Lie algebra of Killing vector fields is 13-dimensional";
      r.points = 10;
      r.status = rr.rank == 13 ? CheckStatus::Pass : CheckStatus::PaperDiscrepancy;
      r.detail = "rank " + std::to_string(rr.rank) + " of 13 (bound 28)";
      if (rr.rank != 13) {
        r.oracle = std::to_string(rr.rank);
        r.printed = "13";
      }
      rep.checks.push_back(std::move(r));
    }

    {
      Worst wc;
      const auto sub = first(3);
      for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j) {
          const auto br = lie_bracket(basis[i], basis[j], p0);
          for (const auto& q : sub)
            wc.take(max_abs(killing_residual(br, q, p0)), q,
                    std::string("[") + KillingParamsM0::names[i] + ", " + KillingParamsM0::names[j] +
                        "]");
        }
      internal("killing-lie-closure", wc, tol(TOL_DERIV), "Killing fields form a Lie algebra",
               static_cast<int>(sub.size()));
    }

    // Equation system against the frame form, on Killing and non-Killing fields.
    {
      Sampler rng(opt.seed ^ 0x6b696c6cULL);
      Worst weq;
      int mismatches = 0;
      const auto sub = first(5);
      for (int f = 0; f < 50; ++f) {
        PolyVectorField X;
        if (f % 2) {
          X = rng.field();
        } else if (p.m == 0.0) {
          for (std::size_t i = 0; i < basis.size(); ++i) {
            const double c = rng.uniform(-1.0, 1.0);
            for (int a = 0; a < 7; ++a) X.f[a] += c * basis[i].f[a];
          }
        } else {
          for (int a = 0; a < 3; ++a) X.f[a] = Poly2::constant(rng.uniform(-1.0, 1.0));
        }
        for (const auto& q : sub) {
          const auto pr = pde_residuals(X, q, p);
          double mp = 0.0;
          for (double v : pr) mp = std::max(mp, std::abs(v));
          const double mk = max_abs(killing_residual(X, q, p));
          const bool agree = (mp < tol(TOL_EXACT)) == (mk < tol(1e-10));
          if (!agree) ++mismatches;
          weq.take(agree ? 0.0 : std::max(mp, mk), q);
        }
      }
      internal("killing-pde-equivalence", weq, 0.0, "Killing equation as 28 component equations",
               static_cast<int>(sub.size()),
               std::to_string(mismatches) + " disagreements over 50 fields");

      const auto printed = compile_system(tab.killing_pde_printed);
      const auto printed0 = compile_system(tab.killing_pde_m0_printed);
      Worst wpr, w0;
      std::vector<int> bad;
      Sampler rng2(opt.seed ^ 0x706465ULL);
      for (int f = 0; f < 10; ++f) {
        const PolyVectorField X = rng2.field();
        for (const auto& q : sub) {
          const auto ref = evaluate_system(pde_system(), X, q, p);
          const auto got = evaluate_system(printed, X, q, p);
          for (std::size_t k = 0; k < 28; ++k) {
            const double d = std::abs(ref[k] - got[k]);
            if (d > tol(TOL_EXACT) &&
                std::find(bad.begin(), bad.end(), static_cast<int>(k) + 1) == bad.end())
              bad.push_back(static_cast<int>(k) + 1);
            wpr.take(d, q, "equation " + std::to_string(k + 1));
          }
          const auto ref0 = evaluate_system(pde_system(), X, q, p0);
          const auto got0 = evaluate_system(printed0, X, q, p0);
          for (std::size_t k = 0; k < 28; ++k)
            w0.take(std::abs(ref0[k] - got0[k]), q, "equation " + std::to_string(k + 1));
        }
      }
      std::sort(bad.begin(), bad.end());
      std::string oracle, prn, detail;
      for (int k : bad) {
        oracle += (oracle.empty() ? "" : " | ") + std::to_string(k) + ": " +
                  pde_sources()[static_cast<std::size_t>(k - 1)];
        prn += (prn.empty() ? "" : " | ") + std::to_string(k) + ": " +
               tab.killing_pde_printed[static_cast<std::size_t>(k - 1)];
        auto it = tab.killing_pde_errata.find(k);
        if (it != tab.killing_pde_errata.end())
          detail += (detail.empty() ? "" : "; ") + std::to_string(k) + ": " + it->second;
      }
      paper("killing-pde-printed", wpr, tol(TOL_EXACT), "the 28 equations for general m",
            static_cast<int>(sub.size()), oracle, prn, detail);
      paper("killing-pde-m0-printed", w0, tol(TOL_EXACT), "the 28 equations at m = 0",
            static_cast<int>(sub.size()), "", "", "printed m = 0 list vs substitution m = 0");
    }

    {
      CheckRecord r;
      r.id = "killing-horizontal-rejected";
      r.kind = CheckKind::Paper;
      r.paper_ref = "the horizontal basic vector fields X_4, ..., X_7 are not Killing vector fields";
      r.points = n;
      if (std::abs(p.l) <= TOL_EXACT) {
        r.status = CheckStatus::Pass;
        r.detail = "not applicable for l = 0";
      } else {
        double weakest = 1e300;
        int which = 0;
        for (int a = 4; a <= 7; ++a) {
          double mx = 0.0;
          for (const auto& q : points)
            mx = std::max(mx, max_abs(killing_residual(PolyVectorField::frame_field(a), q, p)));
          if (mx < weakest) {
            weakest = mx;
            which = a;
          }
        }
        r.max_residual = weakest;
        r.tolerance = 0.1;
        r.status = weakest > 0.1 ? CheckStatus::Pass : CheckStatus::PaperDiscrepancy;
        r.detail = "smallest max residual " + fmt(weakest) + " for X" + std::to_string(which);
        if (r.status != CheckStatus::Pass) {
          r.oracle = "X" + std::to_string(which) + " residual " + fmt(weakest);
          r.printed = "not Killing";
        }
      }
      rep.checks.push_back(std::move(r));
    }
  }

  // -------------------------------------------------------------------------
  void geodesic_checks() {
    const ModelParams hq{0.0, 1.0};
    Sampler rng(opt.seed ^ 0x67656fULL);
    std::vector<CotangentState> hs, gs;
    for (int i = 0; i < 20; ++i) hs.push_back(rng.state(hq));
    for (int i = 0; i < 3; ++i) gs.push_back(rng.state(p));

    // Lemma and Poisson relations.
    Worst wl, wsd, wpo, wprose;
    std::string sd_oracle, sd_printed;
    for (const auto& s : hs) {
      const auto g = hamilton_rhs(s, hq, GeodesicMode::Heisenberg);
      const Vec7 Pd = momentum_rates(s, hq, GeodesicMode::Heisenberg);
      const LemmaRates L = lemma_rhs(s);
      for (int i = 0; i < 7; ++i) {
        if (i != 1) wl.take(std::abs(g[i] - L.qdot[i]), s.q, std::string(kCoordNames[i]) + "-dot");
        wl.take(std::abs(Pd[i] - L.Pdot[i]), s.q, "P" + std::to_string(i + 1) + "-dot");
      }
      const double d = std::abs(g[1] - L.qdot[1]);
      if (!(d <= wsd.value)) {
        sd_oracle = tab.lemma_sdot_generic + " = " + fmt(g[1]);
        sd_printed = tab.lemma_sdot_printed + " = " + fmt(L.qdot[1]);
      }
      wsd.take(d, s.q);
      for (const auto& pp : poisson_check(s, hq)) wpo.take(pp.residual, s.q);
    }
    internal("lemma-agreement", wl, tol(1e-13), "Hamilton's equations, lemma system",
             static_cast<int>(hs.size()), "all lines but s-dot");
    paper("lemma-sdot", wsd, tol(1e-13), "s-dot = 1/2 (y P_W - z P_X + x P_Y - w P_Z)",
          static_cast<int>(hs.size()), sd_oracle, sd_printed, "oracle from dH/dp_s");
    internal("poisson-antihomomorphism", wpo, tol(TOL_EXACT), "{P_A, P_B} = -P_[A,B]",
             static_cast<int>(hs.size()));
    {
      // Prose bracket [Y, Z] against the table [X6, X7] = -l X1.
      const Tab3<double> C = bracket_table(CoordPoint::origin(), hq);
      Worst w;
      w.take(std::abs(C[5][6][2] - (-1.0)), CoordPoint::origin());
      paper("bracket-yz-prose", w, tol(TOL_EXACT), "[Y, Z] = -d_t", 1,
            "[X6, X7] = " + fmt(C[5][6][0]) + " d_r", "-d_t");
    }

    // Conservation laws.
    auto energy = [&](GeodesicMode mode, const ModelParams& par, const std::vector<CotangentState>& st,
                      const std::string& id, const std::string& ref) {
      Worst w, wv, wh;
      std::string detail;
      int exits = 0;
      // Curvature scales like |m| + l^2 and coordinate speeds like K^2.
      const double kmax = 1.0 + std::max(par.m, 0.0) * 4.0 * kBoxHalfWidth * kBoxHalfWidth;
      const double h = 1e-3 / std::max({1.0, std::abs(par.m), par.l * par.l, kmax * kmax});
      for (const auto& s : st) {
        const Trajectory tr = integrate(s, par, mode, h, 10000);
        if (tr.status != TrajectoryStatus::Ok) {
          ++exits;
          continue;
        }
        w.take(tr.max_energy_drift() / std::max(1.0, tr.samples.front().H), s.q);
        if (mode == GeodesicMode::Heisenberg || par.m == 0.0) {
          double mv = 0.0;
          for (const auto& smp : tr.samples)
            for (int i = 0; i < 3; ++i) mv = std::max(mv, std::abs(smp.state.p[i] - s.p[i]));
          wv.take(mv, s.q);
        }
        if (mode != GeodesicMode::Riemannian)
          for (std::size_t k = 0; k < tr.samples.size(); k += 100)
            for (double v : vertical_velocity(tr.samples[k].state, par, mode))
              wh.take(std::abs(v), tr.samples[k].state.q);
      }
      if (exits) detail = std::to_string(exits) + " trajectories left the chart and were skipped; ";
      internal(id, w, tol(1e-10), ref, static_cast<int>(st.size()) - exits,
               detail + "drift relative to max(1, H(0)), h = " + fmt(h) + ", 10^4 steps");
      return std::pair{wv, wh};
    };
    const std::vector<CotangentState> hs3(hs.begin(), hs.begin() + 3);
    auto [hv, hh] = energy(GeodesicMode::Heisenberg, hq, hs3, "geodesic-energy-heisenberg",
                           "H = 1/2 (P_W^2 + P_X^2 + P_Y^2 + P_Z^2)");
    internal("geodesic-vertical-momentum", hv, tol(1e-13), "P_r, P_s, P_t constant",
             static_cast<int>(hs3.size()));
    internal("geodesic-horizontality-heisenberg", hh, tol(1e-10), "normal geodesics are horizontal",
             static_cast<int>(hs3.size()));
    auto [sv, sh] = energy(GeodesicMode::SubRiemannian, p, gs, "geodesic-energy-subriemannian",
                           "H = 1/2 sum_{a=4..7} P_a^2 (extension to general (m, l))");
    internal("geodesic-horizontality-subriemannian", sh, tol(1e-10),
             "H = 1/2 sum_{a=4..7} P_a^2 (extension to general (m, l))", static_cast<int>(gs.size()));
    energy(GeodesicMode::Riemannian, p, gs, "geodesic-energy-riemannian", "H = 1/2 sum_a P_a^2");

    // Closed form.
    {
      Worst order, ratio_w;
      std::string ratios;
      const double U = 4.0;
      for (std::size_t k = 0; k < 3; ++k) {
        const auto& s = hs[k];
        const ClosedFormInit c = closed_form_init(s);
        const CoordPoint exact = closed_form_geodesic(c, U, 20000);
        double prev = 0.0;
        for (double h : {1e-2, 5e-3, 2.5e-3}) {
          const Trajectory tr =
              integrate(s, hq, GeodesicMode::Heisenberg, h, static_cast<int>(std::lround(U / h)));
          double err = 0.0;
          for (int i = 0; i < 7; ++i)
            err = std::max(err, std::abs(tr.samples.back().state.q.c[i] - exact.c[i]));
          if (prev > 0.0) {
            const double r = prev / err;
            ratios += (ratios.empty() ? "" : ", ") + fmt(std::round(r * 100) / 100);
            ratio_w.take(r < 12.0 ? 12.0 - r : (r > 20.0 ? r - 20.0 : 0.0), s.q);
          }
          prev = err;
        }
      }
      internal("geodesic-rk4-order", ratio_w, 0.0, "closed-form geodesic", 3,
               "error ratios per halving of h: " + ratios + " (accepted range [12, 20])");

      Worst wp, wv, wvp;
      std::string cf_oracle, cf_printed;
      for (std::size_t k = 0; k < 5; ++k) {
        const auto& s = hs[k];
        const ClosedFormInit c = closed_form_init(s);
        if (c.lambda().norm() < kDegenerateLambda) continue;
        const Trajectory tr = integrate(s, hq, GeodesicMode::Heisenberg, 1e-3, 1000);
        const auto& end = tr.samples.back().state.q;
        const Quaternion a = closed_form_omega(c, 1.0), b = closed_form_omega_printed(c, 1.0);
        const double da = std::max({std::abs(a.w - end.w()), std::abs(a.x - end.x()),
                                    std::abs(a.y - end.y()), std::abs(a.z - end.z())});
        const double db = std::max({std::abs(b.w - end.w()), std::abs(b.x - end.x()),
                                    std::abs(b.y - end.y()), std::abs(b.z - end.z())});
        wv.take(da, s.q);
        if (!(db <= wp.value)) {
          cf_oracle = "omega(1) w-component " + fmt(a.w) + " (RK4: " + fmt(end.w()) + ")";
          cf_printed = tab.closed_form_printed + ", w-component " + fmt(b.w);
        }
        wp.take(db, s.q);
        // Vertical rates: generic dH/dp against both quaternion orderings.
        const auto g = hamilton_rhs(s, hq, GeodesicMode::Heisenberg);
        const Quaternion om = c.omega0, P = c.P0;
        const Quaternion used = 0.5 * (om * P.conj()), prn = 0.5 * (om.conj() * P);
        wvp.take(std::max({std::abs(prn.x - g[0]), std::abs(prn.y - g[1]), std::abs(prn.z - g[2])}) -
                     std::max({std::abs(used.x - g[0]), std::abs(used.y - g[1]),
                               std::abs(used.z - g[2])}),
                 s.q);
      }
      internal("closed-form-vs-rk4", wv, tol(1e-9), "closed-form geodesic", 5,
               "omega(1) against RK4 with h = 1e-3");
      paper("closed-form-printed", wp, tol(1e-9), tab.closed_form_printed, 5, cf_oracle, cf_printed,
            "implemented form omega0 + Lambda^{-1}(1 - exp(-Lambda u)) P0");
      paper("closed-form-vertical-integrand", wvp, tol(1e-9), tab.closed_form_vertical, 5,
            wvp.value > tol(1e-9) ? "(1/2) Im(omega conj(d omega))" : "",
            wvp.value > tol(1e-9) ? "(1/2) Im(conj(omega) d omega)" : "",
            "compared with the generic r-, s-, t-rates at u = 0");
    }

    // Circle lifts.
    {
      Worst wc;
      std::string detail;
      for (std::size_t k = 0; k < 3; ++k) {
        const ClosedFormInit c = closed_form_init(hs[k]);
        const double L = c.lambda().norm();
        if (L < 1e-3) continue;
        const double period = 2.0 * M_PI / L;
        std::vector<double> u;
        std::vector<Quaternion> om;
        for (int i = 0; i <= 2000; ++i) {
          u.push_back(period * i / 2000.0);
          om.push_back(closed_form_omega(c, u.back()));
        }
        const CircleVerdict v = circle_check(u, om);
        const double expect = c.P0.norm() / L;
        const double rel = v.kind == CurveKind::Circle ? std::abs(v.radius - expect) / expect : 1.0;
        wc.take(rel, hs[k].q);
        detail += std::string(to_string(v.kind)) + " r=" + fmt(v.radius) + " vs " + fmt(expect) + "; ";
      }
      ClosedFormInit line;
      line.P0 = {1.0, 0.0, 0.0, 0.0};
      std::vector<double> u;
      std::vector<Quaternion> om;
      for (int i = 0; i <= 100; ++i) {
        u.push_back(0.01 * i);
        om.push_back(closed_form_omega(line, u.back()));
      }
      const CircleVerdict lv = circle_check(u, om);
      Worst wl2;
      wl2.take(lv.kind == CurveKind::Line ? 0.0 : 1.0, CoordPoint::origin());
      paper("circle-lift", wc, tol(1e-4), "projections are circles of radius |P(0)|/|Lambda|", 3,
            "", "", detail);
      paper("circle-lift-degenerate", wl2, 0.0, "line segments as a degenerate case", 1, "", "",
            std::string("Lambda = 0 verdict: ") + to_string(lv.kind));
    }
  }

  // -------------------------------------------------------------------------
  void bcv_checks() {
    Worst w;
    std::string detail;
    const std::array<std::pair<double, double>, 7> reps = {
        {{0, 0}, {0.25, 1}, {1, 0}, {-1, 0}, {1, 1}, {-1, 1}, {0, 2}}};
    for (std::size_t i = 0; i < reps.size(); ++i) {
      const BCVResult r = bcv_classify(reps[i].first, reps[i].second);
      const auto& expect = tab.bcv_cases[i];
      const bool ok = r.case_number == expect.number && expect.label == to_string(r.label);
      w.take(ok ? 0.0 : 1.0, CoordPoint::origin(), "(m,l) = (" + fmt(reps[i].first) + "," +
                                                       fmt(reps[i].second) + ")");
      detail += "(" + fmt(reps[i].first) + "," + fmt(reps[i].second) + ")->" + roman(r.case_number) +
                " ";
    }
    internal("bcv-classification", w, 0.0, "classification of BCV spaces (i)-(vii)", 7, detail);
    const auto E = bcv_frame(0.0, 1.0, ModelParams{1.0, 2.0});
    Worst wf;
    wf.take(std::max({std::abs(E[0][0] - 2.0), std::abs(E[1][0]), std::abs(E[2][0] + 1.0)}),
            CoordPoint::origin());
    paper("bcv-frame", wf, tol(TOL_EXACT), "E_1 = (1+m(x^2+y^2)) d_x - (l/2) y d_z", 1, "", "",
          "E1 at (x,y) = (0,1), (m,l) = (1,2)");
  }
};

}  // namespace detail

/// Runs the full suite. Throws DomainViolation when no sample point exists.
inline VerifyReport run_verify(const VerifyOptions& opt, const PaperTables& tables) {
  if (opt.samples < 1) throw TooFewSamples("verify needs at least one sample point");
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<CoordPoint> pts = sample_points(opt.params, opt.samples, opt.seed);
  detail::Suite suite(opt, tables, pts);
  VerifyReport rep = suite.run();
  rep.summary.params = opt.params;
  rep.summary.seed = opt.seed;
  rep.summary.samples = opt.samples;
  rep.summary.tol_scale = opt.tol_scale;
  rep.summary.tables = tables.source;
  rep.summary.elapsed_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline nlohmann::ordered_json to_json(const CheckRecord& c) {
  nlohmann::ordered_json j;
  j["id"] = c.id;
  j["kind"] = to_string(c.kind);
  j["status"] = to_string(c.status);
  j["max_residual"] = c.max_residual;
  j["tolerance"] = c.tolerance;
  if (c.witness) j["witness"] = c.witness->c;
  else j["witness"] = nullptr;
  j["points"] = c.points;
  j["paper_ref"] = c.paper_ref;
  if (c.status == CheckStatus::PaperDiscrepancy || !c.oracle.empty()) {
    j["oracle"] = c.oracle;
    j["printed"] = c.printed;
  }
  j["detail"] = c.detail;
  return j;
}

inline nlohmann::ordered_json to_json(const VerifyReport& r, bool with_elapsed = true) {
  nlohmann::ordered_json s;
  s["m"] = r.summary.params.m;
  s["l"] = r.summary.params.l;
  s["seed"] = r.summary.seed;
  s["samples"] = r.summary.samples;
  s["box"] = "uniform [-0.5, 0.5]^7, reject K <= 0.1";
  s["tol_scale"] = r.summary.tol_scale;
  s["tables"] = r.summary.tables;
  s["pass"] = r.count(CheckStatus::Pass);
  s["fail"] = r.count(CheckStatus::Fail);
  s["paper_discrepancy"] = r.count(CheckStatus::PaperDiscrepancy);
  if (with_elapsed) s["elapsed_s"] = r.summary.elapsed_s;
  nlohmann::ordered_json j;
  j["summary"] = s;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) j["checks"].push_back(to_json(c));
  return j;
}

inline std::string to_text(const VerifyReport& r) {
  std::ostringstream os;
  os << "verify m=" << fmt(r.summary.params.m) << " l=" << fmt(r.summary.params.l)
     << " seed=" << r.summary.seed << " samples=" << r.summary.samples
     << " box=[-0.5,0.5]^7 K>0.1\n";
  for (const auto& c : r.checks) {
    os << "[" << to_string(c.status) << "] " << c.id << "  max=" << fmt(c.max_residual)
       << " tol=" << fmt(c.tolerance);
    if (!c.detail.empty()) os << "  " << c.detail;
    os << "\n";
    if (c.status == CheckStatus::PaperDiscrepancy) {
      os << "    printed: " << (c.printed.empty() ? c.paper_ref : c.printed) << "\n";
      os << "    oracle:  " << c.oracle << "\n";
      if (c.witness) os << "    at " << fmt_point(*c.witness) << "\n";
    }
  }
  os << r.count(CheckStatus::Pass) << " pass, " << r.count(CheckStatus::Fail) << " fail, "
     << r.count(CheckStatus::PaperDiscrepancy) << " paper-discrepancy, elapsed "
     << fmt(std::round(r.summary.elapsed_s * 1000) / 1000) << " s\n";
  return os.str();
}

}  // namespace ebcv
