#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ebcv/manifold.hpp"
#include "ebcv/sampling.hpp"
#include "oracle.hpp"

using namespace ebcv;

namespace {

const std::vector<ModelParams> kParams = {{0, 1}, {1, 1}, {-0.5, 2}, {0, 0}, {0.3, -1.2}};

oracle::V7 v7(const CoordPoint& q) { return q.c; }

/// <R(X_a,X_b)X_d, X_c> from finite differences of the oracle Christoffel symbols.
std::vector<double> riemann_fd(const CoordPoint& q, const ModelParams& p) {
  const double h = 1e-3;
  const auto G0 = oracle::christoffel(v7(q), p.m, p.l);
  std::array<oracle::T7, 7> dG{};
  for (int n = 0; n < 7; ++n) {
    auto qp = v7(q), qm = v7(q);
    qp[n] += h;
    qm[n] -= h;
    const auto A = oracle::christoffel(qp, p.m, p.l), B = oracle::christoffel(qm, p.m, p.l);
    for (int k = 0; k < 7; ++k)
      for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) dG[n][k][i][j] = (A[k][i][j] - B[k][i][j]) / (2 * h);
  }
  const auto g = oracle::metric(v7(q), p.m, p.l);
  const auto F = oracle::frame(v7(q), p.m, p.l);
  // Rl[rho][sg][mu][nu] = <R(d_mu, d_nu) d_sg, d_rho>
  std::vector<double> Rl(2401, 0.0), tmp(2401, 0.0);
  auto at = [](int a, int b, int c, int d) { return ((a * 7 + b) * 7 + c) * 7 + d; };
  for (int k = 0; k < 7; ++k)
    for (int sg = 0; sg < 7; ++sg)
      for (int mu = 0; mu < 7; ++mu)
        for (int nu = 0; nu < 7; ++nu) {
          double v = dG[mu][k][nu][sg] - dG[nu][k][mu][sg];
          for (int lam = 0; lam < 7; ++lam)
            v += G0[k][mu][lam] * G0[lam][nu][sg] - G0[k][nu][lam] * G0[lam][mu][sg];
          for (int rho = 0; rho < 7; ++rho) tmp[at(rho, sg, mu, nu)] += g[rho][k] * v;
        }
  Rl = tmp;
  // Contract each slot with the frame.
  for (int slot = 0; slot < 4; ++slot) {
    std::fill(tmp.begin(), tmp.end(), 0.0);
    for (int i0 = 0; i0 < 7; ++i0)
      for (int i1 = 0; i1 < 7; ++i1)
        for (int i2 = 0; i2 < 7; ++i2)
          for (int i3 = 0; i3 < 7; ++i3) {
            int idx[4] = {i0, i1, i2, i3};
            const double v = Rl[at(i0, i1, i2, i3)];
            if (v == 0.0) continue;
            for (int a = 0; a < 7; ++a) {
              const double f = F[idx[slot]][a];
              if (f == 0.0) continue;
              int j[4] = {i0, i1, i2, i3};
              j[slot] = a;
              tmp[at(j[0], j[1], j[2], j[3])] += f * v;
            }
          }
    Rl = tmp;
  }
  // Reorder from (c, d, a, b) to the library layout (a, b, c, d).
  std::vector<double> out(2401);
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b)
      for (int c = 0; c < 7; ++c)
        for (int d = 0; d < 7; ++d) out[at(a, b, c, d)] = Rl[at(c, d, a, b)];
  return out;
}

}  // namespace

TEST(Frame, OrthonormalAtSampledPoints) {
  for (const auto& p : kParams)
    for (const auto& q : sample_points(p, 100, 11)) {
      const Mat7 F = frame_matrix(q, p).m;
      const Mat7 G = metric_matrix(q, p);
      for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b) {
          double v = 0.0;
          for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j) v += F[i][a] * G[i][j] * F[j][b];
          ASSERT_NEAR(v, a == b ? 1.0 : 0.0, 1e-12);
        }
    }
}

TEST(Frame, MatchesCoordinateOracle) {
  for (const auto& p : kParams)
    for (const auto& q : sample_points(p, 20, 3)) {
      const Mat7 F = frame_matrix(q, p).m;
      const Mat7 G = metric_matrix(q, p);
      const auto Fo = oracle::frame(q.c, p.m, p.l);
      const auto Go = oracle::metric(q.c, p.m, p.l);
      for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) {
          EXPECT_NEAR(F[i][j], Fo[i][j], 1e-15);
          EXPECT_NEAR(G[i][j], Go[i][j], 1e-12);
        }
    }
}

TEST(Frame, IdentityAtOriginWhenFlat) {
  const Mat7 F = frame_matrix(CoordPoint::origin(), {0, 0}).m;
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b) EXPECT_EQ(F[a][b], a == b ? 1.0 : 0.0);
}

TEST(Frame, RejectsPointsOutsideTheChart) {
  CoordPoint q = CoordPoint::origin();
  q.c[3] = 2.0;
  EXPECT_THROW(frame_matrix(q, {-1, 1}), DomainViolation);
  EXPECT_THROW(metric_matrix(q, {-0.25, 1}), DomainViolation);
  EXPECT_THROW(riemann_frame(q, {-1, 0}), DomainViolation);
}

TEST(Brackets, MatchFiniteDifferences) {
  for (const auto& p : kParams)
    for (const auto& q : sample_points(p, 5, 5)) {
      const auto C = bracket_table(q, p);
      for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b) {
          const auto o = oracle::bracket(a, b, q.c, p.m, p.l);
          for (int c = 0; c < 7; ++c) ASSERT_NEAR(C[a][b][c], o[c], 1e-8);
        }
    }
}

TEST(Brackets, AppendixX1CoefficientAtUnitX) {
  // x = 1, all else 0, (m,l) = (1,1): -l{1+m(y^2+z^2)} = -1.
  CoordPoint q = CoordPoint::origin();
  q.c[4] = 1.0;
  const FrameVector v = bracket_frame(4, 5, q, {1, 1});
  EXPECT_NEAR(v(1), -1.0, 1e-12);
  // The printed -l{1+m(x^2+y^2)} would give -2.
  EXPECT_GT(std::abs(v(1) - (-2.0)), 0.5);
}

TEST(Brackets, HeisenbergTableAtLOne) {
  const ModelParams p{0, 1};
  for (const auto& q : sample_points(p, 10, 9)) {
    EXPECT_NEAR(bracket_frame(4, 5, q, p)(1), -1.0, 1e-12);
    EXPECT_NEAR(bracket_frame(6, 7, q, p)(1), -1.0, 1e-12);
    EXPECT_NEAR(bracket_frame(4, 6, q, p)(2), -1.0, 1e-12);
    EXPECT_NEAR(bracket_frame(1, 4, q, p).max_abs(), 0.0, 1e-15);
  }
}

TEST(Christoffel, MatchFiniteDifferenceOracle) {
  for (const auto& p : kParams)
    for (const auto& q : sample_points(p, 10, 21)) {
      const auto G = christoffel_coordinates(q, p);
      const auto O = oracle::christoffel(q.c, p.m, p.l, 1e-5);
      for (int k = 0; k < 7; ++k)
        for (int i = 0; i < 7; ++i)
          for (int j = 0; j < 7; ++j) ASSERT_NEAR(G[k][i][j], O[k][i][j], 1e-6);
    }
}

TEST(Connection, MetricCompatibleAndTorsionFree) {
  for (const auto& p : kParams)
    for (const auto& q : sample_points(p, 20, 4)) {
      const auto L = connection_table(q, p);
      const auto C = bracket_table(q, p);
      for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b)
          for (int c = 0; c < 7; ++c) {
            ASSERT_NEAR(L[a][b][c], -L[a][c][b], 1e-13);
            ASSERT_NEAR(L[a][b][c] - L[b][a][c], C[a][b][c], 1e-13);
          }
    }
}

TEST(Connection, HeisenbergValues) {
  const ModelParams p{0, 2};
  const CoordPoint q = sample_points(p, 1, 8).front();
  EXPECT_NEAR(levi_civita_frame(1, 4, q, p)(5), 1.0, 1e-14);   // (l/2) X5
  EXPECT_NEAR(levi_civita_frame(4, 5, q, p)(1), -1.0, 1e-14);  // -(l/2) X1
  EXPECT_NEAR(levi_civita_frame(4, 4, q, p).max_abs(), 0.0, 1e-14);
}

TEST(Curvature, MatchesFiniteDifferenceOracle) {
  for (const auto& p : std::vector<ModelParams>{{1, 1}, {-0.5, 2}}) {
    const CoordPoint q = sample_points(p, 1, 31).front();
    const Curvature4 R = riemann_frame(q, p);
    const auto Ro = riemann_fd(q, p);
    for (std::size_t i = 0; i < Ro.size(); ++i) ASSERT_NEAR(R.v[i], Ro[i], 2e-5) << i;
  }
}

TEST(Curvature, Symmetries) {
  for (const auto& p : kParams)
    for (const auto& q : sample_points(p, 10, 6)) {
      const Curvature4 R = riemann_frame(q, p);
      for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b)
          for (int c = 0; c < 7; ++c)
            for (int d = 0; d < 7; ++d) {
              const double v = R.at(a, b, c, d);
              ASSERT_NEAR(v, -R.at(b, a, c, d), 1e-12);
              ASSERT_NEAR(v, -R.at(a, b, d, c), 1e-12);
              ASSERT_NEAR(v, R.at(c, d, a, b), 1e-12);
              ASSERT_NEAR(v + R.at(b, c, a, d) + R.at(c, a, b, d), 0.0, 1e-12);
            }
    }
}

TEST(Curvature, TwoRoutesAgree) {
  for (const auto& p : kParams)
    for (const auto& q : sample_points(p, 5, 13)) {
      const Curvature4 A = riemann_frame(q, p), B = riemann_frame_connection_route(q, p);
      for (std::size_t i = 0; i < A.v.size(); ++i) ASSERT_NEAR(A.v[i], B.v[i], 1e-10);
    }
}

TEST(Curvature, HeisenbergSectionalValues) {
  for (double l : {1.0, 2.0, -0.7}) {
    const ModelParams p{0, l};
    for (const auto& q : sample_points(p, 5, 2)) {
      const Curvature4 R = riemann_frame(q, p);
      EXPECT_NEAR(R(1, 4, 1, 4), l * l / 4, 1e-12);
      EXPECT_NEAR(R(6, 7, 6, 7), -3 * l * l / 4, 1e-12);
    }
  }
}

TEST(Curvature, FlatWhenBothParametersVanish) {
  for (const auto& q : sample_points({0, 0}, 5, 1)) {
    const Curvature4 R = riemann_frame(q, {0, 0});
    for (double v : R.v) EXPECT_EQ(v, 0.0);
  }
}

// Reference values computed with sympy from the coordinate metric at
// q0 = (1/10, -1/5, 3/10, 1/5, -3/10, 2/5, 1/10).
struct SympyRef {
  ModelParams p;
  double R1414, R4545, R4567, R1425, R6767, R1212, Ric11, Ric44, Ric45, Ric14, Ric77, S;
};

class SympyValues : public ::testing::TestWithParam<SympyRef> {};

TEST_P(SympyValues, CurvatureRicciScalar) {
  const SympyRef& s = GetParam();
  const CoordPoint q(0.1, -0.2, 0.3, 0.2, -0.3, 0.4, 0.1);
  const Curvature4 R = riemann_frame(q, s.p);
  EXPECT_NEAR(R(1, 4, 1, 4), s.R1414, 1e-12);
  EXPECT_NEAR(R(4, 5, 4, 5), s.R4545, 1e-12);
  EXPECT_NEAR(R(4, 5, 6, 7), s.R4567, 1e-12);
  EXPECT_NEAR(R(1, 4, 2, 5), s.R1425, 1e-12);
  EXPECT_NEAR(R(6, 7, 6, 7), s.R6767, 1e-12);
  EXPECT_NEAR(R(1, 2, 1, 2), s.R1212, 1e-12);
  const Mat7 Ric = ricci_frame(q, s.p);
  EXPECT_NEAR(Ric[0][0], s.Ric11, 1e-12);
  EXPECT_NEAR(Ric[3][3], s.Ric44, 1e-12);
  EXPECT_NEAR(Ric[3][4], s.Ric45, 1e-12);
  EXPECT_NEAR(Ric[0][3], s.Ric14, 1e-12);
  EXPECT_NEAR(Ric[6][6], s.Ric77, 1e-12);
  EXPECT_NEAR(scalar_curvature(q, s.p), s.S, 1e-11);
}

INSTANTIATE_TEST_SUITE_P(
    AtQ0, SympyValues,
    ::testing::Values(SympyRef{{1, 1}, 1391.0 / 4000, 11827.0 / 4000, 0.0, 41.0 / 4000,
                               12103.0 / 4000, 0.0, 269.0 / 200, 4951.0 / 500, -69.0 / 500,
                               99.0 / 100, 9833.0 / 1000, 8793.0 / 200},
                      SympyRef{{-0.5, 2}, 3371.0 / 4000, -18113.0 / 4000, 0.0, -109.0 / 4000,
                               -18557.0 / 4000, 0.0, 689.0 / 200, -5519.0 / 500, 111.0 / 500,
                               -171.0 / 200, -10927.0 / 1000, -6867.0 / 200}));

TEST(SympyValues, Christoffel) {
  const CoordPoint q(0.1, -0.2, 0.3, 0.2, -0.3, 0.4, 0.1);
  const auto a = christoffel_coordinates(q, {1, 1});
  EXPECT_NEAR(a[0][3][4], -15.0 / 1352, 1e-14);
  EXPECT_NEAR(a[3][3][3], -4.0 / 13, 1e-14);
  const auto b = christoffel_coordinates(q, {-0.5, 2});
  EXPECT_NEAR(b[0][3][4], 30.0 / 289, 1e-14);
  EXPECT_NEAR(b[3][3][3], 4.0 / 17, 1e-14);
}

TEST(Ricci, HeisenbergDiagonal) {
  for (double l : {1.0, 2.0}) {
    const ModelParams p{0, l};
    for (const auto& q : sample_points(p, 10, 17)) {
      const Mat7 Ric = ricci_frame(q, p);
      for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b) {
          const double expect = a != b ? 0.0 : (a < 3 ? l * l : -1.5 * l * l);
          ASSERT_NEAR(Ric[a][b], expect, 1e-9);
        }
    }
  }
}

TEST(Ricci, SymmetricTensor) {
  for (const auto& p : kParams)
    for (const auto& q : sample_points(p, 10, 19)) {
      const Mat7 Ric = ricci_frame(q, p);
      for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b) ASSERT_NEAR(Ric[a][b], Ric[b][a], 1e-12);
    }
}

TEST(Scalar, MinusThreeForHeisenberg) {
  for (const auto& q : sample_points({0, 1}, 20, 23))
    EXPECT_NEAR(scalar_curvature(q, {0, 1}), -3.0, 1e-9);
}

TEST(Scalar, ClosedFormFromTrace) {
  // Trace of the Ricci matrix: 48m - (3/2) l^2 (K^2 + 1).
  for (const auto& p : kParams)
    for (const auto& q : sample_points(p, 20, 29)) {
      const double K = oracle::kfac(q.c, p.m);
      EXPECT_NEAR(scalar_curvature(q, p), 48 * p.m - 1.5 * p.l * p.l * (K * K + 1), 1e-9);
    }
}

TEST(BCV, SevenCasesUnderPrintedPredicate) {
  struct Case {
    double m, l;
    BCVClass label;
    int n;
  };
  const Case cases[] = {{0, 0, BCVClass::Euclidean3, 1}, {0.25, 1, BCVClass::Sphere3, 2},
                        {1, 0, BCVClass::S2xR, 3},       {-1, 0, BCVClass::H2xR, 4},
                        {1, 1, BCVClass::SU2, 5},        {-1, 1, BCVClass::SL2R, 6},
                        {0, 2, BCVClass::Nil3, 7}};
  for (const auto& c : cases) {
    const BCVResult r = bcv_classify(c.m, c.l);
    EXPECT_EQ(r.label, c.label) << c.m << "," << c.l;
    EXPECT_EQ(r.case_number, c.n);
  }
}

TEST(BCV, SquaredPredicateMovesTheSphereCase) {
  EXPECT_EQ(bcv_classify(1, 2, Case2Predicate::Printed).label, BCVClass::SU2);
  EXPECT_EQ(bcv_classify(1, 2, Case2Predicate::Squared).label, BCVClass::Sphere3);
  EXPECT_EQ(bcv_classify(0.5, 2, Case2Predicate::Printed).label, BCVClass::Sphere3);
  EXPECT_EQ(bcv_classify(0.5, 2, Case2Predicate::Squared).label, BCVClass::SU2);
}

TEST(BCV, FrameE1) {
  const auto E = bcv_frame(0.0, 1.0, {1, 2});
  EXPECT_DOUBLE_EQ(E[0][0], 2.0);
  EXPECT_DOUBLE_EQ(E[1][0], 0.0);
  EXPECT_DOUBLE_EQ(E[2][0], -1.0);
  EXPECT_THROW(bcv_frame(2.0, 0.0, {-1, 0}), DomainViolation);
}
