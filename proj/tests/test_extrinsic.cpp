#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "biharm/catalog.hpp"
#include "biharm/extrinsic.hpp"
#include "oracle.hpp"

using namespace biharm;

namespace {

const double kInvSqrt2 = 1 / std::sqrt(2.0);

std::vector<Chart> surfaces() {
  return {make_equator(2).chart,
          make_equator(3).chart,
          make_small_hypersphere(1, 0.6).chart,
          make_small_hypersphere(2, kInvSqrt2).chart,
          make_small_hypersphere(2, 0.8).chart,
          make_small_hypersphere(3, 0.5).chart,
          make_clifford(2, 1, kInvSqrt2).chart,
          make_clifford(3, 1, kInvSqrt2).chart,
          make_clifford(3, 2, 0.6).chart,
          make_perturbed_equator(1, 0.3, 2),
          make_perturbed_equator(2, 0.1, 1),
          make_perturbed_equator(2, 0.2, 3),
          make_perturbed_equator(3, 0.1, 1)};
}

std::vector<Point> points_for(const Chart& c) { return random_points(c.domain(), 8, 42); }

}  // namespace

TEST(Extrinsic, SmallSphereOfRadiusInvSqrt2) {
  const Chart c = make_small_hypersphere(2, kInvSqrt2).chart;
  for (const auto& u : points_for(c)) {
    const ExtrinsicData e = extrinsic_at(c, u);
    EXPECT_NEAR(e.H, 2.0, 1e-12);
    EXPECT_NEAR(e.A2, 2.0, 1e-12);
    const auto k = principal_curvatures(e);
    ASSERT_EQ(k.size(), 2u);
    EXPECT_NEAR(k[0], 1.0, 1e-12);
    EXPECT_NEAR(k[1], 1.0, 1e-12);
  }
}

TEST(Extrinsic, EquatorIsTotallyGeodesic) {
  const Chart c = make_equator(2).chart;
  for (const auto& u : points_for(c)) {
    const ExtrinsicData e = extrinsic_at(c, u);
    EXPECT_LE(e.A.cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_NEAR(e.H, 0.0, 1e-14);
    EXPECT_NEAR(e.A2, 0.0, 1e-14);
    for (double k : principal_curvatures(e)) EXPECT_NEAR(k, 0.0, 1e-14);
  }
}

TEST(Extrinsic, SmallSphereOfRadius08) {
  const Chart c = make_small_hypersphere(2, 0.8).chart;
  for (const auto& u : points_for(c)) {
    const ExtrinsicData e = extrinsic_at(c, u);
    EXPECT_NEAR(e.H, 1.5, 1e-12);
    EXPECT_NEAR(e.A2, 1.125, 1e-12);
  }
}

TEST(Extrinsic, CliffordPrincipalCurvatures) {
  const Chart c = make_clifford(3, 1, kInvSqrt2).chart;
  for (const auto& u : points_for(c)) {
    const ExtrinsicData e = extrinsic_at(c, u);
    EXPECT_NEAR(e.H, -1.0, 1e-12);
    const auto k = principal_curvatures(e);
    ASSERT_EQ(k.size(), 3u);
    EXPECT_NEAR(k[0], -1.0, 1e-12);
    EXPECT_NEAR(k[1], -1.0, 1e-12);
    EXPECT_NEAR(k[2], 1.0, 1e-12);
  }
}

TEST(Extrinsic, ClosedFormsAgreeWithFiniteDifferenceOracle) {
  struct Case {
    Chart chart;
    double H, A2;
  };
  const std::vector<Case> cases = {
      {make_small_hypersphere(2, kInvSqrt2).chart, oracle::small_sphere_mean_curvature(2, kInvSqrt2),
       oracle::small_sphere_second_form(2, kInvSqrt2)},
      {make_small_hypersphere(2, 0.8).chart, oracle::small_sphere_mean_curvature(2, 0.8),
       oracle::small_sphere_second_form(2, 0.8)},
      {make_small_hypersphere(3, 0.5).chart, oracle::small_sphere_mean_curvature(3, 0.5),
       oracle::small_sphere_second_form(3, 0.5)},
  };
  for (const auto& cs : cases) {
    for (const auto& u : points_for(cs.chart)) {
      const oracle::FdExtrinsic fd = oracle::fd_extrinsic(cs.chart, u);
      EXPECT_NEAR(fd.H, cs.H, 1e-6) << cs.chart.name();
      EXPECT_NEAR(fd.A2, cs.A2, 1e-6) << cs.chart.name();
    }
  }
}

TEST(Extrinsic, EngineMatchesFiniteDifferenceOracleEverywhere) {
  for (const Chart& c : surfaces()) {
    for (const auto& u : points_for(c)) {
      const ExtrinsicData e = extrinsic_at(c, u);
      const oracle::FdExtrinsic fd = oracle::fd_extrinsic(c, u);
      EXPECT_LE((e.N - fd.N).norm(), 1e-9) << c.name();
      EXPECT_LE((e.g - fd.g).cwiseAbs().maxCoeff(), 1e-8) << c.name();
      EXPECT_LE((e.A - fd.A).cwiseAbs().maxCoeff(), 1e-6) << c.name();
      EXPECT_NEAR(e.H, fd.H, 1e-6) << c.name();
      EXPECT_NEAR(e.volume, fd.volume, 1e-8) << c.name();
    }
  }
}

TEST(Extrinsic, NormalIsUnitAndOrthogonal) {
  for (const Chart& c : surfaces()) {
    for (const auto& u : points_for(c)) {
      const LocalGeometry geo = local_geometry(c, u, 2);
      const Eigen::VectorXd N = Eigen::Map<const Eigen::VectorXd>(values(geo.N).data(), geo.N.size());
      const Eigen::VectorXd X = Eigen::Map<const Eigen::VectorXd>(values(geo.X).data(), geo.X.size());
      EXPECT_NEAR(N.norm(), 1.0, 1e-14);
      EXPECT_NEAR(N.dot(X), 0.0, 1e-14);
      for (int i = 0; i < geo.n; ++i) {
        const auto d = values(geo.dX[i]);
        EXPECT_NEAR(N.dot(Eigen::Map<const Eigen::VectorXd>(d.data(), d.size())), 0.0, 1e-14);
      }
    }
  }
}

TEST(Extrinsic, OrientationRuleGivesPositiveFrame) {
  for (const Chart& base : surfaces()) {
    for (const Chart& c : {base, base.flipped()}) {
      const Point u = points_for(c)[0];
      const ExtrinsicData e = extrinsic_at(c, u);
      const ChartJet jet = evaluate_jet(c, u, 1);
      const int n = c.dimension(), m = n + 2;
      Eigen::MatrixXd frame(m, m);
      for (int i = 0; i < n; ++i) frame.col(i) = jet.partial({i});
      frame.col(n) = e.N;
      frame.col(n + 1) = e.X;
      EXPECT_GT(c.orientation() * frame.determinant(), 0.0) << c.name();
    }
  }
}

TEST(Extrinsic, InternalConsistency) {
  for (const Chart& c : surfaces()) {
    for (const auto& u : points_for(c)) {
      const ExtrinsicData e = extrinsic_at(c, u);
      const int n = c.dimension();
      EXPECT_NEAR(e.H, (e.g_inv * e.A).trace(), 1e-12);
      const Eigen::MatrixXd S = e.g_inv * e.A;
      EXPECT_NEAR(e.A2, (S * S).trace(), 1e-12);
      EXPECT_LE((e.shape - S).cwiseAbs().maxCoeff(), 1e-13);
      EXPECT_LE((e.g * e.g_inv - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-13);
      EXPECT_NEAR(e.volume, std::sqrt(e.g.determinant()), 1e-13);
      EXPECT_LE(e.H * e.H, n * e.A2 + 1e-12);
      const auto k = principal_curvatures(e);
      double sum = 0, sq = 0;
      for (double x : k) {
        sum += x;
        sq += x * x;
      }
      EXPECT_NEAR(sum, e.H, 1e-10);
      EXPECT_NEAR(sq, e.A2, 1e-10);
      EXPECT_TRUE(std::is_sorted(k.begin(), k.end()));
    }
  }
}

TEST(Extrinsic, OrientationFlip) {
  for (const Chart& c : surfaces()) {
    for (const auto& u : points_for(c)) {
      const ExtrinsicData a = extrinsic_at(c, u);
      const ExtrinsicData b = extrinsic_at(c.flipped(), u);
      EXPECT_LE((a.N + b.N).norm(), 1e-15);
      EXPECT_LE((a.A + b.A).cwiseAbs().maxCoeff(), 1e-15);
      EXPECT_EQ(a.H, -b.H);
      EXPECT_EQ(a.A2, b.A2);
      EXPECT_EQ(a.volume, b.volume);
      auto ka = principal_curvatures(a), kb = principal_curvatures(b);
      for (auto& x : kb) x = -x;
      std::sort(kb.begin(), kb.end());
      for (std::size_t i = 0; i < ka.size(); ++i) EXPECT_NEAR(ka[i], kb[i], 1e-12);
    }
  }
}

TEST(Extrinsic, JetOrderBudget) {
  const Chart c = make_perturbed_equator(2, 0.1, 1);
  const Point u = {1.0, 2.0};
  for (int order = 2; order <= 4; ++order) {
    const LocalGeometry geo = local_geometry(c, u, order);
    EXPECT_EQ(geo.g[0][0].order(), order - 1);
    EXPECT_EQ(geo.N[0].order(), order - 2);
    EXPECT_EQ(geo.H.order(), order - 2);
  }
  EXPECT_THROW(local_geometry(c, u, 1), UnsupportedOrderError);
  EXPECT_THROW(local_geometry(c, u, 5), UnsupportedOrderError);
}

TEST(Extrinsic, DegenerateMetricIsReported) {
  // t -> (cos t^3, sin t^3, 0) stops at t = 0.
  const Chart c("stalled", ParameterDomain({AxisSpec{-1.0, 1.0}}), [](std::span<const Taylor> p) {
    const Taylor s = p[0] * p[0] * p[0];
    return TaylorVec{cos(s), sin(s), Taylor(p[0].vars(), p[0].order(), 0.0)};
  });
  const Point u = {0.0};
  EXPECT_THROW(extrinsic_at(c, u), ImmersionError);
  const Point fine = {0.5};
  EXPECT_NO_THROW(extrinsic_at(c, fine));
}

TEST(Extrinsic, RoundSphereRicci) {
  const AmbientSpace s;
  EXPECT_EQ(s.ricci_normal(3), 3.0);
  const Eigen::Vector3d u(1, 2, 0), v(0, 1, 4);
  EXPECT_EQ(s.ricci(2, u, v), 4.0);
}
