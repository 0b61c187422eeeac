#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "biharm/catalog.hpp"
#include "biharm/chart.hpp"
#include "biharm/extrinsic.hpp"

using namespace biharm;
using std::numbers::pi;

namespace {

std::vector<Chart> catalog_charts() {
  return {make_equator(1).chart,
          make_equator(2).chart,
          make_equator(3).chart,
          make_small_hypersphere(1, 0.6).chart,
          make_small_hypersphere(2, 1 / std::sqrt(2.0)).chart,
          make_small_hypersphere(2, 0.8).chart,
          make_small_hypersphere(3, 0.5).chart,
          make_clifford(2, 1, 1 / std::sqrt(2.0)).chart,
          make_clifford(3, 1, 1 / std::sqrt(2.0)).chart,
          make_clifford(3, 2, 0.6).chart,
          make_perturbed_equator(2, 0.1, 1),
          make_perturbed_equator(3, 0.2, 3)};
}

Chart scaled_chart(const Chart& base, double factor) {
  const Immersion inner = base.immersion();
  return Chart("scaled", base.domain(), [inner, factor](std::span<const Taylor> p) {
    TaylorVec x = inner(p);
    for (auto& c : x) c *= factor;
    return x;
  });
}

}  // namespace

TEST(Chart, EquatorAxisPoint) {
  const Chart c = make_equator(2).chart;
  const Point u = {pi / 2, 0.0};
  const Eigen::VectorXd x = evaluate_jet(c, u, 0).value();
  EXPECT_NEAR(x[0], 1.0, 1e-15);
  EXPECT_NEAR(x[1], 0.0, 1e-15);
  EXPECT_NEAR(x[2], 0.0, 1e-15);
  EXPECT_NEAR(x[3], 0.0, 1e-15);
}

TEST(Chart, CliffordTorusFirstJet) {
  const Chart c = make_clifford(2, 1, 1 / std::sqrt(2.0)).chart;
  const Point u = {0.0, 0.0};
  const double r = 1 / std::sqrt(2.0);
  for (EngineMode mode : {EngineMode::analytic, EngineMode::finite_difference}) {
    const ChartJet jet = evaluate_jet(c.with_engine(mode), u, 1);
    const double tol = mode == EngineMode::analytic ? 1e-15 : 1e-6;
    const Eigen::Vector4d x(r, 0, r, 0), d1(0, r, 0, 0), d2(0, 0, 0, r);
    EXPECT_LE((jet.value() - x).norm(), 1e-15);
    EXPECT_LE((jet.partial({0}) - d1).norm(), tol);
    EXPECT_LE((jet.partial({1}) - d2).norm(), tol);
  }
}

TEST(Chart, MixedPartialsSymmetricInAnalyticMode) {
  for (const Chart& c : catalog_charts()) {
    const auto pts = random_points(c.domain(), 3, 7);
    for (const auto& u : pts) {
      const ChartJet jet = evaluate_jet(c, u, 4);
      for (int i = 0; i < c.dimension(); ++i)
        for (int j = 0; j < c.dimension(); ++j) {
          EXPECT_EQ(jet.partial({i, j}), jet.partial({j, i}));
          for (int k = 0; k < c.dimension(); ++k) {
            EXPECT_EQ(jet.partial({i, j, k}), jet.partial({k, i, j}));
            EXPECT_EQ(jet.partial({i, j, k}), jet.partial({j, k, i}));
          }
        }
    }
  }
}

TEST(Chart, CatalogChartsLieOnTheSphere) {
  for (const Chart& c : catalog_charts()) {
    const int per_axis = c.dimension() == 3 ? 6 : 10;
    EXPECT_LE(sphere_constraint_residual(c, sample_grid(c.domain(), per_axis)), 1e-14) << c.name();
  }
}

TEST(Chart, ScaledChartViolatesSphereConstraint) {
  const Chart c = scaled_chart(make_equator(2).chart, 1.1);
  EXPECT_NEAR(sphere_constraint_residual(c, sample_grid(c.domain(), 10)), 0.1, 1e-14);
}

TEST(Chart, CatalogChartsAreImmersions) {
  for (const Chart& c : catalog_charts()) {
    for (const auto& u : sample_grid(c.domain(), 5)) {
      const ExtrinsicData e = extrinsic_at(c, u);
      EXPECT_GT(e.g.determinant(), 1e-12) << c.name();
    }
  }
}

TEST(Chart, Errors) {
  const Chart c = make_equator(2).chart;
  const Point pole = {0.0, 1.0};
  const Point south = {pi, 1.0};
  const Point outside = {4.0, 1.0};
  EXPECT_THROW(evaluate_jet(c, pole, 2), SingularChartError);
  EXPECT_THROW(evaluate_jet(c, south, 0), SingularChartError);
  EXPECT_THROW(evaluate_jet(c, outside, 2), InvalidInputError);
  const Point ok = {1.0, 1.0};
  EXPECT_THROW(evaluate_jet(c, ok, 5), UnsupportedOrderError);
  const Point wrong_size = {1.0};
  EXPECT_THROW(evaluate_jet(c, wrong_size, 1), InvalidInputError);
  EXPECT_THROW(sphere_constraint_residual(c, {}), InvalidInputError);
  EXPECT_THROW(c.with_engine(EngineMode::finite_difference, 0.0), InvalidInputError);
  EXPECT_THROW(ParameterDomain({AxisSpec{1.0, 1.0}}), InvalidInputError);
  EXPECT_THROW(ParameterDomain(std::vector<AxisSpec>{}), InvalidInputError);
}

TEST(Chart, PeriodicAxisAcceptsAnyAngle) {
  const Chart c = make_equator(2).chart;
  const Point wrapped = {1.0, 7.5};
  const Point base = {1.0, 7.5 - 2 * pi};
  EXPECT_LE((evaluate_point(c, wrapped) - evaluate_point(c, base)).norm(), 1e-14);
  EXPECT_NO_THROW(evaluate_jet(c, wrapped, 2));
}

TEST(Chart, SampleGridStaysInterior) {
  const Chart c = make_clifford(3, 1, 0.6).chart;
  const auto pts = sample_grid(c.domain(), 4);
  EXPECT_EQ(pts.size(), 64u);
  for (const auto& u : pts) EXPECT_NO_THROW(c.domain().require_interior(u));
  EXPECT_THROW(sample_grid(c.domain(), 0), InvalidInputError);
  EXPECT_THROW(random_points(c.domain(), 0, 1), InvalidInputError);
}

// Observed order of the FD engine for every derivative order on the Clifford
// chart S^1(0.6) x S^2(0.8), comparing steps h and h/2.
TEST(Chart, FiniteDifferenceConvergesAtSecondOrder) {
  const Chart c = make_clifford(3, 1, 0.6).chart;
  const Point u = {0.4, 1.1, 2.3};
  const ChartJet exact = evaluate_jet(c, u, 4);
  const double coarse[5] = {0, 2e-2, 2e-2, 4e-2, 8e-2};
  for (int order = 1; order <= 4; ++order) {
    auto error = [&](double h) {
      const ChartJet fd = evaluate_jet(c.with_engine(EngineMode::finite_difference, h), u, order);
      double e = 0.0;
      const int first = monomial_count(3, order - 1), last = monomial_count(3, order);
      for (int idx = first; idx < last; ++idx)
        for (std::size_t k = 0; k < fd.components.size(); ++k)
          e = std::max(e, std::abs(fd.components[k].coeff(idx) - exact.components[k].coeff(idx)));
      return e;
    };
    const double e1 = error(coarse[order]), e2 = error(coarse[order] / 2);
    EXPECT_GE(std::log2(e1 / e2), 1.9) << "derivative order " << order;
  }
}
