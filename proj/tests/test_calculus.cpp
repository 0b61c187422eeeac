#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "biharm/calculus.hpp"
#include "biharm/catalog.hpp"
#include "oracle.hpp"

using namespace biharm;
using std::numbers::pi;

namespace {

const double kInvSqrt2 = 1 / std::sqrt(2.0);

Eigen::VectorXd random_direction(int dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = d(rng);
  return v;
}

double coordinate(const Chart& c, const Point& u, int i) { return evaluate_point(c, u)[i]; }

std::vector<Chart> surfaces() {
  return {make_equator(2).chart,
          make_small_hypersphere(2, kInvSqrt2).chart,
          make_small_hypersphere(3, 0.6).chart,
          make_clifford(2, 1, kInvSqrt2).chart,
          make_clifford(3, 1, kInvSqrt2).chart,
          make_perturbed_equator(2, 0.1, 1),
          make_perturbed_equator(3, 0.1, 3)};
}

TaylorVec taylor_const(const Eigen::VectorXd& v, int vars, int order) {
  TaylorVec r;
  for (int i = 0; i < v.size(); ++i) r.emplace_back(vars, order, v[i]);
  return r;
}

// Order-1 jet of the hyperspherical chart of S^3.
TaylorVec s3_chart(const Eigen::Vector3d& angles) {
  const Taylor a = Taylor::variable(3, 1, 0, angles[0]);
  const Taylor b = Taylor::variable(3, 1, 1, angles[1]);
  const Taylor c = Taylor::variable(3, 1, 2, angles[2]);
  return {sin(a) * sin(b) * cos(c), sin(a) * sin(b) * sin(c), sin(a) * cos(b), cos(a)};
}

}  // namespace

TEST(Calculus, CliffordTorusHasNoChristoffels) {
  const Chart c = make_clifford(2, 1, kInvSqrt2).chart;
  for (const auto& u : random_points(c.domain(), 5, 3)) {
    const ChristoffelData g = christoffels_at(c, u);
    for (double x : g.gamma) EXPECT_NEAR(x, 0.0, 1e-15);
  }
}

TEST(Calculus, RoundSphereChristoffels) {
  const Chart c = make_equator(2).chart;
  for (double theta : {pi / 2, 0.7, 2.1}) {
    const Point u = {theta, 1.3};
    const ChristoffelData g = christoffels_at(c, u);
    EXPECT_NEAR(g(0, 1, 1), -std::sin(theta) * std::cos(theta), 1e-14);
    EXPECT_NEAR(g(1, 0, 1), std::cos(theta) / std::sin(theta), 1e-14);
    EXPECT_NEAR(g(1, 1, 0), std::cos(theta) / std::sin(theta), 1e-14);
    EXPECT_NEAR(g(0, 0, 0), 0.0, 1e-15);
    EXPECT_NEAR(g(0, 0, 1), 0.0, 1e-15);
    EXPECT_NEAR(g(1, 0, 0), 0.0, 1e-15);
    EXPECT_NEAR(g(1, 1, 1), 0.0, 1e-15);
  }
}

TEST(Calculus, ChristoffelsAreSymmetricAndMetricCompatible) {
  for (const Chart& c : surfaces())
    for (const auto& u : random_points(c.domain(), 5, 11)) {
      const ChristoffelData g = christoffels_at(c, u);
      for (int k = 0; k < g.n; ++k)
        for (int i = 0; i < g.n; ++i)
          for (int j = 0; j < g.n; ++j) EXPECT_EQ(g(k, i, j), g(k, j, i));
      EXPECT_LE(metric_compatibility_residual(c, u), 1e-10) << c.name();
    }
}

TEST(Calculus, GradientExamples) {
  const Chart eq = make_equator(2).chart;
  const ConstantField one(1.0);
  const auto e4 = coordinate_field(4, 3);
  for (const auto& u : random_points(eq.domain(), 5, 5)) {
    EXPECT_LE(gradient_at(one, eq, u).components.norm(), 1e-15);
    EXPECT_LE(gradient_at(*e4, eq, u).ambient.norm(), 1e-15);
  }
  const Chart torus = make_clifford(2, 1, kInvSqrt2).chart;
  const Point origin = {0.0, 0.0};
  const Gradient g = gradient_at(*coordinate_field(4, 0), torus, origin);
  EXPECT_NEAR(g.components[0], 0.0, 1e-15);
  EXPECT_NEAR(g.components[1], 0.0, 1e-15);
  // f = cos(s)/sqrt2 and g = I/2, so (grad f)^s = -sqrt2 sin s.
  const Point u = {0.8, 2.0};
  const Gradient h = gradient_at(*coordinate_field(4, 0), torus, u);
  EXPECT_NEAR(h.components[0], -std::sqrt(2.0) * std::sin(0.8), 1e-14);
  EXPECT_NEAR(h.components[1], 0.0, 1e-15);
  const double step = 1e-5;
  const Point up = {0.8 + step, 2.0}, dn = {0.8 - step, 2.0};
  const double fd = (coordinate(torus, up, 0) - coordinate(torus, dn, 0)) / (2 * step);
  EXPECT_NEAR(h.components[0], 2.0 * fd, 1e-9);
}

TEST(Calculus, HessianExamples) {
  const Chart eq = make_equator(2).chart;
  const Eigen::VectorXd v = random_direction(4, 8);
  const auto f = linear_field(v);
  const ConstantField one(1.0);
  for (const auto& u : random_points(eq.domain(), 6, 9)) {
    const Eigen::MatrixXd hess = hessian_at(*f, eq, u);
    const ExtrinsicData e = extrinsic_at(eq, u);
    const double fv = evaluate_point(eq, u).dot(v);
    EXPECT_LE((hess + fv * e.g).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LE(hessian_at(one, eq, u).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Calculus, TraceOfHessianIsTheLaplacian) {
  for (const Chart& c : surfaces()) {
    const auto f = quadratic_field(random_direction(c.ambient_dimension(), 2));
    for (const auto& u : random_points(c.domain(), 4, 13)) {
      const Eigen::MatrixXd hess = hessian_at(*f, c, u);
      const ExtrinsicData e = extrinsic_at(c, u);
      EXPECT_NEAR((e.g_inv * hess).trace(), laplacian_at(*f, c, u), 1e-13);
    }
  }
}

TEST(Calculus, LaplacianOfCoordinates) {
  const Chart eq = make_equator(2).chart;
  const Chart small = make_small_hypersphere(2, kInvSqrt2).chart;
  const ConstantField one(3.0);
  for (const auto& u : random_points(eq.domain(), 6, 17)) {
    for (int i = 0; i < 4; ++i)
      EXPECT_NEAR(laplacian_at(*coordinate_field(4, i), eq, u), -2 * coordinate(eq, u, i), 1e-13);
    EXPECT_NEAR(laplacian_at(*coordinate_field(4, 0), small, u), -4 * coordinate(small, u, 0), 1e-13);
    EXPECT_NEAR(laplacian_at(one, eq, u), 0.0, 1e-15);
  }
}

TEST(Calculus, BilaplacianOfCoordinates) {
  const Chart eq = make_equator(2).chart;
  const Chart small = make_small_hypersphere(2, kInvSqrt2).chart;
  const ConstantField one(-2.0);
  for (const auto& u : random_points(eq.domain(), 6, 19)) {
    EXPECT_NEAR(bilaplacian_at(*coordinate_field(4, 0), small, u), 16 * coordinate(small, u, 0), 1e-11);
    for (int i = 0; i < 4; ++i)
      EXPECT_NEAR(bilaplacian_at(*coordinate_field(4, i), eq, u), 4 * coordinate(eq, u, i), 1e-11);
    EXPECT_NEAR(bilaplacian_at(one, eq, u), 0.0, 1e-15);
  }
}

TEST(Calculus, NestedLaplacianFieldMatchesBilaplacian) {
  const Chart c = make_perturbed_equator(2, 0.1, 1);
  const auto f = quadratic_field(random_direction(4, 4));
  const LaplacianField lap(f);
  for (const auto& u : random_points(c.domain(), 4, 23))
    EXPECT_NEAR(laplacian_at(lap, c, u), bilaplacian_at(*f, c, u), 1e-12);
}

TEST(Calculus, OperatorsAreLinear) {
  for (const Chart& c : surfaces()) {
    const int m = c.ambient_dimension();
    const Eigen::VectorXd v = random_direction(m, 31), w = random_direction(m, 37);
    const double a = 0.7, b = -1.9;
    const auto fv = linear_field(v), fw = linear_field(w), fc = linear_field(a * v + b * w);
    for (const auto& u : random_points(c.domain(), 3, 41)) {
      EXPECT_NEAR(laplacian_at(*fc, c, u), a * laplacian_at(*fv, c, u) + b * laplacian_at(*fw, c, u),
                  1e-10);
      EXPECT_NEAR(bilaplacian_at(*fc, c, u),
                  a * bilaplacian_at(*fv, c, u) + b * bilaplacian_at(*fw, c, u), 1e-10);
      const Eigen::MatrixXd hc = hessian_at(*fc, c, u);
      const Eigen::MatrixXd hs = a * hessian_at(*fv, c, u) + b * hessian_at(*fw, c, u);
      EXPECT_LE((hc - hs).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(Calculus, AmbientGradientNormIdentity) {
  const Chart c = make_perturbed_equator(3, 0.1, 1);
  const Eigen::VectorXd v = random_direction(5, 43);
  const LinearAmbientFunction fn(v);
  for (const auto& u : random_points(c.domain(), 6, 47)) {
    const LocalGeometry geo = local_geometry(c, u, 2);
    const auto grad = values(fn.gradient(geo.X));
    const double f = fn.value(geo.X).value();
    double g2 = 0;
    for (double x : grad) g2 += x * x;
    EXPECT_NEAR(g2 + f * f, v.squaredNorm(), 1e-12);
  }
}

// The closed-form ambient derivatives must match an intrinsic computation of
// Hess and nabla Hess on the round S^3 in its own hyperspherical chart.
TEST(Calculus, AmbientClosedFormsMatchNestedDifferentiationOnS3) {
  for (unsigned seed : {1u, 2u, 3u}) {
    const Eigen::VectorXd v = random_direction(4, seed);
    const std::span<const double> vs(v.data(), 4);
    const LinearAmbientFunction lin(v);
    const QuadraticAmbientFunction quad(v);
    const std::vector<std::pair<const AmbientFunction*, oracle::AmbientScalar>> cases = {
        {&lin, [vs](const TaylorVec& Y) { return dot(Y, vs); }},
        {&quad, [vs](const TaylorVec& Y) {
           const Taylor l = dot(Y, vs);
           return l * l;
         }}};
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> polar(0.3, 2.8), az(0.0, 2 * pi);
    for (int trial = 0; trial < 4; ++trial) {
      const Eigen::Vector3d angles(polar(rng), polar(rng), az(rng));
      for (const auto& [fn, scalar] : cases) {
        const oracle::SphereDerivatives ref = oracle::sphere_derivatives(scalar, angles);
        const TaylorVec Y = taylor_const(ref.Y, 1, 0);
        std::vector<TaylorVec> e;
        for (int i = 0; i < 3; ++i) e.push_back(taylor_const(ref.dY.col(i), 1, 0));
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            EXPECT_NEAR(fn->hessian(Y, e[i], e[j]).value(), ref.hessian(i, j), 1e-12) << fn->name();
            for (int k = 0; k < 3; ++k)
              EXPECT_NEAR(fn->third(Y, e[k], e[i], e[j]).value(), ref.third[k][i][j], 1e-12)
                  << fn->name() << " k=" << k << " i=" << i << " j=" << j;
          }
        // The gradient closed form against the chart differential.
        const TaylorVec grad = fn->gradient(Y);
        for (int i = 0; i < 3; ++i) {
          double gi = 0.0;
          for (int c = 0; c < 4; ++c) gi += grad[c].value() * ref.dY(c, i);
          const Taylor f = scalar(s3_chart(angles));
          EXPECT_NEAR(gi, f.partial({i}), 1e-13);
        }
      }
    }
  }
}

TEST(Calculus, FieldKinds) {
  EXPECT_EQ(linear_field(Eigen::Vector4d::Ones())->kind(), FieldKind::ambient_linear);
  EXPECT_EQ(quadratic_field(Eigen::Vector4d::Ones())->kind(), FieldKind::ambient_quadratic);
  EXPECT_EQ(MeanCurvatureField().kind(), FieldKind::derived_h);
  EXPECT_EQ(ConstantField(1).kind(), FieldKind::custom);
}

TEST(Calculus, OrderBudgetIsEnforced) {
  const Chart c = make_perturbed_equator(2, 0.1, 1);
  const Point u = {1.0, 2.0};
  const MeanCurvatureField H;
  EXPECT_NO_THROW(laplacian_at(H, c, u));
  EXPECT_THROW(bilaplacian_at(H, c, u), UnsupportedOrderError);
  const auto lap = std::make_shared<LaplacianField>(std::make_shared<MeanCurvatureField>());
  EXPECT_THROW(laplacian_at(*lap, c, u), UnsupportedOrderError);
  const LocalGeometry geo = local_geometry(c, u, 2);
  EXPECT_THROW(H.jet(geo, 1), UnsupportedOrderError);
}

TEST(Calculus, MeanCurvatureFieldMatchesExtrinsicH) {
  const Chart c = make_perturbed_equator(2, 0.1, 1);
  const MeanCurvatureField H;
  for (const auto& u : random_points(c.domain(), 5, 53)) {
    const LocalGeometry geo = geometry_for(H, c, u, 0);
    EXPECT_NEAR(H.jet(geo, 0).value(), extrinsic_at(c, u).H, 1e-14);
  }
}

// Analytic Laplacian against the FD engine at steps h and h/2.
TEST(Calculus, FiniteDifferenceLaplacianConvergesAtSecondOrder) {
  const Chart c = make_perturbed_equator(2, 0.1, 1);
  const auto f = coordinate_field(4, 0);
  for (const auto& u : random_points(c.domain(), 3, 59)) {
    const double exact = laplacian_at(*f, c, u);
    const double h = 1e-2;
    const double e1 =
        std::abs(laplacian_at(*f, c.with_engine(EngineMode::finite_difference, h), u) - exact);
    const double e2 =
        std::abs(laplacian_at(*f, c.with_engine(EngineMode::finite_difference, h / 2), u) - exact);
    const double e3 =
        std::abs(laplacian_at(*f, c.with_engine(EngineMode::finite_difference, h / 4), u) - exact);
    EXPECT_GE(std::log2(e1 / e2), 1.9);
    EXPECT_GE(std::log2(e2 / e3), 1.9);
  }
}
