#include "biharm/biharmonic.hpp"

#include <cmath>

#include "biharm/calculus.hpp"
#include "biharm/parallel.hpp"

namespace biharm {
namespace {

TangentResidual tangent_from(const LocalGeometry& geo, const AmbientSpace& ambient) {
  const int n = geo.n;
  const Eigen::MatrixXd g = values(geo.g);
  const Eigen::MatrixXd g_inv = values(geo.g_inv);
  const Eigen::MatrixXd A = values(geo.A);
  const double H = geo.H.value();
  const TaylorVec grad_jet = gradient(geo, geo.H);
  Eigen::VectorXd grad(n);
  for (int i = 0; i < n; ++i) grad[i] = grad_jet[i].value();

  Eigen::MatrixXd frame(geo.X.size(), n);
  for (int i = 0; i < n; ++i)
    for (std::size_t c = 0; c < geo.X.size(); ++c) frame(c, i) = geo.dX[i][c].value();
  Eigen::VectorXd N(geo.N.size());
  for (std::size_t c = 0; c < geo.N.size(); ++c) N[c] = geo.N[c].value();

  // (Ric(N))^T components: g^kj Ric(N, d_j X)
  Eigen::VectorXd ric_lower(n);
  for (int j = 0; j < n; ++j) ric_lower[j] = ambient.ricci(n, N, frame.col(j));
  const Eigen::VectorXd ric_t = g_inv * ric_lower;

  TangentResidual r;
  r.components = 2.0 * g_inv * (A * grad) + H * grad - 2.0 * H * ric_t;
  r.ambient = frame * r.components;
  r.norm = std::sqrt(std::max(0.0, r.components.dot(g * r.components)));
  return r;
}

}  // namespace

std::string to_string(Classification c) {
  switch (c) {
    case Classification::minimal: return "minimal";
    case Classification::biharmonic_nonminimal: return "biharmonic-nonminimal";
    case Classification::neither: return "neither";
  }
  return "neither";
}

PointResidual residuals_from(const LocalGeometry& geo, const AmbientSpace& ambient) {
  if (geo.order < 4) throw UnsupportedOrderError("normal residual needs immersion order 4");
  PointResidual p;
  const double H = geo.H.value();
  p.mean_curvature = H;
  p.normal = laplacian(geo, geo.H).value() - H * geo.A2.value() + H * ambient.ricci_normal(geo.n);
  TangentResidual t = tangent_from(geo, ambient);
  p.tangent = std::move(t.components);
  p.tangent_ambient = std::move(t.ambient);
  p.tangent_norm = t.norm;
  return p;
}

double normal_residual(const Chart& chart, std::span<const double> u) {
  return residuals_from(local_geometry(chart, u, 4)).normal;
}

TangentResidual tangent_residual(const Chart& chart, std::span<const double> u) {
  return tangent_from(local_geometry(chart, u, 3), AmbientSpace{});
}

double default_tolerance(const Chart& chart) {
  return chart.engine() == EngineMode::analytic ? kAnalyticTolerance : kFiniteDifferenceTolerance;
}

ResidualReport classify(const Chart& chart, std::span<const Point> points, double tol) {
  if (!(tol > 0.0)) throw InvalidInputError("classification tolerance must be positive");
  if (points.empty()) throw InvalidInputError("classification needs a non-empty grid");
  ResidualReport report;
  report.points.assign(points.begin(), points.end());
  report.values.resize(points.size());
  report.tolerance = tol;
  parallel_for(points.size(), [&](std::size_t i) {
    try {
      report.values[i] = residuals_from(local_geometry(chart, points[i], 4));
    } catch (const GeometryError& e) {
      throw GeometryError(std::string("residual evaluation failed at ") + format_point(points[i]) +
                          ": " + e.what());
    }
  });
  for (const auto& v : report.values) {
    report.sup_normal = std::max(report.sup_normal, std::abs(v.normal));
    report.sup_tangent = std::max(report.sup_tangent, v.tangent_norm);
    report.sup_mean_curvature = std::max(report.sup_mean_curvature, std::abs(v.mean_curvature));
  }
  if (report.sup_mean_curvature <= tol)
    report.classification = Classification::minimal;
  else if (report.sup_normal <= tol && report.sup_tangent <= tol)
    report.classification = Classification::biharmonic_nonminimal;
  else
    report.classification = Classification::neither;
  return report;
}

}  // namespace biharm
