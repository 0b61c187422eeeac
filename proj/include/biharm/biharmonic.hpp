#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "biharm/chart.hpp"
#include "biharm/extrinsic.hpp"

namespace biharm {

enum class Classification { minimal, biharmonic_nonminimal, neither };

std::string to_string(Classification c);

/// Residuals of the biharmonic hypersurface equations at one point:
///   B^N = Delta H - H |A|^2 + H Ric(N, N)
///   B^T = 2 A(grad H) + H grad H - 2 H (Ric(N))^T
struct PointResidual {
  double normal = 0.0;            // B^N
  Eigen::VectorXd tangent;        // B^T, chart basis
  Eigen::VectorXd tangent_ambient;
  double tangent_norm = 0.0;      // |B^T|_g
  double mean_curvature = 0.0;
};

/// Needs geo.order >= 4 (Delta H). The ambient is the unit sphere by default.
PointResidual residuals_from(const LocalGeometry& geo, const AmbientSpace& ambient = {});

double normal_residual(const Chart& chart, std::span<const double> u);

struct TangentResidual {
  Eigen::VectorXd components;
  Eigen::VectorXd ambient;
  double norm = 0.0;
};

TangentResidual tangent_residual(const Chart& chart, std::span<const double> u);

struct ResidualReport {
  std::vector<Point> points;
  std::vector<PointResidual> values;
  double sup_normal = 0.0;   // sup |B^N|
  double sup_tangent = 0.0;  // sup |B^T|_g
  double sup_mean_curvature = 0.0;
  double tolerance = 0.0;
  Classification classification = Classification::neither;
};

inline constexpr double kAnalyticTolerance = 1e-7;
inline constexpr double kFiniteDifferenceTolerance = 1e-4;

double default_tolerance(const Chart& chart);

/// Evaluates the residuals on every point; a pointwise failure is rethrown
/// with the offending location in the message.
ResidualReport classify(const Chart& chart, std::span<const Point> points, double tol);

}  // namespace biharm
