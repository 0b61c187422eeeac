#pragma once

// Reference computations used only by the tests. None of them go through
// the library's jet pipeline: extrinsic data comes from finite differences
// of plain point evaluations, ambient derivatives on S^3 from an explicit
// intrinsic computation in a chart of S^3 itself.

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "biharm/chart.hpp"
#include "biharm/taylor.hpp"

namespace oracle {

struct FdExtrinsic {
  Eigen::MatrixXd g;
  Eigen::VectorXd X;
  Eigen::VectorXd N;
  Eigen::MatrixXd A;
  double H = 0.0;
  double A2 = 0.0;
  double volume = 0.0;
};

/// Central differences with step h (fourth order for first derivatives), normal
/// from the null space of [dX; X] with the (dX, N, X) orientation rule.
FdExtrinsic fd_extrinsic(const biharm::Chart& chart, const biharm::Point& u, double h = 2e-4);

/// Closed forms for S^n(a) in S^{n+1} (H >= 0 orientation).
double small_sphere_mean_curvature(int n, double a);
double small_sphere_second_form(int n, double a);
/// H (n - |A|^2): the normal residual of a constant-H hypersurface in S^{n+1}.
double constant_h_normal_residual(int n, double H, double A2);

/// S^k(r) x S^{n-k}(s): principal curvatures s/r (k times) and -r/s.
std::vector<double> clifford_curvatures(int n, int k, double r);

/// vol(S^k) from the recursion vol(S^k) = 2 pi vol(S^{k-2}) / (k - 1).
double sphere_volume(int k);

/// Intrinsic derivatives of an ambient function restricted to the unit S^3,
/// computed in the hyperspherical chart Y(a, b, c) of S^3 in R^4.
struct SphereDerivatives {
  Eigen::Vector4d Y;
  Eigen::Matrix<double, 4, 3> dY;  // columns d_i Y
  Eigen::Matrix3d hessian;             // (Hess f)_ij
  double third[3][3][3];               // (nabla_k Hess f)_ij as third[k][i][j]
};

using AmbientScalar = std::function<biharm::Taylor(const biharm::TaylorVec&)>;

SphereDerivatives sphere_derivatives(const AmbientScalar& f, const Eigen::Vector3d& angles);

}  // namespace oracle
