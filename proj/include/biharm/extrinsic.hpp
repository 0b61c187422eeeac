#pragma once

#include <vector>

#include <Eigen/Dense>

#include "biharm/chart.hpp"
#include "biharm/taylor.hpp"

namespace biharm {

/// Round space form of constant sectional curvature c. Only c = 1 (the unit
/// sphere) is exercised; the Ricci contractions keep c explicit.
struct AmbientSpace {
  double curvature = 1.0;

  /// Ric(N, N) for a unit normal of an n-dimensional hypersurface.
  double ricci_normal(int n) const { return n * curvature; }
  /// Ric(u, v) = n c <u, v> on vectors tangent to the ambient space.
  double ricci(int n, const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
    return n * curvature * u.dot(v);
  }
};

/// All extrinsic quantities of a chart around one point, each carried as a
/// Taylor jet so that downstream operators can keep differentiating.
///
/// With an immersion jet of order K: tangents and metric have order K-1;
/// inverse metric, volume density, normal, second fundamental form, mean
/// curvature and Christoffel symbols have order K-2.
struct LocalGeometry {
  int n = 0;
  int order = 0;
  Point u;
  TaylorVec X;
  std::vector<TaylorVec> dX;               // dX[i] = d_i X
  std::vector<std::vector<TaylorVec>> ddX; // ddX[i][j] = d_i d_j X
  TaylorMat g, g_inv;
  Taylor volume;                           // sqrt(det g)
  TaylorVec N;
  TaylorMat A;                             // A_ij = <d_i d_j X, N>
  Taylor H;                                // g^ij A_ij (not normalised)
  Taylor A2;                               // |A|^2
  /// gamma[k][i][j] = Gamma^k_ij
  std::vector<TaylorMat> gamma;

  /// Ambient representative sum_i v^i d_i X of chart-basis components.
  TaylorVec push_forward(const TaylorVec& components) const;
  /// tr_M of an ambient bilinear form evaluated on the tangent frame:
  /// sum g^ij B(d_i X, d_j X), with B(i, j) supplied by the callback.
  template <class Bilinear>
  Taylor trace(Bilinear&& b) const {
    Taylor r(n, order - 2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r.add_product(g_inv[i][j], b(dX[i], dX[j]));
    return r;
  }
};

/// Builds the local geometry at u from an immersion jet of the given order
/// (2 <= order <= 4). Throws ImmersionError when
/// det g <= kDegenerateMetric * g_11 * ... * g_nn, i.e. when the coordinate
/// tangents are (numerically) linearly dependent or one of them vanishes.
LocalGeometry local_geometry(const Chart& chart, std::span<const double> u, int order);

inline constexpr double kDegenerateMetric = 1e-12;

/// Pointwise extrinsic data at a single point (plain values).
struct ExtrinsicData {
  Eigen::MatrixXd g;
  Eigen::MatrixXd g_inv;
  double volume = 0.0;
  Eigen::VectorXd X;
  Eigen::VectorXd N;
  Eigen::MatrixXd A;
  double H = 0.0;
  double A2 = 0.0;
  Eigen::MatrixXd shape;  // S^i_j = g^ik A_kj
};

ExtrinsicData extrinsic_at(const Chart& chart, std::span<const double> u);
ExtrinsicData extrinsic_from(const LocalGeometry& geo);

/// Eigenvalues of the shape operator, ascending.
std::vector<double> principal_curvatures(const ExtrinsicData& ext);

Eigen::MatrixXd values(const TaylorMat& m);

}  // namespace biharm
