#pragma once

#include <array>
#include <string>
#include <vector>

#include "biharm/calculus.hpp"
#include "biharm/chart.hpp"

namespace biharm {

// Each check evaluates both sides of an identity through separate code paths:
// the left side through the nested intrinsic operators on the restricted
// function, the right side from ambient closed forms contracted with the
// extrinsic data.

/// Hessian of a restriction:
///   Hess f(u, v) = Hess fbar(u, v) + <grad fbar, N> A(u, v),
///   Delta f = tr_M Hess fbar + <grad fbar, N> H.
struct HessianRestrictionCheck {
  double matrix_residual = 0.0;  // max entry
  double trace_residual = 0.0;
};

HessianRestrictionCheck check_hessian_restriction(const Chart& chart, const AmbientFunction& fn,
                                                  std::span<const double> u);

/// Bilaplacian of a restriction. Terms, in order:
///   Delta(tr_M Hess fbar), H tr_M(nabla_N Hess fbar), H^2 Hess fbar(N, N),
///   -2H <Hess fbar, A>, 2 Hess fbar(grad H, N), <B^N N - B^T, grad fbar>.
struct BilaplacianRestrictionCheck {
  double lhs = 0.0;
  std::array<double, 6> terms{};
  double rhs = 0.0;
  double residual = 0.0;
};

BilaplacianRestrictionCheck check_bilaplacian_restriction(const Chart& chart,
                                                          const AmbientFunction& fn,
                                                          std::span<const double> u);

/// sup over coordinates i and points of |Delta x_i + n x_i|.
double check_takahashi(const Chart& chart, std::span<const Point> points);

struct CoordinateBilaplacianCheck {
  /// sup |DD x_i - (n^2 + H^2) x_i + 2nH <N, E_i> - <B^N N - B^T, E_i>|
  double full_residual = 0.0;
  /// Same without the B-term; vanishes exactly on biharmonic surfaces.
  double reduced_residual = 0.0;
};

CoordinateBilaplacianCheck check_coordinate_bilaplacian(const Chart& chart,
                                                        std::span<const Point> points);

/// max over k, i, j of |(nabla_k A)_ij - (nabla_i A)_kj|.
double check_codazzi(const Chart& chart, std::span<const double> u);

enum class ForcingVerdict { proportional_and_minimal, not_proportional, violation };

std::string to_string(ForcingVerdict v);

struct MinimalityForcingCheck {
  ForcingVerdict verdict = ForcingVerdict::not_proportional;
  double phi_min = 0.0;
  double phi_max = 0.0;
  double max_relative_fit_residual = 0.0;
  double sup_mean_curvature = 0.0;
};

inline constexpr double kProportionalityTolerance = 1e-8;

/// Fits DD x_i = phi x_i per point by least squares over i. If every point is
/// proportional, the surface must be minimal (sup |H| <= tol), otherwise the
/// verdict is a violation.
MinimalityForcingCheck check_minimality_forcing(const Chart& chart, std::span<const Point> points,
                                                double tol);

}  // namespace biharm
