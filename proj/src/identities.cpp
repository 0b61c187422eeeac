#include "biharm/identities.hpp"

#include <cmath>
#include <limits>

#include "biharm/biharmonic.hpp"
#include "biharm/parallel.hpp"

namespace biharm {
namespace {

Eigen::VectorXd to_eigen(const TaylorVec& v) {
  Eigen::VectorXd r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].value();
  return r;
}

// Runs a per-point evaluation over the grid and reduces with max.
template <class F>
double grid_sup(std::span<const Point> points, F&& per_point) {
  if (points.empty()) throw InvalidInputError("identity check needs a non-empty grid");
  std::vector<double> sup(points.size(), 0.0);
  parallel_for(points.size(), [&](std::size_t i) { sup[i] = per_point(points[i]); });
  double s = 0.0;
  for (double v : sup) s = std::max(s, v);
  return s;
}

}  // namespace

HessianRestrictionCheck check_hessian_restriction(const Chart& chart, const AmbientFunction& fn,
                                                  std::span<const double> u) {
  const LocalGeometry geo = local_geometry(chart, u, 2);
  const int n = geo.n;
  const Taylor f = fn.value(geo.X);
  const Eigen::MatrixXd lhs = values(hessian(geo, f));
  const double lap = laplacian(geo, f).value();

  const double normal_slope = to_eigen(fn.gradient(geo.X)).dot(to_eigen(geo.N));
  const Eigen::MatrixXd A = values(geo.A);
  HessianRestrictionCheck r;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double rhs = fn.hessian(geo.X, geo.dX[i], geo.dX[j]).value() + normal_slope * A(i, j);
      r.matrix_residual = std::max(r.matrix_residual, std::abs(lhs(i, j) - rhs));
    }
  const double trace = geo.trace([&](const TaylorVec& U, const TaylorVec& W) {
                          return fn.hessian(geo.X, U, W);
                        }).value() +
                       normal_slope * geo.H.value();
  r.trace_residual = std::abs(lap - trace);
  return r;
}

BilaplacianRestrictionCheck check_bilaplacian_restriction(const Chart& chart,
                                                          const AmbientFunction& fn,
                                                          std::span<const double> u) {
  const LocalGeometry geo = local_geometry(chart, u, 4);
  const int n = geo.n;
  BilaplacianRestrictionCheck r;
  r.lhs = laplacian(geo, laplacian(geo, fn.value(geo.X))).value();

  // tr_M Hess fbar as a jet, then its intrinsic Laplacian.
  const Taylor trace_hess = geo.trace([&](const TaylorVec& U, const TaylorVec& W) {
    return fn.hessian(geo.X, U, W);
  });
  r.terms[0] = laplacian(geo, trace_hess).value();

  const double H = geo.H.value();
  const Eigen::MatrixXd g_inv = values(geo.g_inv);
  const Eigen::MatrixXd A = values(geo.A);
  double trace_third = 0.0;
  Eigen::MatrixXd hess(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      trace_third += g_inv(i, j) * fn.third(geo.X, geo.N, geo.dX[i], geo.dX[j]).value();
      hess(i, j) = fn.hessian(geo.X, geo.dX[i], geo.dX[j]).value();
    }
  r.terms[1] = H * trace_third;
  r.terms[2] = H * H * fn.hessian(geo.X, geo.N, geo.N).value();
  r.terms[3] = -2.0 * H * (g_inv * hess * g_inv).cwiseProduct(A).sum();
  const TaylorVec grad_h = geo.push_forward(gradient(geo, geo.H));
  r.terms[4] = 2.0 * fn.hessian(geo.X, grad_h, geo.N).value();

  const PointResidual b = residuals_from(geo);
  const Eigen::VectorXd field = b.normal * to_eigen(geo.N) - b.tangent_ambient;
  r.terms[5] = field.dot(to_eigen(fn.gradient(geo.X)));

  for (double t : r.terms) r.rhs += t;
  r.residual = std::abs(r.lhs - r.rhs);
  return r;
}

double check_takahashi(const Chart& chart, std::span<const Point> points) {
  return grid_sup(points, [&](const Point& u) {
    const LocalGeometry geo = local_geometry(chart, u, 2);
    double s = 0.0;
    for (const auto& x : geo.X)
      s = std::max(s, std::abs(laplacian(geo, x).value() + geo.n * x.value()));
    return s;
  });
}

CoordinateBilaplacianCheck check_coordinate_bilaplacian(const Chart& chart,
                                                        std::span<const Point> points) {
  if (points.empty()) throw InvalidInputError("identity check needs a non-empty grid");
  std::vector<CoordinateBilaplacianCheck> per(points.size());
  parallel_for(points.size(), [&](std::size_t p) {
    const LocalGeometry geo = local_geometry(chart, points[p], 4);
    const int n = geo.n;
    const double H = geo.H.value();
    const PointResidual b = residuals_from(geo);
    const Eigen::VectorXd X = to_eigen(geo.X);
    const Eigen::VectorXd N = to_eigen(geo.N);
    const Eigen::VectorXd field = b.normal * N - b.tangent_ambient;
    for (std::size_t i = 0; i < geo.X.size(); ++i) {
      const double bilap = laplacian(geo, laplacian(geo, geo.X[i])).value();
      const double reduced = bilap - (n * n + H * H) * X[i] + 2.0 * n * H * N[i];
      // <field, E_i - x_i X>
      const double b_term = field[i] - X[i] * field.dot(X);
      per[p].reduced_residual = std::max(per[p].reduced_residual, std::abs(reduced));
      per[p].full_residual = std::max(per[p].full_residual, std::abs(reduced - b_term));
    }
  });
  CoordinateBilaplacianCheck r;
  for (const auto& c : per) {
    r.full_residual = std::max(r.full_residual, c.full_residual);
    r.reduced_residual = std::max(r.reduced_residual, c.reduced_residual);
  }
  return r;
}

double check_codazzi(const Chart& chart, std::span<const double> u) {
  const LocalGeometry geo = local_geometry(chart, u, 3);
  const int n = geo.n;
  // dA[k](i, j) = (nabla_k A)_ij
  std::vector<Eigen::MatrixXd> dA(n, Eigen::MatrixXd::Zero(n, n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = geo.A[i][j].derivative(k).value();
        for (int l = 0; l < n; ++l)
          v -= geo.gamma[l][k][i].value() * geo.A[l][j].value() +
               geo.gamma[l][k][j].value() * geo.A[i][l].value();
        dA[k](i, j) = v;
      }
  double defect = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) defect = std::max(defect, std::abs(dA[k](i, j) - dA[i](k, j)));
  return defect;
}

std::string to_string(ForcingVerdict v) {
  switch (v) {
    case ForcingVerdict::proportional_and_minimal: return "proportional-and-minimal";
    case ForcingVerdict::not_proportional: return "not-proportional";
    case ForcingVerdict::violation: return "violation";
  }
  return "violation";
}

MinimalityForcingCheck check_minimality_forcing(const Chart& chart, std::span<const Point> points,
                                                double tol) {
  if (points.empty()) throw InvalidInputError("identity check needs a non-empty grid");
  struct Fit {
    double phi = 0.0, rel = 0.0, h = 0.0;
  };
  std::vector<Fit> fits(points.size());
  parallel_for(points.size(), [&](std::size_t p) {
    const LocalGeometry geo = local_geometry(chart, points[p], 4);
    const Eigen::VectorXd x = to_eigen(geo.X);
    Eigen::VectorXd bilap(x.size());
    for (std::size_t i = 0; i < geo.X.size(); ++i)
      bilap[i] = laplacian(geo, laplacian(geo, geo.X[i])).value();
    Fit& f = fits[p];
    f.phi = bilap.dot(x) / x.squaredNorm();
    const double scale = bilap.norm();
    f.rel = scale < 1e-14 ? 0.0 : (bilap - f.phi * x).norm() / scale;
    f.h = std::abs(geo.H.value());
  });
  MinimalityForcingCheck r;
  r.phi_min = std::numeric_limits<double>::infinity();
  r.phi_max = -std::numeric_limits<double>::infinity();
  for (const auto& f : fits) {
    r.phi_min = std::min(r.phi_min, f.phi);
    r.phi_max = std::max(r.phi_max, f.phi);
    r.max_relative_fit_residual = std::max(r.max_relative_fit_residual, f.rel);
    r.sup_mean_curvature = std::max(r.sup_mean_curvature, f.h);
  }
  if (r.max_relative_fit_residual >= kProportionalityTolerance)
    r.verdict = ForcingVerdict::not_proportional;
  else
    r.verdict = r.sup_mean_curvature <= tol ? ForcingVerdict::proportional_and_minimal
                                            : ForcingVerdict::violation;
  return r;
}

}  // namespace biharm
