#include "biharm/calculus.hpp"

#include <algorithm>
#include <cmath>

namespace biharm {

// ---------------------------------------------------------------------------
// Ambient functions

namespace {

Taylor inner(const TaylorVec& a, const TaylorVec& b) { return dot(a, b); }

}  // namespace

Taylor LinearAmbientFunction::value(const TaylorVec& X) const {
  return dot(X, std::span<const double>(v_.data(), v_.size()));
}

TaylorVec LinearAmbientFunction::gradient(const TaylorVec& X) const {
  const Taylor f = value(X);
  TaylorVec r;
  r.reserve(X.size());
  for (std::size_t c = 0; c < X.size(); ++c) r.push_back(v_[c] - f * X[c]);
  return r;
}

Taylor LinearAmbientFunction::hessian(const TaylorVec& X, const TaylorVec& U,
                                      const TaylorVec& W) const {
  return -(value(X) * inner(U, W));
}

Taylor LinearAmbientFunction::third(const TaylorVec&, const TaylorVec& Z, const TaylorVec& U,
                                    const TaylorVec& W) const {
  const Taylor dz = dot(Z, std::span<const double>(v_.data(), v_.size()));
  return -(dz * inner(U, W));
}

Taylor QuadraticAmbientFunction::value(const TaylorVec& X) const {
  const Taylor l = linear_.value(X);
  return l * l;
}

TaylorVec QuadraticAmbientFunction::gradient(const TaylorVec& X) const {
  return scaled(linear_.gradient(X), 2.0 * linear_.value(X));
}

Taylor QuadraticAmbientFunction::hessian(const TaylorVec& X, const TaylorVec& U,
                                         const TaylorVec& W) const {
  const auto& v = linear_.direction();
  const std::span<const double> vs(v.data(), v.size());
  const Taylor l = linear_.value(X);
  return 2.0 * (dot(U, vs) * dot(W, vs)) - 2.0 * (l * l * inner(U, W));
}

Taylor QuadraticAmbientFunction::third(const TaylorVec& X, const TaylorVec& Z, const TaylorVec& U,
                                       const TaylorVec& W) const {
  const auto& v = linear_.direction();
  const std::span<const double> vs(v.data(), v.size());
  const Taylor l = linear_.value(X);
  const Taylor bracket = inner(Z, U) * dot(W, vs) + inner(Z, W) * dot(U, vs) +
                         2.0 * (dot(Z, vs) * inner(U, W));
  return -2.0 * (l * bracket);
}

// ---------------------------------------------------------------------------
// Fields

Taylor AmbientField::jet(const LocalGeometry& geo, int order) const {
  if (geo.order < order) throw UnsupportedOrderError("ambient field jet exceeds geometry order");
  return fn_->value(geo.X).truncated(order);
}

FieldKind AmbientField::kind() const {
  if (dynamic_cast<const QuadraticAmbientFunction*>(fn_.get())) return FieldKind::ambient_quadratic;
  return FieldKind::ambient_linear;
}

Taylor MeanCurvatureField::jet(const LocalGeometry& geo, int order) const {
  if (geo.order < order + 2)
    throw UnsupportedOrderError("mean curvature jet of order " + std::to_string(order) +
                                " needs immersion order " + std::to_string(order + 2));
  return geo.H.truncated(order);
}

Taylor LaplacianField::jet(const LocalGeometry& geo, int order) const {
  return laplacian(geo, inner_->jet(geo, order + 2)).truncated(order);
}

int LaplacianField::chart_order(int order) const {
  return std::max(inner_->chart_order(order + 2), order + 2);
}

FieldPtr linear_field(const Eigen::VectorXd& v) {
  return std::make_shared<AmbientField>(std::make_shared<LinearAmbientFunction>(v));
}

FieldPtr quadratic_field(const Eigen::VectorXd& v) {
  return std::make_shared<AmbientField>(std::make_shared<QuadraticAmbientFunction>(v));
}

FieldPtr coordinate_field(int ambient_dimension, int axis) {
  return linear_field(Eigen::VectorXd::Unit(ambient_dimension, axis));
}

LocalGeometry geometry_for(const ScalarField& field, const Chart& chart, std::span<const double> u,
                           int order) {
  const int needed = std::max(2, field.chart_order(order));
  if (needed > kMaxJetOrder)
    throw UnsupportedOrderError("field jet of order " + std::to_string(order) +
                                " needs immersion order " + std::to_string(needed) + " (max " +
                                std::to_string(kMaxJetOrder) + ")");
  return local_geometry(chart, u, needed);
}

// ---------------------------------------------------------------------------
// Jet-level operators

TaylorVec gradient(const LocalGeometry& geo, const Taylor& f) {
  const int n = geo.n;
  TaylorVec df;
  for (int j = 0; j < n; ++j) df.push_back(f.derivative(j));
  TaylorVec r(n, Taylor(n, std::min(df[0].order(), geo.g_inv[0][0].order())));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r[i].add_product(geo.g_inv[i][j], df[j]);
  return r;
}

TaylorMat hessian(const LocalGeometry& geo, const Taylor& f) {
  const int n = geo.n;
  TaylorVec df;
  for (int k = 0; k < n; ++k) df.push_back(f.derivative(k));
  TaylorMat h(n, std::vector<Taylor>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Taylor hij = df[i].derivative(j);
      for (int k = 0; k < n; ++k) hij.add_product(geo.gamma[k][i][j], df[k], -1.0);
      h[i][j] = hij;
      if (j != i) h[j][i] = hij;
    }
  return h;
}

Taylor laplacian(const LocalGeometry& geo, const Taylor& f) {
  const TaylorMat h = hessian(geo, f);
  const int n = geo.n;
  Taylor r(n, std::min(h[0][0].order(), geo.g_inv[0][0].order()));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r.add_product(geo.g_inv[i][j], h[i][j]);
  return r;
}

// ---------------------------------------------------------------------------
// Pointwise operations

ChristoffelData christoffels_at(const Chart& chart, std::span<const double> u) {
  const LocalGeometry geo = local_geometry(chart, u, 2);
  const int n = geo.n;
  ChristoffelData c{n, std::vector<double>(n * n * n)};
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c.gamma[(k * n + i) * n + j] = geo.gamma[k][i][j].value();
  return c;
}

double metric_compatibility_residual(const Chart& chart, std::span<const double> u) {
  const LocalGeometry geo = local_geometry(chart, u, 2);
  const ChristoffelData c = christoffels_at(chart, u);
  const Eigen::MatrixXd g = values(geo.g);
  const int n = geo.n;
  double sup = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double r = geo.g[i][j].derivative(k).value();
        for (int l = 0; l < n; ++l) r -= c(l, k, i) * g(l, j) + c(l, k, j) * g(i, l);
        sup = std::max(sup, std::abs(r));
      }
  return sup;
}

Gradient gradient_at(const ScalarField& field, const Chart& chart, std::span<const double> u) {
  const LocalGeometry geo = geometry_for(field, chart, u, 1);
  const TaylorVec grad = gradient(geo, field.jet(geo, 1));
  Gradient r;
  r.components = Eigen::VectorXd(geo.n);
  for (int i = 0; i < geo.n; ++i) r.components[i] = grad[i].value();
  const TaylorVec amb = geo.push_forward(grad);
  r.ambient = Eigen::VectorXd(amb.size());
  for (std::size_t c = 0; c < amb.size(); ++c) r.ambient[c] = amb[c].value();
  return r;
}

Eigen::MatrixXd hessian_at(const ScalarField& field, const Chart& chart, std::span<const double> u) {
  const LocalGeometry geo = geometry_for(field, chart, u, 2);
  return values(hessian(geo, field.jet(geo, 2)));
}

double laplacian_at(const ScalarField& field, const Chart& chart, std::span<const double> u) {
  const LocalGeometry geo = geometry_for(field, chart, u, 2);
  return laplacian(geo, field.jet(geo, 2)).value();
}

double bilaplacian_at(const ScalarField& field, const Chart& chart, std::span<const double> u) {
  const LocalGeometry geo = geometry_for(field, chart, u, 4);
  return laplacian(geo, laplacian(geo, field.jet(geo, 4))).value();
}

}  // namespace biharm
