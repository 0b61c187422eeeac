#pragma once

#include <functional>
#include <memory>
#include <string>

#include <Eigen/Dense>

#include "biharm/chart.hpp"
#include "biharm/extrinsic.hpp"
#include "biharm/taylor.hpp"

namespace biharm {

// ---------------------------------------------------------------------------
// Ambient functions on the unit sphere S^{n+1} with closed-form covariant
// derivatives. All arguments are ambient vectors tangent to the sphere at X.

class AmbientFunction {
 public:
  virtual ~AmbientFunction() = default;

  virtual Taylor value(const TaylorVec& X) const = 0;
  /// Gradient on the sphere (tangent to the sphere at X).
  virtual TaylorVec gradient(const TaylorVec& X) const = 0;
  /// Hessian on the sphere applied to (U, W).
  virtual Taylor hessian(const TaylorVec& X, const TaylorVec& U, const TaylorVec& W) const = 0;
  /// Third covariant derivative (nabla_Z Hess)(U, W).
  virtual Taylor third(const TaylorVec& X, const TaylorVec& Z, const TaylorVec& U,
                       const TaylorVec& W) const = 0;
  virtual std::string name() const = 0;
};

/// f = <X, V>: grad = V - f X, Hess = -f g, nabla Hess = -df (x) g.
class LinearAmbientFunction final : public AmbientFunction {
 public:
  explicit LinearAmbientFunction(Eigen::VectorXd direction) : v_(std::move(direction)) {}

  const Eigen::VectorXd& direction() const { return v_; }
  Taylor value(const TaylorVec& X) const override;
  TaylorVec gradient(const TaylorVec& X) const override;
  Taylor hessian(const TaylorVec& X, const TaylorVec& U, const TaylorVec& W) const override;
  Taylor third(const TaylorVec& X, const TaylorVec& Z, const TaylorVec& U,
               const TaylorVec& W) const override;
  std::string name() const override { return "linear"; }

 private:
  Eigen::VectorXd v_;
};

/// q = <X, V>^2 with l = <X, V>:
///   Hess q = 2 dl (x) dl - 2 l^2 g,
///   (nabla_Z Hess q)(U, W) = -2 l [ <Z,U> dl(W) + <Z,W> dl(U) + 2 dl(Z) <U,W> ].
class QuadraticAmbientFunction final : public AmbientFunction {
 public:
  explicit QuadraticAmbientFunction(Eigen::VectorXd direction) : linear_(std::move(direction)) {}

  Taylor value(const TaylorVec& X) const override;
  TaylorVec gradient(const TaylorVec& X) const override;
  Taylor hessian(const TaylorVec& X, const TaylorVec& U, const TaylorVec& W) const override;
  Taylor third(const TaylorVec& X, const TaylorVec& Z, const TaylorVec& U,
               const TaylorVec& W) const override;
  std::string name() const override { return "quadratic"; }

 private:
  LinearAmbientFunction linear_;
};

// ---------------------------------------------------------------------------
// Scalar fields over a chart.

enum class FieldKind { ambient_linear, ambient_quadratic, derived_h, custom };

class ScalarField {
 public:
  virtual ~ScalarField() = default;

  /// Jet of the field of the given order around geo.u. Requires
  /// geo.order >= chart_order(order).
  virtual Taylor jet(const LocalGeometry& geo, int order) const = 0;
  /// Immersion jet order needed to produce a field jet of `order`.
  virtual int chart_order(int order) const = 0;
  virtual FieldKind kind() const = 0;
};

using FieldPtr = std::shared_ptr<const ScalarField>;

/// Restriction f = fbar o X of an ambient function.
class AmbientField final : public ScalarField {
 public:
  explicit AmbientField(std::shared_ptr<const AmbientFunction> fn) : fn_(std::move(fn)) {}
  Taylor jet(const LocalGeometry& geo, int order) const override;
  int chart_order(int order) const override { return order; }
  FieldKind kind() const override;
  const AmbientFunction& function() const { return *fn_; }

 private:
  std::shared_ptr<const AmbientFunction> fn_;
};

class ConstantField final : public ScalarField {
 public:
  explicit ConstantField(double c) : c_(c) {}
  Taylor jet(const LocalGeometry& geo, int order) const override { return Taylor(geo.n, order, c_); }
  int chart_order(int order) const override { return order; }
  FieldKind kind() const override { return FieldKind::custom; }

 private:
  double c_;
};

/// Mean curvature H; a jet of order k needs immersion order k + 2.
class MeanCurvatureField final : public ScalarField {
 public:
  Taylor jet(const LocalGeometry& geo, int order) const override;
  int chart_order(int order) const override { return order + 2; }
  FieldKind kind() const override { return FieldKind::derived_h; }
};

/// Laplacian of another field, itself a field.
class LaplacianField final : public ScalarField {
 public:
  explicit LaplacianField(FieldPtr inner) : inner_(std::move(inner)) {}
  Taylor jet(const LocalGeometry& geo, int order) const override;
  int chart_order(int order) const override;
  FieldKind kind() const override { return FieldKind::custom; }

 private:
  FieldPtr inner_;
};

/// Arbitrary field given by a jet callback.
class CustomField final : public ScalarField {
 public:
  using Evaluator = std::function<Taylor(const LocalGeometry&, int)>;
  CustomField(Evaluator eval, int extra_order) : eval_(std::move(eval)), extra_(extra_order) {}
  Taylor jet(const LocalGeometry& geo, int order) const override { return eval_(geo, order).truncated(order); }
  int chart_order(int order) const override { return order + extra_; }
  FieldKind kind() const override { return FieldKind::custom; }

 private:
  Evaluator eval_;
  int extra_;
};

FieldPtr linear_field(const Eigen::VectorXd& v);
FieldPtr quadratic_field(const Eigen::VectorXd& v);
FieldPtr coordinate_field(int ambient_dimension, int axis);

/// Builds the local geometry this field needs for a jet of `order`;
/// throws UnsupportedOrderError when that exceeds the chart jet limit.
LocalGeometry geometry_for(const ScalarField& field, const Chart& chart, std::span<const double> u,
                           int order);

// ---------------------------------------------------------------------------
// Jet-level operators. Orders drop as the formulas differentiate.

/// (grad f)^i = g^ij d_j f
TaylorVec gradient(const LocalGeometry& geo, const Taylor& f);
/// Hess_ij = d_i d_j f - Gamma^k_ij d_k f
TaylorMat hessian(const LocalGeometry& geo, const Taylor& f);
/// g^ij Hess_ij
Taylor laplacian(const LocalGeometry& geo, const Taylor& f);

// ---------------------------------------------------------------------------
// Pointwise operations.

struct ChristoffelData {
  int n = 0;
  std::vector<double> gamma;  // gamma[(k * n + i) * n + j] = Gamma^k_ij

  double operator()(int k, int i, int j) const { return gamma[(k * n + i) * n + j]; }
};

ChristoffelData christoffels_at(const Chart& chart, std::span<const double> u);
/// max over k,i,j of |d_k g_ij - Gamma^l_ki g_lj - Gamma^l_kj g_il|
double metric_compatibility_residual(const Chart& chart, std::span<const double> u);

struct Gradient {
  Eigen::VectorXd components;  // chart basis
  Eigen::VectorXd ambient;     // sum (grad f)^i d_i X
};

Gradient gradient_at(const ScalarField& field, const Chart& chart, std::span<const double> u);
Eigen::MatrixXd hessian_at(const ScalarField& field, const Chart& chart, std::span<const double> u);
double laplacian_at(const ScalarField& field, const Chart& chart, std::span<const double> u);
double bilaplacian_at(const ScalarField& field, const Chart& chart, std::span<const double> u);

}  // namespace biharm
