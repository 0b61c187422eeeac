#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "biharm/taylor.hpp"

namespace biharm {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation on an excluded boundary set of the chart (e.g. a pole).
class SingularChartError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class UnsupportedOrderError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class InvalidInputError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// The induced metric is degenerate at the evaluation point.
class ImmersionError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

using Point = std::vector<double>;

std::string format_point(std::span<const double> u);

struct AxisSpec {
  double lower = 0.0;
  double upper = 1.0;
  bool periodic = false;
  /// Endpoints belong to the excluded set where the chart is singular.
  bool exclude_endpoints = false;
};

class ParameterDomain {
 public:
  ParameterDomain() = default;
  explicit ParameterDomain(std::vector<AxisSpec> axes);

  int dimension() const { return static_cast<int>(axes_.size()); }
  const AxisSpec& axis(int i) const { return axes_[i]; }
  const std::vector<AxisSpec>& axes() const { return axes_; }

  /// Throws SingularChartError on the excluded set and InvalidInputError
  /// outside the domain.
  void require_interior(std::span<const double> u) const;

 private:
  std::vector<AxisSpec> axes_;
};

enum class EngineMode { analytic, finite_difference };

std::string to_string(EngineMode mode);

/// Immersion evaluated on jets of the parameters; returns the n+2 ambient
/// coordinates. Plain point evaluation uses order-0 jets.
using Immersion = std::function<TaylorVec(std::span<const Taylor>)>;

/// Parametric hypersurface chart X: domain -> S^{n+1} in R^{n+2}.
///
/// Charts are immutable values; all evaluation helpers are free functions and
/// safe to call concurrently.
class Chart {
 public:
  Chart(std::string name, ParameterDomain domain, Immersion immersion);

  const std::string& name() const { return name_; }
  const ParameterDomain& domain() const { return domain_; }
  int dimension() const { return domain_.dimension(); }
  int ambient_dimension() const { return domain_.dimension() + 2; }
  const Immersion& immersion() const { return immersion_; }

  EngineMode engine() const { return engine_; }
  double fd_step() const { return fd_step_; }
  /// +1 for the default orientation rule, -1 for the flipped normal.
  int orientation() const { return orientation_; }
  const std::optional<Eigen::VectorXd>& hemisphere_witness() const { return witness_; }

  Chart with_engine(EngineMode mode, double fd_step = kDefaultFdStep) const;
  Chart flipped() const;
  Chart with_witness(Eigen::VectorXd v) const;

  static constexpr double kDefaultFdStep = 1e-3;

 private:
  std::string name_;
  ParameterDomain domain_;
  Immersion immersion_;
  EngineMode engine_ = EngineMode::analytic;
  double fd_step_ = kDefaultFdStep;
  int orientation_ = 1;
  std::optional<Eigen::VectorXd> witness_;
};

/// Value and all partial derivatives of the immersion up to `order`.
struct ChartJet {
  int order = 0;
  TaylorVec components;  // one Taylor jet per ambient coordinate

  Eigen::VectorXd value() const;
  /// d^alpha X, e.g. partial({0, 1}) = d_0 d_1 X.
  Eigen::VectorXd partial(std::initializer_list<int> axes) const;
  Eigen::VectorXd partial(const MultiIndex& alpha) const;
};

inline constexpr int kMaxJetOrder = 4;

ChartJet evaluate_jet(const Chart& chart, std::span<const double> u, int order);
Eigen::VectorXd evaluate_point(const Chart& chart, std::span<const double> u);

/// sup over the points of | |X(u)| - 1 |.
double sphere_constraint_residual(const Chart& chart, std::span<const Point> points);

/// Tensor grid with `per_axis` points per axis: uniform from the lower end on
/// periodic axes, cell centres on bounded axes (never touching endpoints).
std::vector<Point> sample_grid(const ParameterDomain& domain, int per_axis);

/// Uniform random interior points; bounded axes keep a margin of `margin`
/// times the axis length away from both ends.
std::vector<Point> random_points(const ParameterDomain& domain, int count, unsigned seed,
                                 double margin = 0.1);

}  // namespace biharm
