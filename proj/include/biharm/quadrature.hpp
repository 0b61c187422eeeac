#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "biharm/calculus.hpp"
#include "biharm/chart.hpp"

namespace biharm {

enum class QuadratureRule { trapezoidal_periodic, gauss_legendre };

std::string to_string(QuadratureRule rule);

struct AxisRule {
  QuadratureRule rule = QuadratureRule::gauss_legendre;
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Tensor-product rule over a parameter domain.
class QuadratureGrid {
 public:
  explicit QuadratureGrid(std::vector<AxisRule> axes);

  const std::vector<AxisRule>& axes() const { return axes_; }
  std::size_t size() const { return total_; }
  /// Node and weight of the flattened index (last axis fastest).
  Point node(std::size_t index) const;
  double weight(std::size_t index) const;

 private:
  std::vector<AxisRule> axes_;
  std::size_t total_ = 0;
};

/// Gauss-Legendre nodes and weights on (lower, upper).
AxisRule gauss_legendre(int count, double lower, double upper);
AxisRule periodic_trapezoid(int count, double lower, double upper);

inline constexpr int kMinResolution = 4;

/// Periodic axes get the trapezoidal rule, bounded axes Gauss-Legendre
/// (whose nodes never touch the excluded endpoints).
QuadratureGrid build_grid(const ParameterDomain& domain, std::span<const int> resolution);
QuadratureGrid build_grid(const ParameterDomain& domain, int resolution);

/// sum of w * f(u) * sqrt(det g)(u) over the nodes.
double integrate_scalar(const Chart& chart, const ScalarField& field, const QuadratureGrid& grid);

struct MainIdentityIntegrals {
  double combined = 0.0;     // int (n^2 - H^2) f
  double first_step = 0.0;   // int [n^2 f - n H <grad fbar, N>]
  double second_step = 0.0;  // int [n H <grad fbar, N> - H^2 f]
  double min_f = 0.0;        // min of f = <X, V> over the nodes
};

MainIdentityIntegrals main_theorem_identity(const Chart& chart, const Eigen::VectorXd& V,
                                            const QuadratureGrid& grid);

}  // namespace biharm
