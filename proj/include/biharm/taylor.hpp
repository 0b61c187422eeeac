#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace biharm {

/// Multi-index over at most kMaxVars parameter axes.
using MultiIndex = std::array<int, 4>;

/// Truncated multivariate Taylor polynomial.
///
/// Stores the Taylor coefficients c_a = (d^a f)(u0) / a! of a scalar function
/// of `vars` parameters around a base point, for all multi-indices of total
/// degree <= `order`. Coefficients are kept in graded order, so the
/// coefficients of a lower-order truncation form a prefix of the array.
///
/// Binary operations between jets of different order produce a jet of the
/// smaller order. Differentiation lowers the order by one; that is how the
/// nested operators (Laplacian of a Laplacian) keep track of how many exact
/// derivatives remain.
class Taylor {
 public:
  static constexpr int kMaxVars = 4;
  static constexpr int kMaxOrder = 4;
  static constexpr int kCapacity = 70;  // C(4 + 4, 4)

  Taylor() : vars_(0), order_(0) { c_[0] = 0.0; }
  Taylor(int vars, int order, double value = 0.0);

  /// The jet of the coordinate function u_axis around `value`.
  static Taylor variable(int vars, int order, int axis, double value);

  int vars() const { return vars_; }
  int order() const { return order_; }
  int size() const;
  double value() const { return c_[0]; }

  double coeff(int index) const { return c_[index]; }
  double& coeff(int index) { return c_[index]; }
  std::span<const double> coeffs() const { return {c_.data(), static_cast<std::size_t>(size())}; }

  /// Partial derivative d^alpha f at the base point (coefficient times alpha!).
  double partial(const MultiIndex& alpha) const;
  /// Partial derivative with respect to the listed axes, e.g. {0, 0, 1}.
  double partial(std::initializer_list<int> axes) const;

  Taylor derivative(int axis) const;
  Taylor truncated(int order) const;

  Taylor operator-() const;
  Taylor& operator+=(const Taylor& o);
  Taylor& operator-=(const Taylor& o);
  Taylor& operator*=(const Taylor& o);
  Taylor& operator+=(double s) { c_[0] += s; return *this; }
  Taylor& operator-=(double s) { c_[0] -= s; return *this; }
  Taylor& operator*=(double s);
  Taylor& operator/=(double s) { return *this *= 1.0 / s; }

  /// Adds a*b in place (a fused multiply-accumulate on jets).
  void add_product(const Taylor& a, const Taylor& b, double scale = 1.0);

  /// Composes a univariate function with this jet, given the Taylor
  /// coefficients g_m = g^(m)(value()) / m! for m = 0..order().
  Taylor compose(std::span<const double> coefficients) const;

 private:
  std::uint8_t vars_;
  std::uint8_t order_;
  std::array<double, kCapacity> c_;
};

int monomial_count(int vars, int order);
/// Multi-index of the coefficient at `index` in graded order.
const MultiIndex& monomial(int vars, int index);
/// Position of `alpha` in graded order.
int monomial_index(int vars, const MultiIndex& alpha);

Taylor operator+(Taylor a, const Taylor& b);
Taylor operator-(Taylor a, const Taylor& b);
Taylor operator*(const Taylor& a, const Taylor& b);
Taylor operator/(const Taylor& a, const Taylor& b);
Taylor operator+(Taylor a, double s);
Taylor operator+(double s, Taylor a);
Taylor operator-(Taylor a, double s);
Taylor operator-(double s, const Taylor& a);
Taylor operator*(Taylor a, double s);
Taylor operator*(double s, Taylor a);
Taylor operator/(Taylor a, double s);
Taylor operator/(double s, const Taylor& a);

Taylor reciprocal(const Taylor& x);
Taylor sqrt(const Taylor& x);
Taylor sin(const Taylor& x);
Taylor cos(const Taylor& x);
Taylor exp(const Taylor& x);

using TaylorVec = std::vector<Taylor>;
using TaylorMat = std::vector<std::vector<Taylor>>;

Taylor dot(const TaylorVec& a, const TaylorVec& b);
/// Dot product with a constant vector.
Taylor dot(const TaylorVec& a, std::span<const double> b);
TaylorVec scaled(const TaylorVec& a, const Taylor& s);
TaylorVec derivative(const TaylorVec& a, int axis);
std::vector<double> values(const TaylorVec& a);

/// Inverse of a square jet matrix by Gauss-Jordan elimination with partial
/// pivoting on the constant terms. Throws std::domain_error when singular.
TaylorMat inverse(const TaylorMat& m);

}  // namespace biharm
