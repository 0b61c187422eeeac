#include "biharm/chart.hpp"

#include <cmath>
#include <map>
#include <random>
#include <sstream>

namespace biharm {
namespace {

// Second-order central stencils for d^m/du^m, as (offset in steps, weight * h^m).
struct StencilTap {
  int offset;
  double weight;
};

const std::vector<StencilTap>& central_stencil(int m) {
  static const std::vector<StencilTap> stencils[5] = {
      {{0, 1.0}},
      {{-1, -0.5}, {1, 0.5}},
      {{-1, 1.0}, {0, -2.0}, {1, 1.0}},
      {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}},
      {{-2, 1.0}, {-1, -4.0}, {0, 6.0}, {1, -4.0}, {2, 1.0}},
  };
  return stencils[m];
}

ChartJet analytic_jet(const Chart& chart, std::span<const double> u, int order) {
  const int n = chart.dimension();
  std::vector<Taylor> params;
  params.reserve(n);
  for (int i = 0; i < n; ++i) params.push_back(Taylor::variable(n, order, i, u[i]));
  ChartJet jet{order, chart.immersion()(params)};
  return jet;
}

ChartJet fd_jet(const Chart& chart, std::span<const double> u, int order) {
  const int n = chart.dimension();
  const int m = chart.ambient_dimension();
  const double h = chart.fd_step();
  std::map<std::vector<int>, Eigen::VectorXd> cache;
  auto sample = [&](const std::vector<int>& offsets) -> const Eigen::VectorXd& {
    auto it = cache.find(offsets);
    if (it != cache.end()) return it->second;
    std::vector<double> p(u.begin(), u.end());
    for (int i = 0; i < n; ++i) p[i] += offsets[i] * h;
    return cache.emplace(offsets, evaluate_point(chart, p)).first->second;
  };

  ChartJet jet;
  jet.order = order;
  jet.components.assign(m, Taylor(n, order));
  const int count = monomial_count(n, order);
  for (int idx = 0; idx < count; ++idx) {
    const MultiIndex& alpha = monomial(n, idx);
    Eigen::VectorXd d = Eigen::VectorXd::Zero(m);
    double scale = 1.0, fact = 1.0;
    // Tensor product of the per-axis stencils.
    std::vector<int> offsets(n, 0);
    std::function<void(int, double)> walk = [&](int axis, double w) {
      if (axis == n) {
        d += w * sample(offsets);
        return;
      }
      for (const auto& tap : central_stencil(alpha[axis])) {
        offsets[axis] = tap.offset;
        walk(axis + 1, w * tap.weight);
      }
      offsets[axis] = 0;
    };
    walk(0, 1.0);
    for (int i = 0; i < n; ++i) {
      scale *= std::pow(h, alpha[i]);
      for (int k = 2; k <= alpha[i]; ++k) fact *= k;
    }
    for (int c = 0; c < m; ++c) jet.components[c].coeff(idx) = d[c] / (scale * fact);
  }
  return jet;
}

}  // namespace

std::string format_point(std::span<const double> u) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < u.size(); ++i) os << (i ? ", " : "") << u[i];
  os << ')';
  return os.str();
}

ParameterDomain::ParameterDomain(std::vector<AxisSpec> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw InvalidInputError("parameter domain needs at least one axis");
  for (const auto& a : axes_)
    if (!(a.lower < a.upper)) throw InvalidInputError("parameter axis needs lower < upper");
}

void ParameterDomain::require_interior(std::span<const double> u) const {
  if (static_cast<int>(u.size()) != dimension())
    throw InvalidInputError("point has " + std::to_string(u.size()) + " coordinates, chart needs " +
                            std::to_string(dimension()));
  for (int i = 0; i < dimension(); ++i) {
    const auto& a = axes_[i];
    if (!std::isfinite(u[i])) throw InvalidInputError("non-finite parameter at " + format_point(u));
    if (a.periodic) continue;
    const double slack = 1e-12 * (a.upper - a.lower);
    if (u[i] < a.lower - slack || u[i] > a.upper + slack)
      throw InvalidInputError("point outside chart domain: " + format_point(u));
    if (a.exclude_endpoints && (u[i] <= a.lower + slack || u[i] >= a.upper - slack))
      throw SingularChartError("point on excluded set of the chart: " + format_point(u));
  }
}

std::string to_string(EngineMode mode) {
  return mode == EngineMode::analytic ? "analytic" : "fd";
}

Chart::Chart(std::string name, ParameterDomain domain, Immersion immersion)
    : name_(std::move(name)), domain_(std::move(domain)), immersion_(std::move(immersion)) {}

Chart Chart::with_engine(EngineMode mode, double fd_step) const {
  if (!(fd_step > 0.0)) throw InvalidInputError("finite-difference step must be positive");
  Chart c = *this;
  c.engine_ = mode;
  c.fd_step_ = fd_step;
  return c;
}

Chart Chart::flipped() const {
  Chart c = *this;
  c.orientation_ = -orientation_;
  return c;
}

Chart Chart::with_witness(Eigen::VectorXd v) const {
  if (v.size() != ambient_dimension()) throw InvalidInputError("witness has wrong dimension");
  Chart c = *this;
  c.witness_ = std::move(v);
  return c;
}

Eigen::VectorXd ChartJet::value() const {
  Eigen::VectorXd v(components.size());
  for (std::size_t i = 0; i < components.size(); ++i) v[i] = components[i].value();
  return v;
}

Eigen::VectorXd ChartJet::partial(const MultiIndex& alpha) const {
  Eigen::VectorXd v(components.size());
  for (std::size_t i = 0; i < components.size(); ++i) v[i] = components[i].partial(alpha);
  return v;
}

Eigen::VectorXd ChartJet::partial(std::initializer_list<int> axes) const {
  MultiIndex alpha{};
  for (int a : axes) ++alpha[a];
  return partial(alpha);
}

ChartJet evaluate_jet(const Chart& chart, std::span<const double> u, int order) {
  if (order < 0 || order > kMaxJetOrder)
    throw UnsupportedOrderError("jet order " + std::to_string(order) + " unsupported (max " +
                                std::to_string(kMaxJetOrder) + ")");
  chart.domain().require_interior(u);
  if (chart.engine() == EngineMode::analytic || order == 0) return analytic_jet(chart, u, order);
  return fd_jet(chart, u, order);
}

Eigen::VectorXd evaluate_point(const Chart& chart, std::span<const double> u) {
  const int n = chart.dimension();
  std::vector<Taylor> params;
  params.reserve(n);
  for (int i = 0; i < n; ++i) params.emplace_back(n, 0, u[i]);
  const TaylorVec x = chart.immersion()(params);
  Eigen::VectorXd v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = x[i].value();
  return v;
}

double sphere_constraint_residual(const Chart& chart, std::span<const Point> points) {
  if (points.empty()) throw InvalidInputError("sphere constraint residual needs a non-empty grid");
  double sup = 0.0;
  for (const auto& u : points) {
    chart.domain().require_interior(u);
    sup = std::max(sup, std::abs(evaluate_point(chart, u).norm() - 1.0));
  }
  return sup;
}

std::vector<Point> sample_grid(const ParameterDomain& domain, int per_axis) {
  if (per_axis < 1) throw InvalidInputError("sample grid needs at least one point per axis");
  const int n = domain.dimension();
  std::vector<std::vector<double>> nodes(n);
  for (int i = 0; i < n; ++i) {
    const auto& a = domain.axis(i);
    const double step = (a.upper - a.lower) / per_axis;
    for (int j = 0; j < per_axis; ++j)
      nodes[i].push_back(a.periodic ? a.lower + j * step : a.lower + (j + 0.5) * step);
  }
  std::vector<Point> pts;
  Point cur(n);
  std::function<void(int)> fill = [&](int axis) {
    if (axis == n) {
      pts.push_back(cur);
      return;
    }
    for (double x : nodes[axis]) {
      cur[axis] = x;
      fill(axis + 1);
    }
  };
  fill(0);
  return pts;
}

std::vector<Point> random_points(const ParameterDomain& domain, int count, unsigned seed,
                                 double margin) {
  if (count < 1) throw InvalidInputError("random sample needs at least one point");
  std::mt19937_64 rng(seed);
  std::vector<std::uniform_real_distribution<double>> dist;
  for (const auto& a : domain.axes()) {
    const double pad = a.periodic ? 0.0 : margin * (a.upper - a.lower);
    dist.emplace_back(a.lower + pad, a.upper - pad);
  }
  std::vector<Point> pts(count, Point(domain.dimension()));
  for (auto& p : pts)
    for (int i = 0; i < domain.dimension(); ++i) p[i] = dist[i](rng);
  return pts;
}

}  // namespace biharm
