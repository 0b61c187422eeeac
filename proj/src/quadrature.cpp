#include "biharm/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "biharm/parallel.hpp"

namespace biharm {

std::string to_string(QuadratureRule rule) {
  return rule == QuadratureRule::trapezoidal_periodic ? "trapezoidal-periodic" : "gauss-legendre";
}

QuadratureGrid::QuadratureGrid(std::vector<AxisRule> axes) : axes_(std::move(axes)) {
  total_ = axes_.empty() ? 0 : 1;
  for (const auto& a : axes_) total_ *= a.nodes.size();
}

Point QuadratureGrid::node(std::size_t index) const {
  Point p(axes_.size());
  for (std::size_t i = axes_.size(); i-- > 0;) {
    const std::size_t m = axes_[i].nodes.size();
    p[i] = axes_[i].nodes[index % m];
    index /= m;
  }
  return p;
}

double QuadratureGrid::weight(std::size_t index) const {
  double w = 1.0;
  for (std::size_t i = axes_.size(); i-- > 0;) {
    const std::size_t m = axes_[i].weights.size();
    w *= axes_[i].weights[index % m];
    index /= m;
  }
  return w;
}

AxisRule gauss_legendre(int count, double lower, double upper) {
  AxisRule r;
  r.rule = QuadratureRule::gauss_legendre;
  r.nodes.resize(count);
  r.weights.resize(count);
  const double mid = 0.5 * (upper + lower), half = 0.5 * (upper - lower);
  for (int i = 0; i < (count + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (count == 1) p0 = 1.0;
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = mid - half * x;
    r.nodes[count - 1 - i] = mid + half * x;
    r.weights[i] = r.weights[count - 1 - i] = half * w;
  }
  return r;
}

AxisRule periodic_trapezoid(int count, double lower, double upper) {
  AxisRule r;
  r.rule = QuadratureRule::trapezoidal_periodic;
  const double h = (upper - lower) / count;
  for (int j = 0; j < count; ++j) {
    r.nodes.push_back(lower + j * h);
    r.weights.push_back(h);
  }
  return r;
}

QuadratureGrid build_grid(const ParameterDomain& domain, std::span<const int> resolution) {
  if (static_cast<int>(resolution.size()) != domain.dimension())
    throw InvalidInputError("quadrature resolution must be given per axis");
  std::vector<AxisRule> axes;
  for (int i = 0; i < domain.dimension(); ++i) {
    if (resolution[i] < kMinResolution)
      throw InvalidInputError("quadrature resolution " + std::to_string(resolution[i]) +
                              " below minimum " + std::to_string(kMinResolution));
    const auto& a = domain.axis(i);
    axes.push_back(a.periodic ? periodic_trapezoid(resolution[i], a.lower, a.upper)
                              : gauss_legendre(resolution[i], a.lower, a.upper));
  }
  return QuadratureGrid(std::move(axes));
}

QuadratureGrid build_grid(const ParameterDomain& domain, int resolution) {
  const std::vector<int> res(domain.dimension(), resolution);
  return build_grid(domain, res);
}

namespace {

template <class F>
std::vector<double> node_values(const QuadratureGrid& grid, F&& eval) {
  std::vector<double> v(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const Point u = grid.node(i);
    try {
      v[i] = grid.weight(i) * eval(u);
    } catch (const GeometryError& e) {
      throw GeometryError("integrand failed at node " + format_point(u) + ": " + e.what());
    }
  });
  return v;
}

}  // namespace

double integrate_scalar(const Chart& chart, const ScalarField& field, const QuadratureGrid& grid) {
  const auto v = node_values(grid, [&](const Point& u) {
    const LocalGeometry geo = geometry_for(field, chart, u, 0);
    return field.jet(geo, 0).value() * geo.volume.value();
  });
  return pairwise_sum(v);
}

MainIdentityIntegrals main_theorem_identity(const Chart& chart, const Eigen::VectorXd& V,
                                            const QuadratureGrid& grid) {
  if (V.size() != chart.ambient_dimension())
    throw InvalidInputError("direction V has wrong dimension");
  const LinearAmbientFunction fn(V);
  const int n = chart.dimension();
  std::vector<double> f_values(grid.size());
  std::vector<std::array<double, 3>> parts(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const Point u = grid.node(i);
    const LocalGeometry geo = local_geometry(chart, u, 2);
    const double w = grid.weight(i) * geo.volume.value();
    const double f = fn.value(geo.X).value();
    const double H = geo.H.value();
    const TaylorVec grad = fn.gradient(geo.X);
    double slope = 0.0;
    for (std::size_t c = 0; c < grad.size(); ++c) slope += grad[c].value() * geo.N[c].value();
    f_values[i] = f;
    parts[i] = {w * (n * n - H * H) * f, w * (n * n * f - n * H * slope),
                w * (n * H * slope - H * H * f)};
  });
  MainIdentityIntegrals r;
  std::vector<double> column(grid.size());
  double* out[3] = {&r.combined, &r.first_step, &r.second_step};
  for (int k = 0; k < 3; ++k) {
    for (std::size_t i = 0; i < grid.size(); ++i) column[i] = parts[i][k];
    *out[k] = pairwise_sum(column);
  }
  r.min_f = std::numeric_limits<double>::infinity();
  for (double f : f_values) r.min_f = std::min(r.min_f, f);
  return r;
}

}  // namespace biharm
