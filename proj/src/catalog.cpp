#include "biharm/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "biharm/extrinsic.hpp"

namespace biharm {
namespace {

using std::numbers::pi;

// Standard spherical chart of S^k in R^{k+1} on the first k parameters.
TaylorVec sphere_point(int k, std::span<const Taylor> p) {
  switch (k) {
    case 1: return {cos(p[0]), sin(p[0])};
    case 2: {
      const Taylor st = sin(p[0]);
      return {st * cos(p[1]), st * sin(p[1]), cos(p[0])};
    }
    case 3: {
      const Taylor sp = sin(p[0]);
      const Taylor spst = sp * sin(p[1]);
      return {spst * cos(p[2]), spst * sin(p[2]), sp * cos(p[1]), cos(p[0])};
    }
    default: throw InvalidInputError("sphere chart supports dimensions 1..3");
  }
}

std::vector<AxisSpec> sphere_axes(int k) {
  const AxisSpec polar{0.0, pi, false, true};
  const AxisSpec azimuth{0.0, 2.0 * pi, true, false};
  std::vector<AxisSpec> axes(k - 1, polar);
  axes.push_back(azimuth);
  return axes;
}

void require_dimension(int n, int lo, int hi, const char* what) {
  if (n < lo || n > hi)
    throw InvalidInputError(std::string(what) + ": dimension n=" + std::to_string(n) +
                            " outside " + std::to_string(lo) + ".." + std::to_string(hi));
}

// Chooses the chart orientation so the normal agrees with a closed-form
// normal field at an interior reference point.
Chart orient_like(Chart chart, const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& normal) {
  Point u;
  for (const auto& a : chart.domain().axes()) u.push_back(a.lower + 0.37 * (a.upper - a.lower));
  const LocalGeometry geo = local_geometry(chart, u, 2);
  Eigen::VectorXd N(geo.N.size()), X(geo.X.size());
  for (std::size_t c = 0; c < geo.N.size(); ++c) {
    N[c] = geo.N[c].value();
    X[c] = geo.X[c].value();
  }
  return N.dot(normal(X)) < 0.0 ? chart.flipped() : chart;
}

Classification constant_h_class(double H, double A2, int n) {
  if (std::abs(H) <= kAnalyticTolerance) return Classification::minimal;
  return std::abs(H * (n - A2)) <= kAnalyticTolerance ? Classification::biharmonic_nonminimal
                                                      : Classification::neither;
}

}  // namespace

double unit_sphere_volume(int k) {
  // vol(S^k) = 2 pi^((k+1)/2) / Gamma((k+1)/2)
  return 2.0 * std::pow(pi, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1));
}

CatalogEntry make_small_hypersphere(int n, double a) {
  require_dimension(n, 1, 3, "small hypersphere");
  if (!(a > 0.0 && a <= 1.0)) throw InvalidInputError("small hypersphere radius must lie in (0, 1]");
  const double b = std::sqrt(1.0 - a * a);
  Immersion x = [n, a, b](std::span<const Taylor> p) {
    TaylorVec y = sphere_point(n, p);
    TaylorVec r;
    for (auto& c : y) r.push_back(a * c);
    r.push_back(Taylor(p[0].vars(), p[0].order(), b));
    return r;
  };
  std::ostringstream name;
  name.precision(17);
  name << "smallsphere:n=" << n << ",a=" << a;
  Chart chart(name.str(), ParameterDomain(sphere_axes(n)), std::move(x));
  chart = orient_like(chart, [a, b, n](const Eigen::VectorXd& X) {
    Eigen::VectorXd N(n + 2);
    N.head(n + 1) = -(b / a) * X.head(n + 1);
    N[n + 1] = a;
    return N;
  });
  const Eigen::VectorXd witness = Eigen::VectorXd::Unit(n + 2, n + 1);
  chart = chart.with_witness(witness);

  CatalogOracle o;
  const double kappa = b / a;
  o.mean_curvature = n * kappa;
  o.second_form_norm2 = n * kappa * kappa;
  o.principal_curvatures = std::vector<double>(n, kappa);
  o.area = std::pow(a, n) * unit_sphere_volume(n);
  o.classification = a == 1.0 ? Classification::minimal
                              : constant_h_class(*o.mean_curvature, *o.second_form_norm2, n);
  o.hemisphere_witness = witness;
  return {std::move(chart), std::move(o)};
}

CatalogEntry make_clifford(int n, int k, double r) {
  require_dimension(n, 2, 3, "clifford");
  if (k < 1 || k >= n) throw InvalidInputError("clifford needs 1 <= k < n");
  if (!(r > 0.0 && r < 1.0)) throw InvalidInputError("clifford radius must lie in (0, 1)");
  const double s = std::sqrt(1.0 - r * r);
  Immersion x = [k, n, r, s](std::span<const Taylor> p) {
    TaylorVec first = sphere_point(k, p.first(k));
    TaylorVec second = sphere_point(n - k, p.subspan(k));
    TaylorVec out;
    for (auto& c : first) out.push_back(r * c);
    for (auto& c : second) out.push_back(s * c);
    return out;
  };
  std::vector<AxisSpec> axes = sphere_axes(k);
  for (const auto& a : sphere_axes(n - k)) axes.push_back(a);
  std::ostringstream name;
  name.precision(17);
  name << "clifford:n=" << n << ",k=" << k << ",r=" << r;
  Chart chart(name.str(), ParameterDomain(std::move(axes)), std::move(x));
  chart = orient_like(chart, [k, r, s](const Eigen::VectorXd& X) {
    // X = (r p, s q)  ->  N = (-s p, r q)
    Eigen::VectorXd N(X.size());
    N.head(k + 1) = -(s / r) * X.head(k + 1);
    N.tail(X.size() - k - 1) = (r / s) * X.tail(X.size() - k - 1);
    return N;
  });

  CatalogOracle o;
  const double kp = s / r, kq = -r / s;
  o.mean_curvature = k * kp + (n - k) * kq;
  o.second_form_norm2 = k * kp * kp + (n - k) * kq * kq;
  std::vector<double> pc(k, kp);
  pc.insert(pc.end(), n - k, kq);
  std::sort(pc.begin(), pc.end());
  o.principal_curvatures = pc;
  o.area = std::pow(r, k) * std::pow(s, n - k) * unit_sphere_volume(k) * unit_sphere_volume(n - k);
  o.classification = constant_h_class(*o.mean_curvature, *o.second_form_norm2, n);
  return {std::move(chart), std::move(o)};
}

CatalogEntry make_equator(int n) {
  require_dimension(n, 1, 3, "equator");
  Immersion x = [n](std::span<const Taylor> p) {
    TaylorVec r = sphere_point(n, p);
    r.push_back(Taylor(p[0].vars(), p[0].order(), 0.0));
    return r;
  };
  Chart chart("equator:n=" + std::to_string(n), ParameterDomain(sphere_axes(n)), std::move(x));
  chart = orient_like(chart, [n](const Eigen::VectorXd&) { return Eigen::VectorXd::Unit(n + 2, n + 1).eval(); });
  const Eigen::VectorXd witness = Eigen::VectorXd::Unit(n + 2, n + 1);
  chart = chart.with_witness(witness);
  CatalogOracle o;
  o.mean_curvature = 0.0;
  o.second_form_norm2 = 0.0;
  o.principal_curvatures = std::vector<double>(n, 0.0);
  o.area = unit_sphere_volume(n);
  o.classification = Classification::minimal;
  o.hemisphere_witness = witness;
  return {std::move(chart), std::move(o)};
}

Chart make_perturbed_equator(int n, double eps, int mode) {
  require_dimension(n, 1, 3, "perturbed equator");
  if (!(std::abs(eps) < 0.5)) throw InvalidInputError("perturbation amplitude must satisfy |eps| < 0.5");
  if (mode < 1 || mode > 3) throw InvalidInputError("perturbation mode must be 1, 2 or 3");
  Immersion x = [n, eps, mode](std::span<const Taylor> p) {
    TaylorVec y = sphere_point(n, p);
    Taylor h;
    switch (mode) {
      case 1: h = (n + 1.0) * (y[n] * y[n]) - 1.0; break;
      case 2: h = y[0]; break;
      default: h = y[0] * y[1]; break;
    }
    const Taylor t = eps * h;
    const Taylor ct = cos(t);
    TaylorVec r;
    for (auto& c : y) r.push_back(ct * c);
    r.push_back(sin(t));
    return r;
  };
  std::ostringstream name;
  name.precision(17);
  name << "perturbed:n=" << n << ",eps=" << eps << ",mode=" << mode;
  Chart chart(name.str(), ParameterDomain(sphere_axes(n)), std::move(x));
  return orient_like(chart, [n](const Eigen::VectorXd&) { return Eigen::VectorXd::Unit(n + 2, n + 1).eval(); });
}

CatalogEntry parse_descriptor(const std::string& descriptor) {
  const auto colon = descriptor.find(':');
  const std::string kind = descriptor.substr(0, colon);
  std::map<std::string, std::string> kv;
  if (colon != std::string::npos) {
    std::stringstream ss(descriptor.substr(colon + 1));
    std::string token;
    while (std::getline(ss, token, ',')) {
      if (token.empty()) continue;
      const auto eq = token.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == token.size())
        throw InvalidInputError("malformed descriptor token '" + token + "'");
      kv[token.substr(0, eq)] = token.substr(eq + 1);
    }
  }
  auto number = [&](const std::string& key, double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(it->second, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != it->second.size())
      throw InvalidInputError("bad numeric value in descriptor token '" + key + "=" + it->second + "'");
    return v;
  };
  auto integer = [&](const std::string& key, int fallback) {
    const double v = number(key, fallback);
    if (v != std::floor(v))
      throw InvalidInputError("descriptor token '" + key + "=" + kv[key] + "' must be an integer");
    return static_cast<int>(v);
  };
  auto allow = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : kv) {
      bool ok = k == "flip";
      for (const char* a : keys) ok = ok || k == a;
      if (!ok) throw InvalidInputError("unknown descriptor token '" + k + "=" + v + "' for " + kind);
    }
  };

  CatalogEntry entry{Chart("", ParameterDomain({AxisSpec{}}), nullptr), {}};
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  if (kind == "smallsphere") {
    allow({"n", "a"});
    entry = make_small_hypersphere(integer("n", 2), number("a", inv_sqrt2));
  } else if (kind == "clifford") {
    allow({"n", "k", "r"});
    entry = make_clifford(integer("n", 2), integer("k", 1), number("r", inv_sqrt2));
  } else if (kind == "equator") {
    allow({"n"});
    entry = make_equator(integer("n", 2));
  } else if (kind == "perturbed") {
    allow({"n", "eps", "mode"});
    entry.chart = make_perturbed_equator(integer("n", 2), number("eps", 0.1), integer("mode", 1));
  } else {
    throw InvalidInputError("unknown surface kind '" + kind + "'");
  }
  if (integer("flip", 0) != 0) {
    entry.chart = entry.chart.flipped();
    auto& o = entry.oracle;
    if (o.mean_curvature) o.mean_curvature = -*o.mean_curvature;
    if (o.principal_curvatures) {
      for (double& k : *o.principal_curvatures) k = -k;
      std::sort(o.principal_curvatures->begin(), o.principal_curvatures->end());
    }
  }
  return entry;
}

}  // namespace biharm
