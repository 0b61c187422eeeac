#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "biharm/biharmonic.hpp"
#include "biharm/calculus.hpp"
#include "biharm/catalog.hpp"
#include "biharm/identities.hpp"
#include "biharm/parallel.hpp"
#include "biharm/quadrature.hpp"

using namespace biharm;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string surface;
  int res = 32;
  int points = 25;
  std::optional<double> tol;
  std::string engine = "analytic";
  double h = Chart::kDefaultFdStep;
  std::string fn = "linear";
  unsigned seed = 1;
  int threads = 0;
  std::string format;
  bool verbose = false;
  std::string V;
  std::string identity;
  std::string integrand = "area";
  std::string axis;
  std::string quantity;
  std::string values;
  std::string range;
  std::string axis_res;
  std::string rule = "auto";
};

// ---------------------------------------------------------------------------
// Output

std::string number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_json(std::ostream& os, const json& j, int indent = 0) {
  const std::string pad(indent + 2, ' '), end(indent, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << pad << json(it.key()).dump() << ": ";
        write_json(os, it.value(), indent + 2);
      }
      os << "\n" << end << "}";
      return;
    }
    case json::value_t::array: {
      bool scalars = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      if (scalars) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write_json(os, j[i], indent);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write_json(os, j[i], indent + 2);
      }
      os << "\n" << end << "]";
      return;
    }
    case json::value_t::number_float:
      os << number(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

json vec(const Eigen::VectorXd& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

json point(const Point& u) { return json(u); }

/// One results entry; a missing threshold means the value is informational.
json check(double residual, std::optional<double> threshold) {
  json r;
  r["residual"] = residual;
  if (threshold) {
    r["threshold"] = *threshold;
    r["pass"] = std::isfinite(residual) && residual <= *threshold;
  } else {
    r["threshold"] = nullptr;
    r["pass"] = true;
  }
  return r;
}

struct Report {
  json doc;
  std::vector<std::string> gating;  // checks that decide the exit code
};

int emit(const Options& o, Report& rep, double ms) {
  json& d = rep.doc;
  d["timing_ms"] = ms;
  bool ok = true;
  for (const auto& name : rep.gating) ok = ok && d["results"][name]["pass"].get<bool>();
  const std::string format = o.format.empty() ? "json" : o.format;
  if (format == "json") {
    write_json(std::cout, d);
    std::cout << "\n";
  } else {
    std::cout << "check,residual,threshold,pass\n";
    for (auto it = d["results"].begin(); it != d["results"].end(); ++it) {
      const json& r = it.value();
      std::cout << it.key() << "," << (r["residual"].is_number() ? number(r["residual"]) : "") << ","
                << (r["threshold"].is_number() ? number(r["threshold"]) : "") << ","
                << (r["pass"].get<bool>() ? "true" : "false") << "\n";
    }
  }
  return ok ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// Inputs

CatalogEntry load_surface(const Options& o) {
  if (o.surface.empty()) throw UsageError("--surface is required");
  CatalogEntry e = [&] {
    try {
      return parse_descriptor(o.surface);
    } catch (const InvalidInputError& err) {
      throw UsageError(std::string("--surface: ") + err.what());
    }
  }();
  if (o.engine == "fd") {
    if (!(o.h > 0.0)) throw UsageError("--h must be positive");
    e.chart = e.chart.with_engine(EngineMode::finite_difference, o.h);
  }
  return e;
}

Eigen::VectorXd parse_vector(const std::string& text, int dim) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size()) throw UsageError("--V: bad component '" + tok + "'");
    v.push_back(x);
  }
  if (static_cast<int>(v.size()) != dim)
    throw UsageError("--V: expected " + std::to_string(dim) + " components, got " + std::to_string(v.size()) +
                     " in '" + text + "'");
  return Eigen::Map<Eigen::VectorXd>(v.data(), dim);
}

Eigen::VectorXd random_unit(int dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = d(rng);
  return v.normalized();
}

/// --V, else the hemisphere witness, else the last ambient axis.
Eigen::VectorXd direction(const Options& o, const Chart& c) {
  if (!o.V.empty()) return parse_vector(o.V, c.ambient_dimension());
  if (c.hemisphere_witness()) return *c.hemisphere_witness();
  return Eigen::VectorXd::Unit(c.ambient_dimension(), c.ambient_dimension() - 1);
}

double tolerance_or(const Options& o, double fallback) {
  if (!o.tol) return fallback;
  if (!(*o.tol > 0.0)) throw UsageError("--tol must be positive");
  return *o.tol;
}

/// Quadrature grid from --res / --axis-res and --rule, overriding the
/// resolution when `res` is given.
QuadratureGrid make_grid(const Options& o, const ParameterDomain& d, std::optional<int> res = std::nullopt) {
  std::vector<int> counts(d.dimension(), res.value_or(o.res));
  if (!o.axis_res.empty() && !res) {
    counts.clear();
    std::stringstream ss(o.axis_res);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != tok.size()) throw UsageError("--axis-res: bad count '" + tok + "'");
      counts.push_back(v);
    }
  }
  if (static_cast<int>(counts.size()) != d.dimension())
    throw UsageError("--axis-res: expected " + std::to_string(d.dimension()) + " counts, got '" + o.axis_res + "'");
  for (int c : counts)
    if (c < kMinResolution) throw UsageError("resolution " + std::to_string(c) + " is below the minimum of 4");
  if (o.rule == "auto") return build_grid(d, counts);
  std::vector<AxisRule> axes;
  for (int i = 0; i < d.dimension(); ++i) axes.push_back(gauss_legendre(counts[i], d.axis(i).lower, d.axis(i).upper));
  return QuadratureGrid(std::move(axes));
}

json header(const Options& o, const Chart& c, double tol) {
  json d;
  d["surface"] = c.name();
  d["engine"] = to_string(c.engine());
  d["resolution"] = o.res;
  d["tolerance"] = tol;
  d["results"] = json::object();
  return d;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_analyze(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const CatalogEntry e = load_surface(o);
  const Chart& c = e.chart;
  const double tol = tolerance_or(o, default_tolerance(c));
  const auto pts = sample_grid(c.domain(), o.res);
  const ResidualReport r = classify(c, pts, tol);

  std::vector<ExtrinsicData> ext(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { ext[i] = extrinsic_at(c, pts[i]); });

  Report rep{header(o, c, tol), {}};
  json& d = rep.doc;
  d["classification"] = to_string(r.classification);
  d["points"] = pts.size();
  double h_min = std::numeric_limits<double>::infinity(), h_max = -h_min;
  double a_min = h_min, a_max = -h_min;
  for (const auto& x : ext) {
    h_min = std::min(h_min, x.H);
    h_max = std::max(h_max, x.H);
    a_min = std::min(a_min, x.A2);
    a_max = std::max(a_max, x.A2);
  }
  d["summary"] = {{"H_inf", h_min}, {"H_sup", h_max}, {"A2_inf", a_min}, {"A2_sup", a_max}};
  d["results"]["sup_B_N"] = check(r.sup_normal, tol);
  d["results"]["sup_B_T"] = check(r.sup_tangent, tol);
  d["results"]["sup_H"] = check(r.sup_mean_curvature, tol);

  const auto& oc = e.oracle;
  const double oracle_tol = c.engine() == EngineMode::analytic ? 1e-8 : kFiniteDifferenceTolerance;
  if (oc.mean_curvature) {
    double dh = 0.0, da = 0.0, dk = 0.0;
    for (const auto& x : ext) {
      dh = std::max(dh, std::abs(x.H - *oc.mean_curvature));
      da = std::max(da, std::abs(x.A2 - *oc.second_form_norm2));
      const auto k = principal_curvatures(x);
      for (std::size_t i = 0; i < k.size(); ++i) dk = std::max(dk, std::abs(k[i] - (*oc.principal_curvatures)[i]));
    }
    d["results"]["oracle_H"] = check(dh, oracle_tol);
    d["results"]["oracle_A2"] = check(da, oracle_tol);
    d["results"]["oracle_principal_curvatures"] = check(dk, oracle_tol);
    rep.gating = {"oracle_H", "oracle_A2", "oracle_principal_curvatures"};
  }
  if (oc.classification) {
    d["oracle_classification"] = to_string(*oc.classification);
    d["results"]["oracle_classification"] = check(*oc.classification == r.classification ? 0.0 : 1.0, 0.0);
    rep.gating.push_back("oracle_classification");
  }
  if (o.verbose) {
    json per = json::array();
    for (std::size_t i = 0; i < pts.size(); ++i)
      per.push_back({{"u", point(pts[i])},
                     {"B_N", r.values[i].normal},
                     {"B_T", r.values[i].tangent_norm},
                     {"H", r.values[i].mean_curvature},
                     {"A2", ext[i].A2}});
    d["per_point"] = per;
  }
  return emit(o, rep, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
}

int cmd_verify(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const CatalogEntry e = load_surface(o);
  const Chart& c = e.chart;
  if (o.points < 1) throw UsageError("--points must be at least 1");
  const auto pts = random_points(c.domain(), o.points, o.seed);
  const auto V = o.V.empty() ? random_unit(c.ambient_dimension(), o.seed) : parse_vector(o.V, c.ambient_dimension());
  std::unique_ptr<AmbientFunction> fn;
  if (o.fn == "linear")
    fn = std::make_unique<LinearAmbientFunction>(V);
  else
    fn = std::make_unique<QuadraticAmbientFunction>(V);

  const std::string& id = o.identity;
  const double fallback = id == "hessian"       ? 1e-9
                          : id == "bilaplacian" ? 1e-7
                          : id == "takahashi"   ? 1e-10
                          : id == "coordinates" ? 1e-6
                          : id == "codazzi"     ? 1e-8
                                                : kAnalyticTolerance;
  const double tol = tolerance_or(o, fallback);
  Report rep{header(o, c, tol), {id}};
  json& d = rep.doc;
  d["identity"] = id;
  d["points"] = pts.size();
  json per = json::array();

  if (id == "hessian" || id == "bilaplacian") {
    d["function"] = fn->name();
    d["V"] = vec(V);
  }
  if (id == "hessian") {
    std::vector<HessianRestrictionCheck> r(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) { r[i] = check_hessian_restriction(c, *fn, pts[i]); });
    double m = 0.0, t = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      m = std::max(m, r[i].matrix_residual);
      t = std::max(t, r[i].trace_residual);
      per.push_back({{"u", point(pts[i])}, {"matrix", r[i].matrix_residual}, {"trace", r[i].trace_residual}});
    }
    d["results"]["hessian"] = check(std::max(m, t), tol);
    d["details"] = {{"matrix_residual", m}, {"trace_residual", t}};
  } else if (id == "bilaplacian") {
    std::vector<BilaplacianRestrictionCheck> r(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) { r[i] = check_bilaplacian_restriction(c, *fn, pts[i]); });
    double sup = 0.0;
    std::array<double, 6> term_sup{};
    for (std::size_t i = 0; i < r.size(); ++i) {
      sup = std::max(sup, r[i].residual);
      for (int k = 0; k < 6; ++k) term_sup[k] = std::max(term_sup[k], std::abs(r[i].terms[k]));
      per.push_back({{"u", point(pts[i])},
                     {"lhs", r[i].lhs},
                     {"rhs", r[i].rhs},
                     {"terms", r[i].terms},
                     {"residual", r[i].residual}});
    }
    d["results"]["bilaplacian"] = check(sup, tol);
    d["details"] = {{"sup_abs_terms", term_sup}};
  } else if (id == "takahashi") {
    d["results"]["takahashi"] = check(check_takahashi(c, pts), tol);
  } else if (id == "coordinates") {
    const auto r = check_coordinate_bilaplacian(c, pts);
    d["results"]["coordinates"] = check(r.full_residual, tol);
    d["details"] = {{"reduced_residual", r.reduced_residual}};
  } else if (id == "codazzi") {
    std::vector<double> r(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) { r[i] = check_codazzi(c, pts[i]); });
    for (std::size_t i = 0; i < r.size(); ++i) per.push_back({{"u", point(pts[i])}, {"residual", r[i]}});
    d["results"]["codazzi"] = check(*std::max_element(r.begin(), r.end()), tol);
  } else {
    const auto r = check_minimality_forcing(c, pts, tol);
    json entry = check(r.sup_mean_curvature, tol);
    entry["pass"] = r.verdict != ForcingVerdict::violation;
    d["results"]["minimality-forcing"] = entry;
    d["details"] = {{"verdict", to_string(r.verdict)},
                    {"phi_min", r.phi_min},
                    {"phi_max", r.phi_max},
                    {"max_relative_fit_residual", r.max_relative_fit_residual},
                    {"sup_H", r.sup_mean_curvature}};
  }
  if (o.verbose && !per.empty()) d["per_point"] = per;
  return emit(o, rep, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
}

int cmd_integrate(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const CatalogEntry e = load_surface(o);
  const Chart& c = e.chart;
  const QuadratureGrid grid = make_grid(o, c.domain());
  const std::string& what = o.integrand;
  const double tol = tolerance_or(o, what == "laplacian-coordinate" ? 1e-9 : 1e-8);
  Report rep{header(o, c, tol), {}};
  json& d = rep.doc;
  d["integrand"] = what;
  json rules = json::array();
  for (const auto& a : grid.axes()) rules.push_back({{"rule", to_string(a.rule)}, {"nodes", a.nodes.size()}});
  d["quadrature"] = rules;
  json& res = d["results"];

  if (what == "area") {
    const double area = integrate_scalar(c, ConstantField(1.0), grid);
    if (e.oracle.area) {
      res["area"] = check(std::abs(area - *e.oracle.area), tol);
      res["area"]["oracle"] = *e.oracle.area;
      rep.gating = {"area"};
    } else {
      res["area"] = check(std::numeric_limits<double>::quiet_NaN(), std::nullopt);
    }
    res["area"]["value"] = area;
  } else if (what == "laplacian-coordinate") {
    const Eigen::VectorXd V = direction(o, c);
    d["V"] = vec(V);
    const double v = integrate_scalar(c, LaplacianField(linear_field(V)), grid);
    res["laplacian_coordinate"] = check(std::abs(v), tol);
    res["laplacian_coordinate"]["value"] = v;
    rep.gating = {"laplacian_coordinate"};
  } else {
    const Eigen::VectorXd V = direction(o, c);
    d["V"] = vec(V);
    const auto r = main_theorem_identity(c, V, grid);
    const std::pair<const char*, double> parts[] = {
        {"combined", r.combined}, {"first_step", r.first_step}, {"second_step", r.second_step}};
    for (const auto& [name, value] : parts) {
      res[name] = check(std::abs(value), tol);
      res[name]["value"] = value;
      rep.gating.push_back(name);
    }
    if (c.hemisphere_witness()) {
      d["hemisphere_witness"] = vec(*c.hemisphere_witness());
      d["min_f"] = r.min_f;
    }
  }
  return emit(o, rep, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
}

std::vector<double> sweep_values(const Options& o, const std::vector<double>& fallback) {
  std::vector<double> out;
  if (!o.values.empty() && !o.range.empty()) throw UsageError("--values and --range are exclusive");
  if (!o.range.empty()) {
    double a = 0, b = 0, s = 0;
    char c1 = 0, c2 = 0, extra = 0;
    std::istringstream in(o.range);
    if (!(in >> a >> c1 >> b >> c2 >> s) || c1 != ':' || c2 != ':' || (in >> extra))
      throw UsageError("--range: expected start:stop:step, got '" + o.range + "'");
    if (s > 0)
      for (int i = 0; a + i * s <= b + 1e-9 * s; ++i) out.push_back(a + i * s);
    if (out.empty()) throw UsageError("--range: empty range '" + o.range + "'");
    return out;
  }
  if (o.values.empty()) return fallback;
  std::stringstream ss(o.values);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size()) throw UsageError("--values: bad value '" + tok + "'");
    out.push_back(x);
  }
  if (out.empty()) throw UsageError("--values: empty range");
  return out;
}

std::string with_param(const std::string& descriptor, const std::string& key, double value) {
  const auto colon = descriptor.find(':');
  std::ostringstream val;
  val.precision(17);
  val << value;
  std::string kind = descriptor.substr(0, colon), rest = colon == std::string::npos ? "" : descriptor.substr(colon + 1);
  std::vector<std::string> toks;
  std::stringstream ss(rest);
  std::string tok;
  bool found = false;
  while (std::getline(ss, tok, ',')) {
    if (tok.rfind(key + "=", 0) == 0) {
      tok = key + "=" + val.str();
      found = true;
    }
    if (!tok.empty()) toks.push_back(tok);
  }
  if (!found) toks.push_back(key + "=" + val.str());
  std::string out = kind + ":";
  for (std::size_t i = 0; i < toks.size(); ++i) out += (i ? "," : "") + toks[i];
  return out;
}

int cmd_sweep(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const CatalogEntry base = load_surface(o);
  const std::string& axis = o.axis;
  std::string quantity = o.quantity;
  struct Row {
    double parameter, value, error, order;
  };
  std::vector<Row> rows;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  if (axis == "resolution") {
    if (quantity.empty()) quantity = "area";
    if (quantity != "area" && quantity != "laplacian-coordinate" && quantity != "main-identity")
      throw UsageError("--quantity: '" + quantity + "' is not valid for the resolution axis (area, laplacian-coordinate, main-identity)");
    const Chart& c = base.chart;
    const Eigen::VectorXd V = direction(o, c);
    for (double p : sweep_values(o, {8, 16, 32, 64})) {
      if (p != std::floor(p) || p < 4) throw UsageError("--values: resolution '" + number(p) + "' must be an integer >= 4");
      const QuadratureGrid grid = make_grid(o, c.domain(), static_cast<int>(p));
      double v = 0, err = nan;
      if (quantity == "area") {
        v = integrate_scalar(c, ConstantField(1.0), grid);
        if (base.oracle.area) err = std::abs(v - *base.oracle.area);
      } else if (quantity == "laplacian-coordinate") {
        v = integrate_scalar(c, LaplacianField(linear_field(V)), grid);
        err = std::abs(v);
      } else {
        v = main_theorem_identity(c, V, grid).combined;
        err = std::abs(v);
      }
      rows.push_back({p, v, err, nan});
    }
  } else if (axis == "fd-step") {
    if (quantity.empty()) quantity = "laplacian";
    if (quantity != "laplacian") throw UsageError("--quantity: '" + quantity + "' is not valid for the fd-step axis (laplacian)");
    const Chart c = base.chart.with_engine(EngineMode::analytic);
    const Eigen::VectorXd V = o.V.empty() ? random_unit(c.ambient_dimension(), o.seed) : parse_vector(o.V, c.ambient_dimension());
    const FieldPtr f = o.fn == "linear" ? linear_field(V) : quadratic_field(V);
    const auto pts = random_points(c.domain(), std::max(1, o.points), o.seed);
    std::vector<double> exact(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) exact[i] = laplacian_at(*f, c, pts[i]);
    for (double h : sweep_values(o, {1e-2, 5e-3, 2.5e-3})) {
      if (!(h > 0)) throw UsageError("--values: fd step '" + number(h) + "' must be positive");
      const Chart fd = c.with_engine(EngineMode::finite_difference, h);
      std::vector<double> got(pts.size());
      parallel_for(pts.size(), [&](std::size_t i) { got[i] = laplacian_at(*f, fd, pts[i]); });
      double err = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i) err = std::max(err, std::abs(got[i] - exact[i]));
      rows.push_back({h, got[0], err, nan});
    }
  } else {
    if (quantity.empty()) quantity = "sup_B_N";
    if (quantity != "sup_B_N") throw UsageError("--quantity: '" + quantity + "' is not valid for the radius axis (sup_B_N)");
    const std::string kind = o.surface.substr(0, o.surface.find(':'));
    if (kind != "smallsphere" && kind != "clifford")
      throw UsageError("--surface: radius sweep needs a smallsphere or clifford surface, got '" + kind + "'");
    const std::string key = kind == "smallsphere" ? "a" : "r";
    std::vector<std::pair<double, CatalogEntry>> entries;
    for (double a : sweep_values(o, {0.5, 0.6, 0.7, 0.8, 0.9, 1.0})) {
      Options oo = o;
      oo.surface = with_param(o.surface, key, a);
      entries.emplace_back(a, load_surface(oo));
    }
    for (const auto& [a, e] : entries) {
      const int n = e.chart.dimension();
      const ResidualReport r = classify(e.chart, sample_grid(e.chart.domain(), o.res), default_tolerance(e.chart));
      const double closed = std::abs(*e.oracle.mean_curvature * (n - *e.oracle.second_form_norm2));
      rows.push_back({a, r.sup_normal, std::abs(r.sup_normal - closed), nan});
    }
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const Row &p = rows[i - 1], &q = rows[i];
    if (axis != "radius" && p.error > 0 && q.error > 0 && std::isfinite(p.error) && std::isfinite(q.error)) {
      // error ~ h^p for FD steps, ~ res^-p for quadrature
      const double ratio = axis == "fd-step" ? p.parameter / q.parameter : q.parameter / p.parameter;
      rows[i].order = std::log(p.error / q.error) / std::log(ratio);
    }
  }

  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  const std::string format = o.format.empty() ? "csv" : o.format;
  if (format == "csv") {
    std::cout << axis << "," << quantity << ",error,order\n";
    for (const auto& r : rows) {
      auto cell = [](double v) { return std::isfinite(v) ? number(v) : std::string(); };
      std::cout << number(r.parameter) << "," << cell(r.value) << "," << cell(r.error) << "," << cell(r.order) << "\n";
    }
  } else {
    json d;
    d["surface"] = base.chart.name();
    d["engine"] = to_string(base.chart.engine());
    d["axis"] = axis;
    d["quantity"] = quantity;
    d["resolution"] = o.res;
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"parameter", r.parameter}, {"value", r.value}, {"error", r.error}, {"order", r.order}});
    d["rows"] = arr;
    d["timing_ms"] = ms;
    write_json(std::cout, d);
    std::cout << "\n";
  }
  return kExitPass;
}

// ---------------------------------------------------------------------------
// Argument handling

/// Expands --config <file> into flags placed before the command-line ones, so
/// explicit flags win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file path");
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw UsageError("--config: cannot read '" + path + "'");
  std::vector<std::string> extra;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("--config: malformed line '" + line + "'");
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key == "verbose") {
      if (value == "true" || value == "1") extra.push_back("--verbose");
      continue;
    }
    extra.push_back("--" + key);
    extra.push_back(value);
  }
  // After the subcommand (and the identity name for verify).
  std::size_t at = std::min<std::size_t>(args.size(), 1);
  if (!args.empty() && args[0] == "verify" && args.size() > 1 && args[1].rfind("-", 0) != 0) at = 2;
  args.insert(args.begin() + at, extra.begin(), extra.end());
  return args;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--surface", o.surface, "Surface descriptor, e.g. smallsphere:n=2,a=0.70710678")->required();
  sub->add_option("--res", o.res, "Points (or quadrature nodes) per axis")->check(CLI::Range(4, 100000));
  sub->add_option("--tol", o.tol, "Pass threshold");
  sub->add_option("--engine", o.engine, "analytic or fd")->check(CLI::IsMember({"analytic", "fd"}));
  sub->add_option("--h", o.h, "Finite-difference step");
  sub->add_option("--threads", o.threads, "Worker threads (default: all cores)")->check(CLI::PositiveNumber);
  sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--seed", o.seed, "Seed for random points and directions");
  sub->add_flag("--verbose", o.verbose, "Per-point detail");
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Biharmonic hypersurface checks on closed-form charts of the unit sphere"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_help_all_flag("--help-all");
  app.add_option("--config", "Flat key=value file mirroring the flags");

  auto* analyze = app.add_subcommand("analyze", "Extrinsic summary, residual suprema and classification");
  add_common(analyze, o);

  auto* verify = app.add_subcommand("verify", "Check one identity at random interior points");
  verify->add_option("identity", o.identity, "Identity name")
      ->required()
      ->check(CLI::IsMember({"hessian", "bilaplacian", "takahashi", "coordinates", "codazzi", "minimality-forcing"}));
  add_common(verify, o);
  verify->add_option("--points", o.points, "Number of random interior points")->check(CLI::PositiveNumber);
  verify->add_option("--fn", o.fn, "Ambient function: linear or quadratic")->check(CLI::IsMember({"linear", "quadratic"}));
  verify->add_option("--V", o.V, "Direction of the ambient function, comma separated");

  auto* integrate = app.add_subcommand("integrate", "Quadrature of a surface integral");
  add_common(integrate, o);
  integrate->add_option("--integrand", o.integrand, "area, laplacian-coordinate or main-identity")
      ->check(CLI::IsMember({"area", "laplacian-coordinate", "main-identity"}));
  integrate->add_option("--V", o.V, "Direction V, comma separated");
  integrate->add_option("--axis-res", o.axis_res, "Per-axis node counts, comma separated (overrides --res)");
  integrate->add_option("--rule", o.rule, "auto (trapezoid on periodic axes) or gauss-legendre on every axis")
      ->check(CLI::IsMember({"auto", "gauss-legendre"}));

  auto* sweep = app.add_subcommand("sweep", "Parameter or convergence study as a table");
  add_common(sweep, o);
  sweep->add_option("--axis", o.axis, "resolution, fd-step or radius")
      ->required()
      ->check(CLI::IsMember({"resolution", "fd-step", "radius"}));
  sweep->add_option("--quantity", o.quantity, "Swept quantity (defaults per axis)");
  sweep->add_option("--values", o.values, "Comma-separated parameter values");
  sweep->add_option("--range", o.range, "start:stop:step (inclusive)");
  sweep->add_option("--points", o.points, "Sample points for the fd-step axis")->check(CLI::PositiveNumber);
  sweep->add_option("--fn", o.fn, "Ambient function: linear or quadratic")->check(CLI::IsMember({"linear", "quadratic"}));
  sweep->add_option("--V", o.V, "Direction V, comma separated");
  sweep->add_option("--rule", o.rule, "Quadrature rule for the resolution axis: auto or gauss-legendre")
      ->check(CLI::IsMember({"auto", "gauss-legendre"}));

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  set_thread_count(o.threads > 0 ? o.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
  try {
    if (*analyze) return cmd_analyze(o);
    if (*verify) return cmd_verify(o);
    if (*integrate) return cmd_integrate(o);
    return cmd_sweep(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const GeometryError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
