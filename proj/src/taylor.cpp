#include "biharm/taylor.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace biharm {
namespace {

struct ProductTerm {
  std::uint8_t a, b, r;
};

// Index tables for one parameter count, covering all degrees up to kMaxOrder.
struct MonomialTable {
  int vars = 0;
  std::vector<MultiIndex> monomials;
  std::array<int, Taylor::kMaxOrder + 2> count{};    // count[d] = #monomials of degree < d
  std::vector<ProductTerm> products;                 // sorted by result index
  std::array<int, Taylor::kMaxOrder + 1> product_end{};
  // raise[axis][i] = index of monomials[i] + e_axis (only for degree < kMaxOrder)
  std::array<std::vector<int>, Taylor::kMaxVars> raise;
  std::vector<double> factorial;  // alpha! per monomial

  int find(const MultiIndex& alpha) const {
    for (std::size_t i = 0; i < monomials.size(); ++i)
      if (monomials[i] == alpha) return static_cast<int>(i);
    return -1;
  }
};

int degree(const MultiIndex& a) { return a[0] + a[1] + a[2] + a[3]; }

void enumerate(int vars, int deg, int axis, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (axis == vars - 1) {
    cur[axis] = deg;
    out.push_back(cur);
    cur[axis] = 0;
    return;
  }
  for (int k = deg; k >= 0; --k) {
    cur[axis] = k;
    enumerate(vars, deg - k, axis + 1, cur, out);
  }
  cur[axis] = 0;
}

MonomialTable build_table(int vars) {
  MonomialTable t;
  t.vars = vars;
  t.count[0] = 0;
  for (int d = 0; d <= Taylor::kMaxOrder; ++d) {
    if (vars == 0) {
      if (d == 0) t.monomials.push_back(MultiIndex{});
    } else {
      MultiIndex cur{};
      enumerate(vars, d, 0, cur, t.monomials);
    }
    t.count[d + 1] = static_cast<int>(t.monomials.size());
  }
  const int total = static_cast<int>(t.monomials.size());
  for (int r = 0; r < total; ++r) {
    for (int a = 0; a < total; ++a) {
      MultiIndex need = t.monomials[r];
      bool ok = true;
      for (int k = 0; k < 4; ++k) {
        need[k] -= t.monomials[a][k];
        if (need[k] < 0) ok = false;
      }
      if (!ok) continue;
      const int b = t.find(need);
      t.products.push_back({static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
                            static_cast<std::uint8_t>(r)});
    }
  }
  for (int d = 0; d <= Taylor::kMaxOrder; ++d) {
    const int limit = t.count[d + 1];
    t.product_end[d] = static_cast<int>(
        std::count_if(t.products.begin(), t.products.end(),
                      [limit](const ProductTerm& p) { return p.r < limit; }));
  }
  for (int axis = 0; axis < vars; ++axis) {
    t.raise[axis].assign(total, -1);
    for (int i = 0; i < t.count[Taylor::kMaxOrder]; ++i) {
      MultiIndex up = t.monomials[i];
      ++up[axis];
      t.raise[axis][i] = t.find(up);
    }
  }
  t.factorial.resize(total);
  for (int i = 0; i < total; ++i) {
    double f = 1.0;
    for (int k = 0; k < 4; ++k)
      for (int m = 2; m <= t.monomials[i][k]; ++m) f *= m;
    t.factorial[i] = f;
  }
  return t;
}

const MonomialTable& table(int vars) {
  static const std::array<MonomialTable, Taylor::kMaxVars + 1> tables = [] {
    std::array<MonomialTable, Taylor::kMaxVars + 1> ts;
    for (int v = 0; v <= Taylor::kMaxVars; ++v) ts[v] = build_table(v);
    return ts;
  }();
  return tables[vars];
}

}  // namespace

int monomial_count(int vars, int order) { return table(vars).count[order + 1]; }

const MultiIndex& monomial(int vars, int index) { return table(vars).monomials[index]; }

int monomial_index(int vars, const MultiIndex& alpha) { return table(vars).find(alpha); }

Taylor::Taylor(int vars, int order, double value)
    : vars_(static_cast<std::uint8_t>(vars)), order_(static_cast<std::uint8_t>(order)) {
  if (vars < 0 || vars > kMaxVars) throw std::invalid_argument("Taylor: unsupported parameter count");
  if (order < 0 || order > kMaxOrder) throw std::invalid_argument("Taylor: unsupported order");
  std::fill_n(c_.begin(), size(), 0.0);
  c_[0] = value;
}

Taylor Taylor::variable(int vars, int order, int axis, double value) {
  Taylor t(vars, order, value);
  if (order > 0) t.c_[1 + axis] = 1.0;
  return t;
}

int Taylor::size() const { return table(vars_).count[order_ + 1]; }

double Taylor::partial(const MultiIndex& alpha) const {
  const auto& t = table(vars_);
  if (degree(alpha) > order_) throw std::out_of_range("Taylor::partial: order exceeds jet order");
  const int i = t.find(alpha);
  return c_[i] * t.factorial[i];
}

double Taylor::partial(std::initializer_list<int> axes) const {
  MultiIndex alpha{};
  for (int a : axes) ++alpha[a];
  return partial(alpha);
}

Taylor Taylor::derivative(int axis) const {
  assert(order_ > 0 && axis < vars_);
  Taylor r(vars_, order_ - 1);
  const auto& t = table(vars_);
  const auto& up = t.raise[axis];
  const int n = r.size();
  for (int i = 0; i < n; ++i) {
    const int j = up[i];
    r.c_[i] = (t.monomials[i][axis] + 1) * c_[j];
  }
  return r;
}

Taylor Taylor::truncated(int order) const {
  if (order >= order_) return *this;
  Taylor r = *this;
  r.order_ = static_cast<std::uint8_t>(order);
  return r;
}

Taylor Taylor::operator-() const {
  Taylor r = *this;
  for (int i = 0, n = size(); i < n; ++i) r.c_[i] = -c_[i];
  return r;
}

Taylor& Taylor::operator+=(const Taylor& o) {
  assert(vars_ == o.vars_);
  order_ = std::min(order_, o.order_);
  for (int i = 0, n = size(); i < n; ++i) c_[i] += o.c_[i];
  return *this;
}

Taylor& Taylor::operator-=(const Taylor& o) {
  assert(vars_ == o.vars_);
  order_ = std::min(order_, o.order_);
  for (int i = 0, n = size(); i < n; ++i) c_[i] -= o.c_[i];
  return *this;
}

Taylor& Taylor::operator*=(const Taylor& o) {
  *this = *this * o;
  return *this;
}

Taylor& Taylor::operator*=(double s) {
  for (int i = 0, n = size(); i < n; ++i) c_[i] *= s;
  return *this;
}

void Taylor::add_product(const Taylor& a, const Taylor& b, double scale) {
  assert(vars_ == a.vars_ && vars_ == b.vars_);
  order_ = std::min({order_, a.order_, b.order_});
  const auto& t = table(vars_);
  const int end = t.product_end[order_];
  const ProductTerm* p = t.products.data();
  if (scale == 1.0) {
    for (int k = 0; k < end; ++k) c_[p[k].r] += a.c_[p[k].a] * b.c_[p[k].b];
  } else {
    for (int k = 0; k < end; ++k) c_[p[k].r] += scale * a.c_[p[k].a] * b.c_[p[k].b];
  }
}

Taylor Taylor::compose(std::span<const double> g) const {
  // Horner in the increment d = x - x0, which has no constant term.
  Taylor d = *this;
  d.c_[0] = 0.0;
  const int m = order_;
  Taylor r(vars_, order_, g[m]);
  for (int k = m - 1; k >= 0; --k) {
    r = r * d;
    r.c_[0] += g[k];
  }
  return r;
}

Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }

Taylor operator*(const Taylor& a, const Taylor& b) {
  Taylor r(a.vars(), std::min(a.order(), b.order()));
  r.add_product(a, b);
  return r;
}

Taylor operator/(const Taylor& a, const Taylor& b) { return a * reciprocal(b); }
Taylor operator+(Taylor a, double s) { return a += s; }
Taylor operator+(double s, Taylor a) { return a += s; }
Taylor operator-(Taylor a, double s) { return a -= s; }
Taylor operator-(double s, const Taylor& a) { return (-a) += s; }
Taylor operator*(Taylor a, double s) { return a *= s; }
Taylor operator*(double s, Taylor a) { return a *= s; }
Taylor operator/(Taylor a, double s) { return a /= s; }
Taylor operator/(double s, const Taylor& a) { return reciprocal(a) *= s; }

Taylor reciprocal(const Taylor& x) {
  const double x0 = x.value();
  if (x0 == 0.0) throw std::domain_error("Taylor: reciprocal of a jet with zero value");
  std::array<double, Taylor::kMaxOrder + 1> g{};
  double p = 1.0 / x0;
  for (int m = 0; m <= x.order(); ++m) {
    g[m] = (m % 2 == 0 ? p : -p);
    p /= x0;
  }
  return x.compose({g.data(), static_cast<std::size_t>(x.order() + 1)});
}

Taylor sqrt(const Taylor& x) {
  const double x0 = x.value();
  if (x0 <= 0.0) throw std::domain_error("Taylor: sqrt of a non-positive jet");
  std::array<double, Taylor::kMaxOrder + 1> g{};
  // binom(1/2, m) * x0^(1/2 - m)
  double binom = 1.0;
  double p = std::sqrt(x0);
  for (int m = 0; m <= x.order(); ++m) {
    g[m] = binom * p;
    binom *= (0.5 - m) / (m + 1);
    p /= x0;
  }
  return x.compose({g.data(), static_cast<std::size_t>(x.order() + 1)});
}

Taylor sin(const Taylor& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  const double cycle[4] = {s, c, -s, -c};
  std::array<double, Taylor::kMaxOrder + 1> g{};
  double fact = 1.0;
  for (int m = 0; m <= x.order(); ++m) {
    if (m > 1) fact *= m;
    g[m] = cycle[m % 4] / fact;
  }
  return x.compose({g.data(), static_cast<std::size_t>(x.order() + 1)});
}

Taylor cos(const Taylor& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  const double cycle[4] = {c, -s, -c, s};
  std::array<double, Taylor::kMaxOrder + 1> g{};
  double fact = 1.0;
  for (int m = 0; m <= x.order(); ++m) {
    if (m > 1) fact *= m;
    g[m] = cycle[m % 4] / fact;
  }
  return x.compose({g.data(), static_cast<std::size_t>(x.order() + 1)});
}

Taylor exp(const Taylor& x) {
  const double e = std::exp(x.value());
  std::array<double, Taylor::kMaxOrder + 1> g{};
  double fact = 1.0;
  for (int m = 0; m <= x.order(); ++m) {
    if (m > 1) fact *= m;
    g[m] = e / fact;
  }
  return x.compose({g.data(), static_cast<std::size_t>(x.order() + 1)});
}

Taylor dot(const TaylorVec& a, const TaylorVec& b) {
  assert(a.size() == b.size() && !a.empty());
  Taylor r(a[0].vars(), std::min(a[0].order(), b[0].order()));
  for (std::size_t i = 0; i < a.size(); ++i) r.add_product(a[i], b[i]);
  return r;
}

Taylor dot(const TaylorVec& a, std::span<const double> b) {
  assert(a.size() == b.size() && !a.empty());
  Taylor r(a[0].vars(), a[0].order());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (b[i] != 0.0) r += a[i] * b[i];
  return r;
}

TaylorVec scaled(const TaylorVec& a, const Taylor& s) {
  TaylorVec r;
  r.reserve(a.size());
  for (const auto& x : a) r.push_back(x * s);
  return r;
}

TaylorVec derivative(const TaylorVec& a, int axis) {
  TaylorVec r;
  r.reserve(a.size());
  for (const auto& x : a) r.push_back(x.derivative(axis));
  return r;
}

std::vector<double> values(const TaylorVec& a) {
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i].value();
  return r;
}

TaylorMat inverse(const TaylorMat& m) {
  const std::size_t n = m.size();
  TaylorMat a = m;
  TaylorMat inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    inv[i].reserve(n);
    for (std::size_t j = 0; j < n; ++j)
      inv[i].push_back(Taylor(m[0][0].vars(), m[0][0].order(), i == j ? 1.0 : 0.0));
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col].value()) > std::abs(a[piv][col].value())) piv = r;
    if (a[piv][col].value() == 0.0) throw std::domain_error("inverse: singular jet matrix");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const Taylor rp = reciprocal(a[col][col]);
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] *= rp;
      inv[col][j] *= rp;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const Taylor f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j].add_product(f, a[col][j], -1.0);
        inv[r][j].add_product(f, inv[col][j], -1.0);
      }
    }
  }
  return inv;
}

}  // namespace biharm
