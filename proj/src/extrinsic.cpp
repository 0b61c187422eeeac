#include "biharm/extrinsic.hpp"

#include <sstream>

#include <algorithm>
#include <cmath>

namespace biharm {

Eigen::MatrixXd values(const TaylorMat& m) {
  Eigen::MatrixXd r(m.size(), m.empty() ? 0 : m[0].size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) r(i, j) = m[i][j].value();
  return r;
}

TaylorVec LocalGeometry::push_forward(const TaylorVec& components) const {
  TaylorVec r(X.size(), Taylor(n, std::min(components[0].order(), dX[0][0].order())));
  for (int i = 0; i < n; ++i)
    for (std::size_t c = 0; c < X.size(); ++c) r[c].add_product(components[i], dX[i][c]);
  return r;
}

namespace {

// Unit normal to span{d_1 X, ..., d_n X, X}: Gram-Schmidt complement of a
// fixed coordinate axis, chosen at the base point for conditioning. Since the
// unit normal is unique up to sign, the resulting jet does not depend on the
// axis chosen.
TaylorVec unit_normal(const LocalGeometry& geo, int orientation) {
  const int n = geo.n;
  const int m = static_cast<int>(geo.X.size());
  // A = <ddX, N> only sees order K-2 of the normal.
  const int order = geo.order - 2;
  std::vector<TaylorVec> truncated_frame(n + 1);
  for (int i = 0; i <= n; ++i)
    for (const auto& c : i < n ? geo.dX[i] : geo.X) truncated_frame[i].push_back(c.truncated(order));
  std::vector<const TaylorVec*> frame;
  for (const auto& v : truncated_frame) frame.push_back(&v);
  const int k = n + 1;

  TaylorMat gram(k);
  for (int a = 0; a < k; ++a) {
    gram[a].resize(k);
    for (int b = 0; b < k; ++b) gram[a][b] = b < a ? gram[b][a] : dot(*frame[a], *frame[b]);
  }
  const TaylorMat gram_inv = inverse(gram);

  // Base-point projector diagonal to pick the axis that survives best.
  Eigen::MatrixXd F(m, k);
  for (int a = 0; a < k; ++a)
    for (int c = 0; c < m; ++c) F(c, a) = (*frame[a])[c].value();
  const Eigen::MatrixXd P =
      Eigen::MatrixXd::Identity(m, m) - F * values(gram_inv) * F.transpose();
  int axis = 0;
  for (int c = 1; c < m; ++c)
    if (P(c, c) > P(axis, axis)) axis = c;

  // w = e_axis - sum_ab v_a G^ab <v_b, e_axis>
  TaylorVec w(m, Taylor(n, gram_inv[0][0].order()));
  w[axis] += 1.0;
  for (int a = 0; a < k; ++a) {
    Taylor coef(n, gram_inv[0][0].order());
    for (int b = 0; b < k; ++b) coef.add_product(gram_inv[a][b], (*frame[b])[axis]);
    for (int c = 0; c < m; ++c) w[c].add_product(coef, (*frame[a])[c], -1.0);
  }
  const Taylor inv_len = reciprocal(sqrt(dot(w, w)));
  TaylorVec N = scaled(w, inv_len);

  // Orientation: (d_1 X, ..., d_n X, N, X) positively oriented.
  Eigen::MatrixXd frame_matrix(m, m);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < m; ++c) frame_matrix(c, i) = geo.dX[i][c].value();
  for (int c = 0; c < m; ++c) {
    frame_matrix(c, n) = N[c].value();
    frame_matrix(c, n + 1) = geo.X[c].value();
  }
  const double sign = frame_matrix.determinant() < 0.0 ? -1.0 : 1.0;
  if (sign * orientation < 0)
    for (auto& x : N) x = -x;
  return N;
}

}  // namespace

LocalGeometry local_geometry(const Chart& chart, std::span<const double> u, int order) {
  if (order < 2 || order > kMaxJetOrder)
    throw UnsupportedOrderError("local geometry needs an immersion jet of order 2..4, got " +
                                std::to_string(order));
  LocalGeometry geo;
  const int n = chart.dimension();
  geo.n = n;
  geo.order = order;
  geo.u.assign(u.begin(), u.end());
  geo.X = evaluate_jet(chart, u, order).components;

  geo.dX.reserve(n);
  for (int i = 0; i < n; ++i) geo.dX.push_back(derivative(geo.X, i));
  geo.ddX.assign(n, std::vector<TaylorVec>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      geo.ddX[i][j] = derivative(geo.dX[i], j);
      if (j != i) geo.ddX[j][i] = geo.ddX[i][j];
    }

  geo.g.assign(n, std::vector<Taylor>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      geo.g[i][j] = dot(geo.dX[i], geo.dX[j]);
      if (j != i) geo.g[j][i] = geo.g[i][j];
    }
  {
    const Eigen::MatrixXd g0 = values(geo.g);
    const double det = g0.determinant();
    const double scale = g0.diagonal().prod();
    if (!(det > kDegenerateMetric * scale) || !(scale > 0.0)) {
      std::ostringstream os;
      os.precision(3);
      os << "degenerate induced metric (det g = " << det << ") at " << format_point(u);
      throw ImmersionError(os.str());
    }
  }
  {
    // Every consumer of g^-1 (Christoffels, H, Laplacians) needs order K-2 only.
    TaylorMat g_low = geo.g;
    for (auto& row : g_low)
      for (auto& x : row) x = x.truncated(order - 2);
    geo.g_inv = inverse(g_low);
  }
  {
    // det g by unpivoted elimination; g is positive definite.
    TaylorMat a = geo.g;
    for (auto& row : a)
      for (auto& x : row) x = x.truncated(order - 2);
    Taylor d(n, order - 2, 1.0);
    for (int col = 0; col < n; ++col) {
      const Taylor rp = reciprocal(a[col][col]);
      d *= a[col][col];
      for (int r = col + 1; r < n; ++r) {
        const Taylor f = a[r][col] * rp;
        for (int j = col; j < n; ++j) a[r][j].add_product(f, a[col][j], -1.0);
      }
    }
    geo.volume = sqrt(d);
  }

  geo.N = unit_normal(geo, chart.orientation());

  geo.A.assign(n, std::vector<Taylor>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      geo.A[i][j] = dot(geo.ddX[i][j], geo.N);
      if (j != i) geo.A[j][i] = geo.A[i][j];
    }

  geo.H = Taylor(n, order - 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) geo.H.add_product(geo.g_inv[i][j], geo.A[i][j]);

  // S = g^-1 A, |A|^2 = tr(S S)
  TaylorMat S(n, std::vector<Taylor>(n, Taylor(n, order - 2)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) S[i][j].add_product(geo.g_inv[i][k], geo.A[k][j]);
  geo.A2 = Taylor(n, order - 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) geo.A2.add_product(S[i][j], S[j][i]);

  // Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij)
  std::vector<TaylorMat> dg(n);  // dg[k][i][j] = d_k g_ij
  for (int k = 0; k < n; ++k) {
    dg[k].assign(n, std::vector<Taylor>(n));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        dg[k][i][j] = geo.g[i][j].derivative(k);
        if (j != i) dg[k][j][i] = dg[k][i][j];
      }
  }
  std::vector<TaylorMat> lowered(n, TaylorMat(n, std::vector<Taylor>(n)));  // Gamma_{l,ij}
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        lowered[l][i][j] = 0.5 * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
        if (j != i) lowered[l][j][i] = lowered[l][i][j];
      }
  geo.gamma.assign(n, TaylorMat(n, std::vector<Taylor>(n, Taylor(n, order - 2))));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        for (int l = 0; l < n; ++l) geo.gamma[k][i][j].add_product(geo.g_inv[k][l], lowered[l][i][j]);
        if (j != i) geo.gamma[k][j][i] = geo.gamma[k][i][j];
      }
  return geo;
}

ExtrinsicData extrinsic_from(const LocalGeometry& geo) {
  ExtrinsicData e;
  e.g = values(geo.g);
  e.g_inv = values(geo.g_inv);
  e.volume = geo.volume.value();
  e.X = Eigen::Map<const Eigen::VectorXd>(values(geo.X).data(), geo.X.size());
  const auto nv = values(geo.N);
  e.N = Eigen::Map<const Eigen::VectorXd>(nv.data(), nv.size());
  e.A = values(geo.A);
  e.H = geo.H.value();
  e.A2 = geo.A2.value();
  e.shape = e.g_inv * e.A;
  return e;
}

ExtrinsicData extrinsic_at(const Chart& chart, std::span<const double> u) {
  return extrinsic_from(local_geometry(chart, u, 2));
}

std::vector<double> principal_curvatures(const ExtrinsicData& ext) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(ext.A, ext.g);
  std::vector<double> k(solver.eigenvalues().data(),
                        solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(k.begin(), k.end());
  return k;
}

}  // namespace biharm
