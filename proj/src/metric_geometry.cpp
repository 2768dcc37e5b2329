#include "pltor/metric_geometry.hpp"

#include <cmath>

namespace pltor {

namespace {

// Gram matrix relative to vertex 0 from squared distances.
Eigen::MatrixXd gram_from_sqdist(const Eigen::MatrixXd& D) {
  const int k = static_cast<int>(D.rows()) - 1;
  Eigen::MatrixXd G(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      G(i, j) = 0.5 * (D(0, i + 1) + D(0, j + 1) - D(i + 1, j + 1));
  return G;
}

double mean_offdiag(const Eigen::MatrixXd& D) {
  const int n = static_cast<int>(D.rows());
  double s = 0;
  int cnt = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) { s += D(i, j); ++cnt; }
  return cnt ? s / cnt : 0.0;
}

}  // namespace

double cm_volume(int k, const Eigen::MatrixXd& sqdist) {
  if (sqdist.rows() != k + 1 || sqdist.cols() != k + 1)
    fail(ErrorCode::BadParams, "squared-distance matrix must be (k+1)x(k+1)");
  if (k == 0) return 1.0;
  Eigen::MatrixXd G = gram_from_sqdist(sqdist);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  const auto& ev = es.eigenvalues();
  const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  if (ev.minCoeff() < -1e-9 * scale)
    fail(ErrorCode::NotRealizable,
         "squared distances admit no Euclidean simplex");
  double det = 1.0;
  for (int i = 0; i < k; ++i) det *= std::max(ev(i), 0.0);
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  return std::sqrt(std::max(det, 0.0)) / fact;
}

double signed_volume(const Eigen::MatrixXd& points) {
  const int d = static_cast<int>(points.cols());
  if (points.rows() != d + 1)
    fail(ErrorCode::BadParams, "need d+1 points in d-space");
  Eigen::MatrixXd E(d, d);
  for (int i = 0; i < d; ++i)
    E.row(i) = points.row(i + 1) - points.row(0);
  double fact = 1.0;
  for (int i = 2; i <= d; ++i) fact *= i;
  return E.determinant() / fact;
}

double reduce_angle(double x) {
  double r = std::remainder(x, 2.0 * M_PI);
  if (r <= -M_PI) r += 2.0 * M_PI;
  return r;
}

bool simplex_degenerate(const Eigen::MatrixXd& sqdist) {
  const int k = static_cast<int>(sqdist.rows()) - 1;
  Eigen::MatrixXd G = gram_from_sqdist(sqdist);
  const double det = G.determinant();
  const double mean = mean_offdiag(sqdist);
  double scale = 1.0;
  for (int i = 0; i < k; ++i) scale *= mean;
  return !(det > 1e-24 * scale);
}

double dihedral_angle(const Eigen::MatrixXd& verts,
                      std::span<const int> hinge_positions) {
  const int d = static_cast<int>(verts.cols());
  const int n = static_cast<int>(verts.rows());
  if (n != d + 1 || static_cast<int>(hinge_positions.size()) != d - 1)
    fail(ErrorCode::BadParams, "dihedral angle needs a (d-2)-face of a top");
  std::vector<bool> in_hinge(n, false);
  for (int p : hinge_positions) in_hinge[p] = true;
  std::vector<int> rest;
  for (int i = 0; i < n; ++i)
    if (!in_hinge[i]) rest.push_back(i);

  const Eigen::VectorXd h0 = verts.row(hinge_positions[0]).transpose();
  Eigen::MatrixXd B(d, static_cast<int>(hinge_positions.size()) - 1);
  for (size_t i = 1; i < hinge_positions.size(); ++i)
    B.col(static_cast<int>(i) - 1) =
        verts.row(hinge_positions[i]).transpose() - h0;

  // hinge degeneracy: the (d-2)-simplex spanned must have positive volume
  if (B.cols() > 0) {
    Eigen::MatrixXd G = B.transpose() * B;
    double sc = std::max(G.diagonal().maxCoeff(), 1e-300);
    if (G.determinant() < 1e-24 * std::pow(sc, B.cols()))
      fail(ErrorCode::Degenerate, "hinge has zero (d-2)-volume");
  }

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(B);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(d, B.cols());
  auto perp = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = x - h0;
    if (B.cols() > 0) y -= Q * (Q.transpose() * y);
    return y;
  };
  Eigen::VectorXd u = perp(verts.row(rest[0]).transpose());
  Eigen::VectorXd w = perp(verts.row(rest[1]).transpose());
  const double nu = u.norm(), nw = w.norm();
  if (nu == 0.0 || nw == 0.0)
    fail(ErrorCode::Degenerate, "top simplex degenerate at hinge");
  double c = u.dot(w) / (nu * nw);
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c);
}

AngleKernel AngleKernel::from_sqdist(const Eigen::MatrixXd& sqdist) {
  AngleKernel k;
  k.n_ = static_cast<int>(sqdist.rows());
  const int n = k.n_;
  if (simplex_degenerate(sqdist))
    fail(ErrorCode::Degenerate, "degenerate top simplex");
  Eigen::MatrixXd chat = Eigen::MatrixXd::Zero(n + 1, n + 1);
  chat.block(1, 1, n, n) = sqdist;
  for (int i = 1; i <= n; ++i) { chat(0, i) = 1.0; chat(i, 0) = 1.0; }
  k.cinv_ = chat.inverse();
  k.w_.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      k.w_(i, j) = -2.0 * k.cinv_(i + 1, j + 1);
  for (int i = 0; i < n; ++i)
    if (!(k.w_(i, i) > 0))
      fail(ErrorCode::NotRealizable, "facet normal with nonpositive norm");
  return k;
}

double AngleKernel::theta(int i, int j) const {
  double u = -w_(i, j) / std::sqrt(w_(i, i) * w_(j, j));
  u = std::clamp(u, -1.0, 1.0);
  return std::acos(u);
}

double AngleKernel::dtheta_dL(int i, int j, int a, int b) const {
  auto dw = [&](int kk, int ll) {
    return 2.0 * (cinv_(kk + 1, a + 1) * cinv_(b + 1, ll + 1) +
                  cinv_(kk + 1, b + 1) * cinv_(a + 1, ll + 1));
  };
  const double wii = w_(i, i), wjj = w_(j, j), wij = w_(i, j);
  const double s = std::sqrt(wii * wjj);
  const double u = std::clamp(-wij / s, -1.0, 1.0);
  const double du =
      -dw(i, j) / s + 0.5 * (wij / s) * (dw(i, i) / wii + dw(j, j) / wjj);
  const double denom = std::sqrt(std::max(1.0 - u * u, 1e-300));
  return -du / denom;
}

Eigen::MatrixXd top_coords(const PreComplex& c, const CoverPlacement& pl,
                           int t) {
  const int d = c.dim();
  Eigen::MatrixXd X(d + 1, d);
  const auto& verts = c.top(t).verts;
  for (int i = 0; i <= d; ++i)
    X.row(i) = pl.coord(verts[i].v, verts[i].copy).transpose();
  return X;
}

Eigen::MatrixXd top_sqdist(const PreComplex& c, const CoverPlacement& pl,
                           int t) {
  const int d = c.dim();
  Eigen::MatrixXd X = top_coords(c, pl, t);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(d + 1, d + 1);
  for (int i = 0; i <= d; ++i)
    for (int j = i + 1; j <= d; ++j)
      D(i, j) = D(j, i) = (X.row(i) - X.row(j)).squaredNorm();
  return D;
}

Eigen::MatrixXd top_sqdist(const PreComplex& c, const MetricData& m, int t) {
  const int d = c.dim();
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(d + 1, d + 1);
  for (int i = 0; i <= d; ++i)
    for (int j = i + 1; j <= d; ++j)
      D(i, j) = D(j, i) = m.L(c.edge_at(t, i, j));
  return D;
}

MetricData read_metric(const PreComplex& c, const CoverPlacement& pl) {
  MetricData m;
  m.L.resize(c.cell_count(1));
  for (int e = 0; e < c.cell_count(1); ++e) {
    auto ls = c.cell_labels(1, e);
    m.L(e) = (pl.coord(ls[0].v, ls[0].copy) - pl.coord(ls[1].v, ls[1].copy))
                 .squaredNorm();
  }
  m.eps.resize(c.top_count());
  for (int t = 0; t < c.top_count(); ++t) {
    const double sv = signed_volume(top_coords(c, pl, t));
    if (sv == 0.0) fail(ErrorCode::Degenerate, "flat top simplex image");
    m.eps[t] = (sv > 0 ? 1 : -1) * c.top(t).sign;
  }
  return m;
}

void validate_metric(const PreComplex& c, const MetricData& m) {
  if (m.L.size() != c.cell_count(1))
    fail(ErrorCode::ShapeMismatch, "length vector size");
  if (static_cast<int>(m.eps.size()) != c.top_count())
    fail(ErrorCode::ShapeMismatch, "sign vector size");
  for (int e = 0; e < m.L.size(); ++e)
    if (!(m.L(e) > 0)) fail(ErrorCode::Degenerate, "nonpositive squared length");
  for (int t = 0; t < c.top_count(); ++t) {
    Eigen::MatrixXd D = top_sqdist(c, m, t);
    cm_volume(c.dim(), D);  // throws NOT_REALIZABLE when inconsistent
    if (simplex_degenerate(D))
      fail(ErrorCode::Degenerate, "degenerate top simplex");
  }
}

namespace {

template <typename ThetaOf>
CurvatureVector deficits_impl(const PreComplex& c,
                              const std::vector<int>& eps, ThetaOf&& theta_of) {
  const int d = c.dim();
  CurvatureVector omega(c.cell_count(d - 2));
  for (int h = 0; h < c.cell_count(d - 2); ++h) {
    double sum = 0;
    for (const auto& e : c.hinge_entries(h))
      sum += eps[e.top] * theta_of(e.top, e.hinge_mask);
    omega(h) = reduce_angle(sum);
  }
  return omega;
}

std::vector<int> hinge_mask_positions(int d, uint8_t mask) {
  std::vector<int> pos;
  for (int i = 0; i <= d; ++i)
    if (mask & (1u << i)) pos.push_back(i);
  return pos;
}

}  // namespace

CurvatureVector deficit_angles(const PreComplex& c, const CoverPlacement& pl) {
  MetricData m = read_metric(c, pl);
  const int d = c.dim();
  std::vector<Eigen::MatrixXd> coords(c.top_count());
  for (int t = 0; t < c.top_count(); ++t) coords[t] = top_coords(c, pl, t);
  return deficits_impl(c, m.eps, [&](int t, uint8_t mask) {
    auto pos = hinge_mask_positions(d, mask);
    return dihedral_angle(coords[t], pos);
  });
}

CurvatureVector deficit_angles(const PreComplex& c, const MetricData& m) {
  const int d = c.dim();
  std::vector<AngleKernel> ker;
  ker.reserve(c.top_count());
  for (int t = 0; t < c.top_count(); ++t)
    ker.push_back(AngleKernel::from_sqdist(top_sqdist(c, m, t)));
  return deficits_impl(c, m.eps, [&](int t, uint8_t mask) {
    // kernel indices are the two positions NOT in the hinge
    int i = -1, j = -1;
    for (int q = 0; q <= d; ++q)
      if (!(mask & (1u << q))) { (i < 0 ? i : j) = q; }
    return ker[t].theta(i, j);
  });
}

double top_volume(const PreComplex& c, const MetricData& m, int t) {
  return cm_volume(c.dim(), top_sqdist(c, m, t));
}

}  // namespace pltor
