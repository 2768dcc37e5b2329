#include "pltor/jacobians.hpp"

#include <cmath>

namespace pltor {

namespace {

// position pairs (i < j) of a (d+1)-tuple
std::vector<std::pair<int, int>> position_pairs(int d) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i <= d; ++i)
    for (int j = i + 1; j <= d; ++j) out.push_back({i, j});
  return out;
}

}  // namespace

Eigen::MatrixXd assemble_A3(const PreComplex& c, const MetricData& m) {
  if (c.dim() != 3) fail(ErrorCode::BadParams, "A is a 3-complex map");
  const int ne = c.cell_count(1);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(ne, ne);
  const auto pairs = position_pairs(3);
  for (int t = 0; t < c.top_count(); ++t) {
    Eigen::MatrixXd D = top_sqdist(c, m, t);
    AngleKernel ker = AngleKernel::from_sqdist(D);
    for (auto [i, j] : pairs) {
      // hinge at the edge omitting positions {i, j}
      uint8_t hinge_mask = uint8_t(0b1111u & ~((1u << i) | (1u << j)));
      const int row = c.cell_at(t, hinge_mask);
      for (auto [a, b] : pairs) {
        const int col = c.edge_at(t, a, b);
        // d theta / d l = d theta / d L * 2 l
        A(row, col) += m.eps[t] * ker.dtheta_dL(i, j, a, b) * 2.0 *
                       std::sqrt(m.L(col));
      }
    }
  }
  return A;
}

Eigen::MatrixXd assemble_B3(const PreComplex& c, const CoverPlacement& pl,
                            const GaugeBasis& g) {
  if (c.dim() != 3) fail(ErrorCode::BadParams, "B is a 3-complex map");
  const int ne = c.cell_count(1);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(ne, g.size());
  const Representation rep = pl.rep ? *pl.rep : Representation::trivial(3);
  const double beta = rep.kind == Representation::Kind::SingleAxisCyclic
                          ? 2.0 * M_PI * rep.k / rep.p
                          : rep.alpha;

  for (int e = 0; e < ne; ++e) {
    auto ls = c.cell_labels(1, e);
    const Eigen::VectorXd xa = pl.coord(ls[0].v, ls[0].copy);
    const Eigen::VectorXd xb = pl.coord(ls[1].v, ls[1].copy);
    const double len = (xa - xb).norm();
    // contribution of each endpoint occurrence to d(l)/d(parameter)
    for (int end = 0; end < 2; ++end) {
      const LiftVertex lv = ls[end];
      const Eigen::VectorXd& self = end == 0 ? xa : xb;
      const Eigen::VectorXd& other = end == 0 ? xb : xa;
      const Eigen::VectorXd unit = (self - other) / len;
      for (int col = 0; col < g.size(); ++col) {
        const GaugeParam& gp = g.params[col];
        Eigen::VectorXd dpos = Eigen::VectorXd::Zero(3);
        using What = GaugeParam::What;
        switch (gp.what) {
          case What::CoordX:
          case What::CoordY:
          case What::CoordZ: {
            if (gp.vertex != lv.v) continue;
            dpos(static_cast<int>(gp.what) -
                 static_cast<int>(What::CoordX)) = 1.0;
            break;
          }
          case What::RadialU:
          case What::Phi:
          case What::Z: {
            if (gp.vertex != lv.v) continue;
            const Eigen::VectorXd base = pl.coord(lv.v, 0);
            const double rho = std::hypot(base(0), base(1));
            const double phi = std::atan2(base(1), base(0));
            const double angle = phi + beta * lv.copy;
            if (gp.what == What::RadialU) {
              // basis element rho*d(rho): derivative w.r.t. u with du = rho drho
              dpos(0) = std::cos(angle) / rho;
              dpos(1) = std::sin(angle) / rho;
            } else if (gp.what == What::Phi) {
              dpos(0) = -rho * std::sin(angle);
              dpos(1) = rho * std::cos(angle);
            } else {
              dpos(2) = 1.0;
            }
            break;
          }
          case What::Alpha: {
            // screw angle: lift n rotates by n*alpha
            const double n = lv.copy;
            dpos(0) = n * (-self(1));
            dpos(1) = n * (self(0));
            break;
          }
          case What::Trans: {
            dpos(2) = lv.copy;
            break;
          }
        }
        B(e, col) += unit.dot(dpos);
      }
    }
  }
  return B;
}

Eigen::MatrixXd assemble_Q4(const PreComplex& c, const MetricData& m) {
  if (c.dim() != 4) fail(ErrorCode::BadParams, "this map needs a 4-complex");
  const int nf = c.cell_count(2);
  const int ne = c.cell_count(1);
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(nf, ne);
  const auto pairs = position_pairs(4);
  for (int t = 0; t < c.top_count(); ++t) {
    Eigen::MatrixXd D = top_sqdist(c, m, t);
    AngleKernel ker = AngleKernel::from_sqdist(D);
    for (auto [i, j] : pairs) {
      uint8_t hinge_mask = uint8_t(0b11111u & ~((1u << i) | (1u << j)));
      const int row = c.cell_at(t, hinge_mask);
      for (auto [a, b] : pairs) {
        const int col = c.edge_at(t, a, b);
        Q(row, col) += m.eps[t] * ker.dtheta_dL(i, j, a, b);
      }
    }
  }
  return Q;
}

DeviationBasis DeviationBasis::standard(const PreComplex& c,
                                        const CoverPlacement& pl) {
  if (c.dim() != 4 || c.deck_order() != 1)
    fail(ErrorCode::BadParams, "deviations live on trivial-deck 4-complexes");
  DeviationBasis basis;
  const int ne = c.cell_count(1);
  basis.frame.resize(ne);
  basis.dir.resize(ne);
  for (int e = 0; e < ne; ++e) {
    auto ls = c.cell_labels(1, e);
    Eigen::Vector4d a = pl.coord(ls[0].v, ls[0].copy);
    Eigen::Vector4d b = pl.coord(ls[1].v, ls[1].copy);
    Eigen::Vector4d dir = (b - a).normalized();
    basis.dir[e] = dir;
    // Gram-Schmidt of the coordinate axes against the edge direction
    Eigen::MatrixXd F(4, 3);
    int k = 0;
    for (int axis = 0; axis < 4 && k < 3; ++axis) {
      Eigen::Vector4d v = Eigen::Vector4d::Unit(axis);
      v -= v.dot(dir) * dir;
      for (int j = 0; j < k; ++j) {
        Eigen::Vector4d fj = F.col(j);
        v -= v.dot(fj) * fj;
      }
      if (v.norm() > 1e-6) F.col(k++) = v.normalized();
    }
    if (k < 3) fail(ErrorCode::Degenerate, "deviation frame not spanned");
    basis.frame[e] = F;
  }
  return basis;
}

namespace {

// gradient of the triangle area w.r.t. vertex p3
Eigen::VectorXd area_gradient(const Eigen::VectorXd& p1,
                              const Eigen::VectorXd& p2,
                              const Eigen::VectorXd& p3) {
  Eigen::VectorXd u = p2 - p1, w = p3 - p1;
  const double uu = u.squaredNorm(), ww = w.squaredNorm(), uw = u.dot(w);
  const double s = 0.5 * std::sqrt(std::max(uu * ww - uw * uw, 0.0));
  if (s == 0.0) fail(ErrorCode::Degenerate, "flat face");
  return (uu * w - uw * u) / (4.0 * s);
}

double triangle_area(const Eigen::VectorXd& p1, const Eigen::VectorXd& p2,
                     const Eigen::VectorXd& p3) {
  Eigen::VectorXd u = p2 - p1, w = p3 - p1;
  const double uu = u.squaredNorm(), ww = w.squaredNorm(), uw = u.dot(w);
  return 0.5 * std::sqrt(std::max(uu * ww - uw * uw, 0.0));
}

}  // namespace

double deviated_area_differential(const Eigen::MatrixXd& face_pts,
                                  const std::array<Eigen::VectorXd, 3>& dev) {
  // midpoint opposite corner i joins the other two corners
  Eigen::VectorXd mid[3];
  for (int i = 0; i < 3; ++i) {
    const int a = (i + 1) % 3, b = (i + 2) % 3;
    mid[i] = 0.5 * (face_pts.row(a) + face_pts.row(b)).transpose() + dev[i];
  }
  const double s_mid = triangle_area(mid[0], mid[1], mid[2]);
  const double s = triangle_area(face_pts.row(0).transpose(),
                                 face_pts.row(1).transpose(),
                                 face_pts.row(2).transpose());
  return 4.0 * s_mid - s;
}

Eigen::MatrixXd assemble_D4(const PreComplex& c, const CoverPlacement& pl,
                            const DeviationBasis& basis) {
  if (c.dim() != 4) fail(ErrorCode::BadParams, "deviations need a 4-complex");
  const int nf = c.cell_count(2);
  const int ne = c.cell_count(1);
  Eigen::MatrixXd Dmat = Eigen::MatrixXd::Zero(nf, 3 * ne);
  for (int f = 0; f < nf; ++f) {
    auto ls = c.cell_labels(2, f);
    Eigen::MatrixXd pts(3, 4);
    for (int i = 0; i < 3; ++i)
      pts.row(i) = pl.coord(ls[i].v, ls[i].copy).transpose();
    // corner i's opposite edge joins corners (i+1, i+2)
    for (int i = 0; i < 3; ++i) {
      const int a = (i + 1) % 3, b = (i + 2) % 3;
      // the quotient edge cell joining corners a and b, via the face's
      // base slot (whose position order matches the label order)
      const auto [bt, bm] = c.base_slot(2, f);
      std::vector<int> pos;
      for (int q = 0; q <= 4; ++q)
        if (bm & (1u << q)) pos.push_back(q);
      const int e = c.edge_at(bt, pos[a], pos[b]);
      Eigen::VectorXd mid[3];
      for (int q = 0; q < 3; ++q) {
        const int qa = (q + 1) % 3, qb = (q + 2) % 3;
        mid[q] = 0.5 * (pts.row(qa) + pts.row(qb)).transpose();
      }
      Eigen::VectorXd grad =
          4.0 * area_gradient(mid[(i + 1) % 3], mid[(i + 2) % 3], mid[i]);
      for (int comp = 0; comp < 3; ++comp)
        Dmat(f, 3 * e + comp) += grad.dot(basis.frame[e].col(comp));
    }
  }
  return Dmat;
}

Eigen::Matrix3d squared_area_block(const PreComplex& c,
                                   const CoverPlacement& pl,
                                   const DeviationBasis& basis, int edge,
                                   const std::array<int, 3>& faces) {
  Eigen::MatrixXd D4 = assemble_D4(c, pl, basis);
  Eigen::Matrix3d J;
  for (int r = 0; r < 3; ++r) {
    auto ls = c.cell_labels(2, faces[r]);
    Eigen::MatrixXd pts(3, 4);
    for (int i = 0; i < 3; ++i)
      pts.row(i) = pl.coord(ls[i].v, ls[i].copy).transpose();
    const double s = triangle_area(pts.row(0).transpose(),
                                   pts.row(1).transpose(),
                                   pts.row(2).transpose());
    for (int comp = 0; comp < 3; ++comp)
      J(r, comp) = 2.0 * s * D4(faces[r], 3 * edge + comp);
  }
  return J;
}

Eigen::MatrixXd conjugate_omega_map(const Eigen::MatrixXd& q4) {
  return q4.transpose();
}

FdGradient fd_oracle(const std::function<double(const Eigen::VectorXd&)>& f,
                     const Eigen::VectorXd& x0, double h) {
  const int n = static_cast<int>(x0.size());
  FdGradient out;
  out.g.resize(n);
  out.err.resize(n);
  for (int i = 0; i < n; ++i) {
    auto central = [&](double step) {
      Eigen::VectorXd xp = x0, xm = x0;
      xp(i) += step;
      xm(i) -= step;
      return (f(xp) - f(xm)) / (2.0 * step);
    };
    const double g1 = central(h);
    const double g2 = central(h / 2.0);
    out.g(i) = (4.0 * g2 - g1) / 3.0;
    out.err(i) = std::abs(out.g(i) - g2);
  }
  return out;
}

}  // namespace pltor
