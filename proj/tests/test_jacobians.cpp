#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pltor/jacobians.hpp"
#include "pltor/linalg.hpp"
#include "pltor/zoo.hpp"

using namespace pltor;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// numeric deficit angles as a function of plain or squared lengths
VectorXd deficits_from_lengths(const PreComplex& c, const MetricData& m0,
                               const VectorXd& lengths, bool squared) {
  MetricData m = m0;
  for (int e = 0; e < lengths.size(); ++e)
    m.L(e) = squared ? lengths(e) : lengths(e) * lengths(e);
  return deficit_angles(c, m);
}

double fd_entry(const PreComplex& c, const MetricData& m0, int hinge, int edge,
                bool squared) {
  VectorXd x0(m0.L.size());
  for (int e = 0; e < x0.size(); ++e)
    x0(e) = squared ? m0.L(e) : std::sqrt(m0.L(e));
  auto f = [&](const VectorXd& x) {
    return deficits_from_lengths(c, m0, x, squared)(hinge);
  };
  auto central = [&](double h) {
    VectorXd xp = x0, xm = x0;
    xp(edge) += h;
    xm(edge) -= h;
    return (f(xp) - f(xm)) / (2 * h);
  };
  const double h = 1e-5 * x0(edge);
  return (4 * central(h / 2) - central(h)) / 3;
}

}  // namespace

TEST_CASE("fd_oracle basics") {
  auto square = [](const VectorXd& x) { return x(0) * x(0); };
  VectorXd x0(1);
  x0 << 3.0;
  FdGradient g = fd_oracle(square, x0, 1e-4);
  CHECK(g.g(0) == doctest::Approx(6.0).epsilon(1e-10));

  // angle from squared lengths: oracle against the analytic kernel
  Generated s4 = gen_sphere4(3);
  MetricData m = read_metric(s4.complex, s4.placement);
  MatrixXd D0 = top_sqdist(s4.complex, m, 0);
  AngleKernel ker = AngleKernel::from_sqdist(D0);
  auto angle = [&](const VectorXd& x) {
    MatrixXd D = D0;
    D(0, 1) = D(1, 0) = x(0);
    return AngleKernel::from_sqdist(D).theta(2, 3);
  };
  VectorXd L0(1);
  L0 << D0(0, 1);
  FdGradient gv = fd_oracle(angle, L0, 1e-5 * D0(0, 1));
  CHECK(std::abs(gv.g(0) - ker.dtheta_dL(2, 3, 0, 1)) <=
        1e-6 * std::abs(gv.g(0)));
}

TEST_CASE("A is symmetric, kills motion-induced length changes, matches fd") {
  Generated g = gen_sphere3(17);
  MetricData m = read_metric(g.complex, g.placement);
  MatrixXd A = assemble_A3(g.complex, m);
  const int ne = g.complex.cell_count(1);
  REQUIRE(A.rows() == ne);

  const double scale = max_abs(A);
  CHECK(max_abs(A - A.transpose()) <= 1e-8 * scale);

  // dl from translating one vertex: in the kernel of A
  for (int axis = 0; axis < 3; ++axis) {
    VectorXd dl = VectorXd::Zero(ne);
    for (int e = 0; e < ne; ++e) {
      auto ls = g.complex.cell_labels(1, e);
      for (int end = 0; end < 2; ++end) {
        if (ls[end].v != 2) continue;
        VectorXd a = g.placement.coord(ls[end].v, ls[end].copy);
        VectorXd b = g.placement.coord(ls[1 - end].v, ls[1 - end].copy);
        dl(e) += (a - b)(axis) / (a - b).norm();
      }
    }
    CHECK((A * dl).cwiseAbs().maxCoeff() <= 1e-8 * scale * dl.norm());
  }

  for (int h = 0; h < ne; ++h)
    for (int e = 0; e < ne; ++e) {
      const double fd = fd_entry(g.complex, m, h, e, /*squared=*/false);
      CHECK(std::abs(A(h, e) - fd) <=
            1e-5 * std::max({std::abs(A(h, e)), std::abs(fd), 1e-6 * scale}));
    }
}

TEST_CASE("A on the lens quotient: symmetric, fd-checked") {
  Generated g = gen_lens(5, 1, 1, 21);
  MetricData m = read_metric(g.complex, g.placement);
  MatrixXd A = assemble_A3(g.complex, m);
  const double scale = max_abs(A);
  CHECK(max_abs(A - A.transpose()) <= 1e-8 * scale);
  for (int h = 0; h < A.rows(); ++h)
    for (int e = 0; e < A.cols(); ++e) {
      const double fd = fd_entry(g.complex, m, h, e, false);
      CHECK(std::abs(A(h, e) - fd) <=
            1e-5 * std::max({std::abs(A(h, e)), std::abs(fd), 1e-6 * scale}));
    }
}

TEST_CASE("B: chain property, injectivity, exactness ranks, fd columns") {
  Generated g = gen_lens(5, 1, 1, 23);
  MetricData m = read_metric(g.complex, g.placement);
  GaugeBasis gb = gauge_basis(g.placement, g.rep);
  MatrixXd A = assemble_A3(g.complex, m);
  MatrixXd B = assemble_B3(g.complex, g.placement, gb);
  const int ne = g.complex.cell_count(1);
  REQUIRE(B.rows() == ne);
  REQUIRE(B.cols() == gb.size());

  CHECK(max_abs(A * B) <= 1e-8 * max_abs(A) * max_abs(B));
  CHECK(rank_svd(B) == gb.size());
  CHECK(rank_svd(A) + rank_svd(B) == ne);
  CHECK(sv_gap(A, rank_svd(A)) >= 1e6);
  CHECK(sv_gap(B, gb.size()) >= 1e6);

  // every column nonzero in a connected complex
  for (int j = 0; j < B.cols(); ++j) CHECK(B.col(j).norm() > 1e-12);

  // fd check of each column via re-placement of the base lifts
  for (int col = 0; col < gb.size(); ++col) {
    const GaugeParam& gp = gb.params[col];
    auto lengths_at = [&](double h) {
      CoverPlacement pl = g.placement;
      VectorXd base = g.placement.coord(gp.vertex, 0);
      const double rho = std::hypot(base(0), base(1));
      const double phi = std::atan2(base(1), base(0));
      double nrho = rho, nphi = phi, nz = base(2);
      if (gp.what == GaugeParam::What::RadialU)
        nrho = std::sqrt(rho * rho + 2 * h);  // du = rho drho
      else if (gp.what == GaugeParam::What::Phi)
        nphi += h;
      else
        nz += h;
      VectorXd nb(3);
      nb << nrho * std::cos(nphi), nrho * std::sin(nphi), nz;
      for (int cp = 0; cp < g.rep.p; ++cp)
        pl.lifts[gp.vertex][cp] = g.rep.apply(cp, nb);
      MetricData mm = read_metric(g.complex, pl);
      VectorXd l(ne);
      for (int e = 0; e < ne; ++e) l(e) = std::sqrt(mm.L(e));
      return l;
    };
    const double h = 1e-6;
    VectorXd fd = (lengths_at(h) - lengths_at(-h)) / (2 * h);
    for (int e = 0; e < ne; ++e)
      CHECK(std::abs(B(e, col) - fd(e)) <=
            1e-5 * std::max({std::abs(fd(e)), std::abs(B(e, col)), 1e-8}));
  }
}

TEST_CASE("face-deficit Jacobian: fd validation, rank 1, column proportions") {
  Generated g = gen_sphere4(29);
  MetricData m = read_metric(g.complex, g.placement);
  MatrixXd Q = assemble_Q4(g.complex, m);
  REQUIRE(Q.rows() == 20);
  REQUIRE(Q.cols() == 15);

  const double scale = max_abs(Q);
  for (int h = 0; h < Q.rows(); ++h)
    for (int e = 0; e < Q.cols(); ++e) {
      const double fd = fd_entry(g.complex, m, h, e, /*squared=*/true);
      CHECK(std::abs(Q(h, e) - fd) <=
            1e-5 * std::max({std::abs(Q(h, e)), std::abs(fd), 1e-6 * scale}));
    }

  MatrixXd QT = conjugate_omega_map(Q);
  REQUIRE(QT.rows() == 15);
  CHECK(rank_svd(QT) == 1);
  CHECK(conjugate_omega_map(QT).isApprox(Q));

  // the column at an edge is proportional to signed volumes times areas,
  // with the consistent-orientation tuple conventions
  for (int e = 0; e < g.complex.cell_count(1); ++e) {
    auto star = g.complex.cofaces(1, e);
    REQUIRE(star.size() == 4);
    auto els = g.complex.cell_labels(1, e);
    const VectorXd A_pt = g.placement.coord(els[0].v, els[0].copy);
    const VectorXd B_pt = g.placement.coord(els[1].v, els[1].copy);
    std::vector<int> rest;
    for (int v = 0; v < 6; ++v)
      if (v != els[0].v && v != els[1].v) rest.push_back(v);
    const auto coord = [&](int v) { return g.placement.coord(v, 0); };
    const auto svol5 = [&](std::array<int, 3> others) {
      MatrixXd P(5, 4);
      P.row(0) = A_pt.transpose();
      P.row(1) = B_pt.transpose();
      for (int i = 0; i < 3; ++i) P.row(2 + i) = coord(others[i]).transpose();
      return signed_volume(P);
    };
    const int C = rest[0], D = rest[1], E = rest[2], F = rest[3];
    const double vF = svol5({C, D, E});   // ABCDE
    const double vE = -svol5({C, F, D});  // -(ABCFD)
    const double vD = svol5({C, E, F});   // ABCEF
    const double vC = -svol5({D, F, E});  // -(ABDFE)
    const auto area = [&](int X) {
      VectorXd u = B_pt - A_pt, w = coord(X) - A_pt;
      return 0.5 * std::sqrt(u.squaredNorm() * w.squaredNorm() -
                             u.dot(w) * u.dot(w));
    };
    const auto face_cell = [&](int X) {
      for (auto [t, mask] : star)
        for (int q = 0; q <= 4; ++q) {
          if (mask & (1u << q)) continue;
          int fc = g.complex.cell_at(t, uint8_t(mask | (1u << q)));
          auto ls = g.complex.cell_labels(2, fc);
          for (const auto& lv : ls)
            if (lv.v == X) return fc;
        }
      return -1;
    };
    Eigen::Vector4d column, expected;
    column << Q(face_cell(C), e), Q(face_cell(D), e), Q(face_cell(E), e),
        Q(face_cell(F), e);
    expected << -vC * area(C), vD * area(D), -vE * area(E), vF * area(F);
    const double cosang =
        column.dot(expected) / (column.norm() * expected.norm());
    CHECK(std::abs(std::abs(cosang) - 1.0) <= 1e-7);
  }
}

TEST_CASE("deviation responses: rest state, planar pull, fd, volume identity") {
  Generated g = gen_sphere4(31);
  DeviationBasis basis = DeviationBasis::standard(g.complex, g.placement);
  MatrixXd D4 = assemble_D4(g.complex, g.placement, basis);
  REQUIRE(D4.rows() == 20);
  REQUIRE(D4.cols() == 3 * 15);

  SUBCASE("zero deviations leave areas unchanged") {
    for (int f = 0; f < g.complex.cell_count(2); ++f) {
      auto ls = g.complex.cell_labels(2, f);
      MatrixXd pts(3, 4);
      for (int i = 0; i < 3; ++i)
        pts.row(i) = g.placement.coord(ls[i].v, ls[i].copy).transpose();
      std::array<VectorXd, 3> dev = {VectorXd::Zero(4), VectorXd::Zero(4),
                                     VectorXd::Zero(4)};
      CHECK(std::abs(deviated_area_differential(pts, dev)) <= 1e-12);
    }
  }

  SUBCASE("planar triangle with base 2: in-plane unit deviation doubles") {
    MatrixXd pts(3, 4);
    pts << 0, 0, 0, 0,
           2, 0, 0, 0,
           0.7, 1.3, 0, 0;
    const double eps = 1e-6;
    std::array<VectorXd, 3> dev = {VectorXd::Zero(4), VectorXd::Zero(4),
                                   VectorXd::Zero(4)};
    dev[2] = VectorXd::Zero(4);
    dev[2](1) = eps;  // on the edge joining corners 0 and 1, in plane
    const double dS = deviated_area_differential(pts, dev);
    CHECK(dS == doctest::Approx(2 * eps).epsilon(1e-5));
  }

  SUBCASE("entries match the finite difference of the area oracle") {
    for (int f = 0; f < g.complex.cell_count(2); ++f) {
      auto ls = g.complex.cell_labels(2, f);
      MatrixXd pts(3, 4);
      for (int i = 0; i < 3; ++i)
        pts.row(i) = g.placement.coord(ls[i].v, ls[i].copy).transpose();
      auto [bt, bm] = g.complex.base_slot(2, f);
      std::vector<int> pos;
      for (int q = 0; q <= 4; ++q)
        if (bm & (1u << q)) pos.push_back(q);
      for (int corner = 0; corner < 3; ++corner) {
        const int a = (corner + 1) % 3, b = (corner + 2) % 3;
        const int e = g.complex.edge_at(bt, pos[a], pos[b]);
        for (int comp = 0; comp < 3; ++comp) {
          const double h = 1e-6;
          std::array<VectorXd, 3> dev = {VectorXd::Zero(4), VectorXd::Zero(4),
                                         VectorXd::Zero(4)};
          dev[corner] = h * basis.frame[e].col(comp);
          const double up = deviated_area_differential(pts, dev);
          dev[corner] = -h * basis.frame[e].col(comp);
          const double dn = deviated_area_differential(pts, dev);
          const double fd = (up - dn) / (2 * h);
          CHECK(std::abs(D4(f, 3 * e + comp) - fd) <= 1e-6);
        }
      }
    }
  }

  SUBCASE("|det J| = 24 V L^{5/2} for each edge block of one simplex") {
    for (int e = 0; e < g.complex.cell_count(1); ++e) {
      auto [t, mask] = g.complex.cofaces(1, e).front();
      std::array<int, 3> faces{};
      int k = 0;
      for (int q = 0; q <= 4 && k < 3; ++q) {
        if (mask & (1u << q)) continue;
        faces[k++] = g.complex.cell_at(t, uint8_t(mask | (1u << q)));
      }
      Eigen::Matrix3d J =
          squared_area_block(g.complex, g.placement, basis, e, faces);
      auto ls = g.complex.cell_labels(1, e);
      const double L = (g.placement.coord(ls[0].v, ls[0].copy) -
                        g.placement.coord(ls[1].v, ls[1].copy))
                           .squaredNorm();
      const double V =
          std::abs(signed_volume(top_coords(g.complex, g.placement, t)));
      CHECK(std::abs(J.determinant()) ==
            doctest::Approx(24.0 * V * std::pow(L, 2.5)).epsilon(1e-8));
    }
  }
}

TEST_CASE("conjugate map annihilates deviation-induced area changes") {
  Generated g = gen_sphere4(37);
  MetricData m = read_metric(g.complex, g.placement);
  MatrixXd Q = assemble_Q4(g.complex, m);
  DeviationBasis basis = DeviationBasis::standard(g.complex, g.placement);
  MatrixXd D4 = assemble_D4(g.complex, g.placement, basis);
  const double prod = max_abs(conjugate_omega_map(Q) * D4);
  CHECK(prod <= 1e-8 * max_abs(Q) * max_abs(D4));

  // per 4-surrounded edge: volume annihilation and block rank exactly 3
  for (int e = 0; e < g.complex.cell_count(1); ++e) {
    auto star = g.complex.cofaces(1, e);
    std::vector<int> faces;
    for (auto [t, mask] : star)
      for (int q = 0; q <= 4; ++q) {
        if (mask & (1u << q)) continue;
        const int fc = g.complex.cell_at(t, uint8_t(mask | (1u << q)));
        if (std::find(faces.begin(), faces.end(), fc) == faces.end())
          faces.push_back(fc);
      }
    REQUIRE(faces.size() == 4);
    Eigen::MatrixXd R(4, 3);
    Eigen::Vector4d coeff;
    for (int r = 0; r < 4; ++r) {
      auto ls = g.complex.cell_labels(2, faces[r]);
      MatrixXd pts(3, 4);
      for (int i = 0; i < 3; ++i)
        pts.row(i) = g.placement.coord(ls[i].v, ls[i].copy).transpose();
      VectorXd u = (pts.row(1) - pts.row(0)).transpose();
      VectorXd w = (pts.row(2) - pts.row(0)).transpose();
      const double s = 0.5 * std::sqrt(u.squaredNorm() * w.squaredNorm() -
                                       u.dot(w) * u.dot(w));
      for (int comp = 0; comp < 3; ++comp)
        R(r, comp) = 2.0 * s * D4(faces[r], 3 * e + comp);
      coeff(r) = Q(faces[r], e) / s;  // proportional to the signed volumes
    }
    CHECK(rank_svd(R) == 3);
    const double resid = (coeff.transpose() * R).cwiseAbs().maxCoeff();
    CHECK(resid <= 1e-8 * coeff.norm() * max_abs(R));
  }
}

TEST_CASE("deviation frames: orthonormal, edge-orthogonal, det invariant") {
  Generated g = gen_sphere4(41);
  DeviationBasis basis = DeviationBasis::standard(g.complex, g.placement);
  for (int e = 0; e < g.complex.cell_count(1); ++e) {
    const MatrixXd& F = basis.frame[e];
    CHECK(max_abs(F.transpose() * F - Eigen::Matrix3d::Identity()) <= 1e-12);
    CHECK((F.transpose() * basis.dir[e]).cwiseAbs().maxCoeff() <= 1e-12);
  }
  auto [t, mask] = g.complex.cofaces(1, 0).front();
  std::array<int, 3> faces{};
  int k = 0;
  for (int q = 0; q <= 4 && k < 3; ++q) {
    if (mask & (1u << q)) continue;
    faces[k++] = g.complex.cell_at(t, uint8_t(mask | (1u << q)));
  }
  Eigen::Matrix3d J0 =
      squared_area_block(g.complex, g.placement, basis, 0, faces);
  DeviationBasis rotated = basis;
  Eigen::Matrix3d R3;
  const double th = 0.83;
  R3 << std::cos(th), -std::sin(th), 0,
        std::sin(th), std::cos(th), 0,
        0, 0, 1;
  rotated.frame[0] = basis.frame[0] * R3;
  Eigen::Matrix3d J1 =
      squared_area_block(g.complex, g.placement, rotated, 0, faces);
  CHECK(std::abs(J0.determinant()) ==
        doctest::Approx(std::abs(J1.determinant())).epsilon(1e-10));
}
