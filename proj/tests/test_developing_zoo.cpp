#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pltor/zoo.hpp"
#include "support/homology.hpp"

using namespace pltor;

namespace {

Eigen::MatrixXd stacked_lifts(const CoverPlacement& pl) {
  std::vector<Eigen::VectorXd> rows;
  for (const auto& mp : pl.lifts)
    for (const auto& [c, x] : mp) rows.push_back(x);
  Eigen::MatrixXd X(rows.size(), pl.dim);
  for (size_t i = 0; i < rows.size(); ++i) X.row(i) = rows[i].transpose();
  return X;
}

}  // namespace

TEST_CASE("sphere3 generator: counts, flatness, equivariance") {
  Generated g = gen_sphere3(7);
  CHECK(g.complex.cell_count(3) == 5);
  CHECK(g.complex.cell_count(2) == 10);
  CHECK(g.complex.cell_count(1) == 10);
  CHECK(g.complex.cell_count(0) == 5);
  CurvatureVector w = deficit_angles(g.complex, g.placement);
  CHECK(w.cwiseAbs().maxCoeff() <= 1e-11);
  CHECK(g.placement.equivariance_residual() <= 1e-12);
}

TEST_CASE("sphere4 generator: every edge lies in exactly four tops") {
  Generated g = gen_sphere4(3);
  CHECK(g.complex.euler_characteristic() == 2);
  for (int e = 0; e < g.complex.cell_count(1); ++e)
    CHECK(g.complex.cofaces(1, e).size() == 4);
  CurvatureVector w = deficit_angles(g.complex, g.placement);
  CHECK(w.cwiseAbs().maxCoeff() <= 1e-11);
}

TEST_CASE("lens generators: structure, flatness, lift independence, H1") {
  for (auto [p, q, k] : std::vector<std::array<int, 3>>{
           {2, 1, 1}, {3, 1, 1}, {5, 1, 1}, {5, 1, 2}, {7, 2, 1}}) {
    CAPTURE(p);
    CAPTURE(q);
    Generated g = gen_lens(p, q, k, 11);
    CHECK(g.complex.euler_characteristic() == 0);
    CurvatureVector w = deficit_angles(g.complex, g.placement);
    CHECK(w.cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(g.placement.equivariance_residual() <= 1e-12);

    // squared lengths are the same no matter which lift measures them
    for (int e = 0; e < g.complex.cell_count(1); ++e) {
      auto ls = g.complex.cell_labels(1, e);
      for (int s = 1; s < p; ++s) {
        const double l0 = g.metric.L(e);
        const double ls2 = (g.placement.coord(ls[0].v, ls[0].copy + s) -
                            g.placement.coord(ls[1].v, ls[1].copy + s))
                               .squaredNorm();
        CHECK(std::abs(l0 - ls2) <= 1e-10 * l0);
      }
    }

    // combinatorial first homology has order p
    CHECK(testing::h1_order(g.complex) == p);
  }
}

TEST_CASE("lens parameter validation") {
  CHECK_THROWS_WITH_AS(gen_lens(4, 2, 1, 1), doctest::Contains("BAD_PARAMS"),
                       Error);
  CHECK_THROWS_WITH_AS(gen_lens(5, 5, 1, 1), doctest::Contains("BAD_PARAMS"),
                       Error);
  CHECK_THROWS_WITH_AS(gen_lens(5, 1, 0, 1), doctest::Contains("BAD_PARAMS"),
                       Error);
}

TEST_CASE("gauge basis sizes per representation case") {
  Generated lens = gen_lens(5, 1, 1, 2);
  GaugeBasis gb = gauge_basis(lens.placement, lens.rep);
  const int m = lens.complex.vertex_count();
  CHECK(gb.size() == m + 2 * (m - 1));

  Generated s3 = gen_sphere3(2);
  GaugeBasis gt = gauge_basis(s3.placement, s3.rep);
  CHECK(gt.size() == 3 * 5 - 6);

  Generated sz = gen_s1xs2(0.7, 1.0, 2);
  GaugeBasis gz = gauge_basis(sz.placement, sz.rep);
  const int mz = sz.complex.vertex_count();
  CHECK(gz.size() == mz + 2 * (mz - 1) + 2);

  // vertex on the rotation axis degenerates the cylindrical basis
  CoverPlacement bad = lens.placement;
  Eigen::VectorXd onaxis(3);
  onaxis << 0, 0, 1;
  for (auto& [c, x] : bad.lifts[0]) x = onaxis;
  CHECK_THROWS_WITH_AS(gauge_basis(bad, lens.rep),
                       doctest::Contains("GAUGE_DEGENERATE"), Error);
}

TEST_CASE("trivial-representation placements come out pinned") {
  Generated g = gen_sphere3(19);
  const auto& x0 = g.placement.coord(0, 0);
  const auto& x1 = g.placement.coord(1, 0);
  const auto& x2 = g.placement.coord(2, 0);
  CHECK(x0.norm() <= 1e-12);
  CHECK(std::abs(x1(1)) <= 1e-12);
  CHECK(std::abs(x1(2)) <= 1e-12);
  CHECK(x1(0) > 0);
  CHECK(std::abs(x2(2)) <= 1e-12);
  CHECK(x2(1) > 0);
}

TEST_CASE("s1xs2 generator (experimental): flat and equivariant") {
  Generated g = gen_s1xs2(0.7, 1.0, 5);
  CHECK(g.complex.cell_count(3) == 12);
  CHECK(g.complex.euler_characteristic() == 0);
  CurvatureVector w = deficit_angles(g.complex, g.placement);
  CHECK(w.cwiseAbs().maxCoeff() <= 1e-9);
  CHECK_THROWS_WITH_AS(gen_s1xs2(0.5, 0.0, 1),
                       doctest::Contains("BAD_PARAMS"), Error);
}

TEST_CASE("develop reproduces an embedded boundary up to a motion") {
  Generated g = gen_sphere3(23);
  MetricData m = read_metric(g.complex, g.placement);
  CoverPlacement dev = develop(g.complex, m, 0);
  Eigen::MatrixXd X = stacked_lifts(dev);
  Eigen::MatrixXd Y = stacked_lifts(g.placement);
  REQUIRE(X.rows() == Y.rows());
  auto [iso, worst] = fit_isometry(X, Y);
  CHECK(worst <= 1e-8 * g.placement.diameter());
}

TEST_CASE("develop detects curved input") {
  Generated g = gen_sphere3(29);
  MetricData m = read_metric(g.complex, g.placement);
  m.L(4) *= 1.0 + 1e-3;
  CHECK_THROWS_WITH_AS(develop(g.complex, m, 0),
                       doctest::Contains("CURVED_INPUT"), Error);
}

TEST_CASE("developing the lens cover closes and measures the deck rotation") {
  const int p = 5;
  Generated g = gen_lens(p, 1, 1, 31);
  MetricData m = read_metric(g.complex, g.placement);
  CoverPlacement dev = develop(g.complex, m, 0);

  // trivial monodromy on the cover: develop succeeded; per-vertex lift
  // count is p
  for (const auto& mp : dev.lifts) CHECK(mp.size() == p);

  // deck transformation fitted between consecutive copies is a rotation
  // by 2*pi/5
  std::vector<Eigen::VectorXd> from, to;
  for (int v = 0; v < g.complex.vertex_count(); ++v)
    for (int c = 0; c < p; ++c) {
      from.push_back(dev.lifts[v].at(c));
      to.push_back(dev.lifts[v].at((c + 1) % p));
    }
  Eigen::MatrixXd F(from.size(), 3), T(to.size(), 3);
  for (size_t i = 0; i < from.size(); ++i) {
    F.row(i) = from[i].transpose();
    T.row(i) = to[i].transpose();
  }
  auto [iso, worst] = fit_isometry(F, T);
  CHECK(worst <= 1e-8 * dev.diameter());
  const double tr = iso.R.trace();
  const double angle = std::acos(std::clamp((tr - 1.0) / 2.0, -1.0, 1.0));
  CHECK(angle == doctest::Approx(2 * M_PI / p).epsilon(1e-8));
}

TEST_CASE("develop roundtrip on the lens quotient metric") {
  Generated g = gen_lens(5, 1, 1, 37);
  MetricData m = read_metric(g.complex, g.placement);
  CoverPlacement dev = develop(g.complex, m, 2);
  // compare as point clouds with the (vertex, copy) correspondence
  Eigen::MatrixXd X(5 * 2, 3), Y(5 * 2, 3);
  int r = 0;
  for (int v = 0; v < 2; ++v)
    for (int c = 0; c < 5; ++c, ++r) {
      X.row(r) = dev.lifts[v].at(c).transpose();
      Y.row(r) = g.placement.coord(v, c).transpose();
    }
  auto [iso, worst] = fit_isometry(X, Y);
  CHECK(worst <= 1e-8 * g.placement.diameter());
}

TEST_CASE("placement attempt budget is honored") {
  Generated g = gen_sphere3(41);
  CHECK_THROWS_WITH_AS(
      equivariant_placement(g.complex, g.rep, 1, /*max_attempts=*/0),
      doctest::Contains("RESAMPLE_EXHAUSTED"), Error);
}
