#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pltor/metric_geometry.hpp"
#include "pltor/prng.hpp"

using namespace pltor;
using Eigen::MatrixXd;

namespace {

MatrixXd sqdist_of(const MatrixXd& pts) {
  const int n = static_cast<int>(pts.rows());
  MatrixXd D = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      D(i, j) = D(j, i) = (pts.row(i) - pts.row(j)).squaredNorm();
  return D;
}

MatrixXd random_points(int n, int d, SplitRng& rng, double lo = 0.0,
                       double hi = 2.0) {
  MatrixXd X(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) X(i, j) = rng.uniform(lo, hi);
  return X;
}

}  // namespace

TEST_CASE("cm_volume on reference simplices") {
  // unit right-corner tetrahedron: origin plus three unit axes
  MatrixXd D(4, 4);
  D << 0, 1, 1, 1,
       1, 0, 2, 2,
       1, 2, 0, 2,
       1, 2, 2, 0;
  CHECK(cm_volume(3, D) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));

  // regular tetrahedron, all squared lengths 1
  MatrixXd R = MatrixXd::Ones(4, 4) - MatrixXd::Identity(4, 4);
  CHECK(cm_volume(3, R) ==
        doctest::Approx(std::sqrt(2.0) / 12.0).epsilon(1e-10));

  // collinear points: degenerate triangle
  MatrixXd C(3, 3);
  C << 0, 1, 4,
       1, 0, 1,
       4, 1, 0;
  CHECK(cm_volume(2, C) == doctest::Approx(0.0));

  // a violated triangle inequality is not realizable
  MatrixXd Bad(3, 3);
  Bad << 0, 1, 100,
         1, 0, 1,
         100, 1, 0;
  CHECK_THROWS_WITH_AS(cm_volume(2, Bad), doctest::Contains("NOT_REALIZABLE"),
                       Error);
}

TEST_CASE("signed_volume orientation and magnitude") {
  MatrixXd P = MatrixXd::Zero(5, 4);
  for (int i = 0; i < 4; ++i) P(i + 1, i) = 1.0;
  CHECK(signed_volume(P) == doctest::Approx(1.0 / 24.0));
  P.row(0).swap(P.row(1));
  CHECK(signed_volume(P) == doctest::Approx(-1.0 / 24.0));
}

TEST_CASE("cm_volume agrees with |signed_volume| on random simplices") {
  SplitRng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = trial % 2 == 0 ? 3 : 4;
    MatrixXd X = random_points(d + 1, d, rng);
    const double sv = std::abs(signed_volume(X));
    const double cv = cm_volume(d, sqdist_of(X));
    CHECK(std::abs(sv - cv) <= 1e-10 * std::max(1.0, cv));
  }
}

TEST_CASE("volumes scale like s^k and angles are scale-free") {
  SplitRng rng(12);
  MatrixXd X = random_points(5, 4, rng);
  const double s = 3.7;
  const double v1 = cm_volume(4, sqdist_of(X));
  const double v2 = cm_volume(4, sqdist_of((s * X).eval()));
  CHECK(v2 == doctest::Approx(std::pow(s, 4) * v1).epsilon(1e-10));
  const std::array<int, 3> hinge = {0, 1, 2};
  const double a1 = dihedral_angle(X, hinge);
  const double a2 = dihedral_angle((s * X).eval(), hinge);
  CHECK(a1 == doctest::Approx(a2).epsilon(1e-10));
}

TEST_CASE("dihedral angles on reference configurations") {
  SUBCASE("regular tetrahedron: arccos(1/3) at every edge") {
    MatrixXd X(4, 3);
    X << 1, 1, 1,
         1, -1, -1,
         -1, 1, -1,
         -1, -1, 1;
    const std::array<int, 2> hinge = {0, 1};
    CHECK(dihedral_angle(X, hinge) ==
          doctest::Approx(std::acos(1.0 / 3.0)).epsilon(1e-12));
  }
  SUBCASE("right-corner 4-simplex: right angle at the face through origin") {
    MatrixXd X = MatrixXd::Zero(5, 4);
    for (int i = 0; i < 4; ++i) X(i + 1, i) = 1.0;
    const std::array<int, 3> hinge = {0, 1, 2};  // origin, e1, e2
    CHECK(dihedral_angle(X, hinge) == doctest::Approx(M_PI / 2).epsilon(1e-12));
  }
  SUBCASE("right-corner tetrahedron: right angle at an axis edge") {
    MatrixXd X = MatrixXd::Zero(4, 3);
    for (int i = 0; i < 3; ++i) X(i + 1, i) = 1.0;
    const std::array<int, 2> hinge = {0, 1};
    CHECK(dihedral_angle(X, hinge) == doctest::Approx(M_PI / 2).epsilon(1e-12));
  }
  SUBCASE("degenerate hinge") {
    MatrixXd X = MatrixXd::Zero(5, 4);
    for (int i = 0; i < 4; ++i) X(i + 1, i) = 1.0;
    X.row(2) = X.row(1);  // hinge 0-1-2 collapses
    const std::array<int, 3> hinge = {0, 1, 2};
    CHECK_THROWS_WITH_AS(dihedral_angle(X, hinge),
                         doctest::Contains("DEGENERATE"), Error);
  }
}

TEST_CASE("length-based angles match coordinate-based angles") {
  SplitRng rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    const int d = trial % 2 == 0 ? 3 : 4;
    MatrixXd X = random_points(d + 1, d, rng);
    if (simplex_degenerate(sqdist_of(X))) continue;
    AngleKernel ker = AngleKernel::from_sqdist(sqdist_of(X));
    for (int i = 0; i <= d; ++i) {
      for (int j = i + 1; j <= d; ++j) {
        std::vector<int> hinge;
        for (int q = 0; q <= d; ++q)
          if (q != i && q != j) hinge.push_back(q);
        const double a = dihedral_angle(X, hinge);
        CHECK(std::abs(a - ker.theta(i, j)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("hinge-volume-weighted angle gradients sum to zero per simplex") {
  SplitRng rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = trial % 2 == 0 ? 3 : 4;
    MatrixXd X = random_points(d + 1, d, rng);
    MatrixXd D = sqdist_of(X);
    if (simplex_degenerate(D)) continue;
    AngleKernel ker = AngleKernel::from_sqdist(D);
    for (int a = 0; a <= d; ++a) {
      for (int b = a + 1; b <= d; ++b) {
        double sum = 0, scale = 0;
        for (int i = 0; i <= d; ++i) {
          for (int j = i + 1; j <= d; ++j) {
            std::vector<int> hinge;
            for (int q = 0; q <= d; ++q)
              if (q != i && q != j) hinge.push_back(q);
            MatrixXd H(hinge.size(), hinge.size());
            for (size_t r = 0; r < hinge.size(); ++r)
              for (size_t s = 0; s < hinge.size(); ++s)
                H(r, s) = D(hinge[r], hinge[s]);
            const double vol = cm_volume(d - 2, H);
            const double der = ker.dtheta_dL(i, j, a, b);
            sum += vol * der;
            scale = std::max(scale, std::abs(vol * der));
          }
        }
        CHECK(std::abs(sum) <= 1e-10 * std::max(scale, 1.0));
      }
    }
  }
}

TEST_CASE("deficit angles vanish on embedded simplex boundaries") {
  SplitRng rng(15);
  for (int d : {3, 4}) {
    std::vector<std::string> names;
    for (int i = 0; i <= d + 1; ++i) names.push_back("v" + std::to_string(i));
    std::vector<PreComplex::SignedTop> tops;
    for (int omit = 0; omit <= d + 1; ++omit) {
      PreComplex::SignedTop t;
      for (int i = 0; i <= d + 1; ++i)
        if (i != omit) t.verts.push_back({i, 0});
      t.sign = omit % 2 == 0 ? 1 : -1;
      tops.push_back(t);
    }
    PreComplex c = PreComplex::build(d, 1, names, tops);
    CoverPlacement pl;
    pl.dim = d;
    pl.lifts.assign(d + 2, {});
    for (int v = 0; v <= d + 1; ++v) {
      Eigen::VectorXd x(d);
      for (int i = 0; i < d; ++i) x(i) = rng.uniform(0.0, 2.0);
      pl.lifts[v][0] = x;
    }

    CurvatureVector w = deficit_angles(c, pl);
    CHECK(w.cwiseAbs().maxCoeff() <= 1e-12);

    // the two angle routes agree
    MetricData m = read_metric(c, pl);
    CurvatureVector w2 = deficit_angles(c, m);
    CHECK((w - w2).cwiseAbs().maxCoeff() <= 1e-10);

    // flipping one sign by hand breaks flatness
    m.eps[1] = -m.eps[1];
    CurvatureVector w3 = deficit_angles(c, m);
    CHECK(w3.cwiseAbs().maxCoeff() > 1e-3);
  }
}

TEST_CASE("angle reduction lands in (-pi, pi]") {
  CHECK(reduce_angle(2 * M_PI) == doctest::Approx(0.0));
  CHECK(reduce_angle(3 * M_PI) == doctest::Approx(M_PI));
  CHECK(reduce_angle(-M_PI) == doctest::Approx(M_PI));
  CHECK(reduce_angle(0.1 - 4 * M_PI) == doctest::Approx(0.1));
}
