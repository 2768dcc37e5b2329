#include "pltor/developing.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <set>

namespace pltor {

namespace {

// Copies a placement must carry: every copy referenced by some top tuple.
std::set<int> copies_needed(const PreComplex& c) {
  std::set<int> out;
  for (int t = 0; t < c.top_count(); ++t)
    for (const auto& lv : c.top(t).verts) out.insert(lv.copy);
  out.insert(0);
  return out;
}

bool placement_ok(const PreComplex& c, const CoverPlacement& pl) {
  for (int t = 0; t < c.top_count(); ++t) {
    Eigen::MatrixXd D = top_sqdist(c, pl, t);
    if (simplex_degenerate(D)) return false;
  }
  return true;
}

}  // namespace

void canonicalize_trivial_gauge(CoverPlacement& pl) {
  if (pl.dim != 3) return;
  const int m = static_cast<int>(pl.lifts.size());
  if (m < 3) fail(ErrorCode::GaugeDegenerate, "need three vertices to pin");
  Eigen::VectorXd p0 = pl.coord(0, 0), p1 = pl.coord(1, 0), p2 = pl.coord(2, 0);
  Eigen::Vector3d a = (p1 - p0), b = (p2 - p0);
  if (a.norm() < 1e-12)
    fail(ErrorCode::GaugeDegenerate, "gauge vertices coincide");
  Eigen::Vector3d ex = a.normalized();
  Eigen::Vector3d bp = b - b.dot(ex) * ex;
  if (bp.norm() < 1e-12)
    fail(ErrorCode::GaugeDegenerate, "gauge vertices collinear");
  Eigen::Vector3d ey = bp.normalized();
  Eigen::Vector3d ez = ex.cross(ey);
  Eigen::Matrix3d R;
  R.row(0) = ex; R.row(1) = ey; R.row(2) = ez;
  for (auto& mp : pl.lifts)
    for (auto& [cidx, x] : mp) x = R * (x - p0);
}

PlacementResult equivariant_placement(const PreComplex& c,
                                      const Representation& r, uint64_t seed,
                                      int max_attempts) {
  if (r.deck_order() != c.deck_order())
    fail(ErrorCode::BadParams, "representation deck order mismatch");
  if (r.kind == Representation::Kind::CyclicInfinite && r.trans == 0.0)
    fail(ErrorCode::BadParams, "infinite cyclic case needs a nonzero translation");
  const int d = c.dim();
  const int m = c.vertex_count();
  SplitRng root(seed);
  const std::set<int> copies = copies_needed(c);

  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    SplitRng rng = root.split(attempt);
    CoverPlacement pl;
    pl.dim = d;
    pl.rep = r;
    pl.lifts.assign(m, {});
    for (int v = 0; v < m; ++v) {
      Eigen::VectorXd base(d);
      for (int i = 0; i < d; ++i) base(i) = rng.uniform(1.0, 2.0);
      if (r.kind == Representation::Kind::SingleAxisCyclic) {
        for (int cp = 0; cp < r.p; ++cp) pl.lifts[v][cp] = r.apply(cp, base);
      } else if (r.kind == Representation::Kind::CyclicInfinite) {
        for (int cp : copies) pl.lifts[v][cp] = r.apply(cp, base);
      } else {
        pl.lifts[v][0] = base;
      }
    }
    if (!placement_ok(c, pl)) continue;
    if (r.kind == Representation::Kind::Trivial && d == 3) {
      try {
        canonicalize_trivial_gauge(pl);
      } catch (const Error&) {
        continue;
      }
    }
    PlacementResult res;
    res.placement = std::move(pl);
    res.metric = read_metric(c, res.placement);
    res.attempts = attempt;
    CurvatureVector w = deficit_angles(c, res.placement);
    if (w.size() > 0 && w.cwiseAbs().maxCoeff() > 1e-10)
      fail(ErrorCode::CurvedInput,
           "constructed placement has nonzero deficit angles");
    return res;
  }
  fail(ErrorCode::ResampleExhausted,
       "no nondegenerate placement in the attempt budget");
}

namespace {

// Embed one simplex from its squared distances; vertex 0 at the origin.
Eigen::MatrixXd embed_simplex(const Eigen::MatrixXd& D, int d) {
  const int n = static_cast<int>(D.rows());
  Eigen::MatrixXd G(n - 1, n - 1);
  for (int i = 0; i < n - 1; ++i)
    for (int j = 0; j < n - 1; ++j)
      G(i, j) = 0.5 * (D(0, i + 1) + D(0, j + 1) - D(i + 1, j + 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, d);
  const int cols = std::min(d, n - 1);
  for (int i = 0; i < n - 1; ++i)
    for (int j = 0; j < cols; ++j)
      X(i + 1, j) =
          es.eigenvectors().col(n - 2 - j)(i) * std::sqrt(ev(n - 2 - j));
  return X;
}

// Apex position given d face points and squared distances to them; the
// mirror is resolved by the requested orientation sign of the full tuple.
Eigen::VectorXd place_apex(const std::vector<Eigen::VectorXd>& face_pts,
                           const std::vector<double>& sqd, int want_sign,
                           const std::vector<Eigen::VectorXd>& tuple_so_far,
                           int apex_position, int d) {
  const Eigen::VectorXd& a0 = face_pts[0];
  Eigen::MatrixXd B(d, d - 1);
  Eigen::VectorXd rhs(d - 1);
  for (int i = 1; i < d; ++i) {
    Eigen::VectorXd diff = face_pts[i] - a0;
    B.col(i - 1) = diff;
    rhs(i - 1) = 0.5 * (diff.squaredNorm() + sqd[0] - sqd[i]);
  }
  // y parallel component within span(B), height along the normal
  Eigen::MatrixXd Bt = B.transpose();
  Eigen::VectorXd ypar =
      B * (Bt * B).ldlt().solve(rhs);  // least-norm solution of Bt y = rhs
  double h2 = sqd[0] - ypar.squaredNorm();
  if (h2 < 0) {
    if (h2 < -1e-6 * std::max(1.0, sqd[0]))
      fail(ErrorCode::Degenerate, "inconsistent apex distances");
    h2 = 0;
  }
  // unit normal to the face's affine hull
  Eigen::FullPivHouseholderQR<Eigen::MatrixXd> qr(B);
  Eigen::MatrixXd Q = qr.matrixQ();
  Eigen::VectorXd n = Q.col(d - 1);
  for (int s = 0; s < 2; ++s) {
    Eigen::VectorXd y = a0 + ypar + (s == 0 ? 1.0 : -1.0) * std::sqrt(h2) * n;
    Eigen::MatrixXd pts(d + 1, d);
    for (int i = 0; i <= d; ++i) {
      if (i == apex_position)
        pts.row(i) = y.transpose();
      else
        pts.row(i) = tuple_so_far[i].transpose();
    }
    double sv = signed_volume(pts);
    if ((sv > 0 ? 1 : -1) == want_sign) return y;
  }
  fail(ErrorCode::Degenerate, "apex orientation unresolvable");
}

}  // namespace

CoverPlacement develop(const PreComplex& c, const MetricData& m, int base_top,
                       double curvature_tol, double monodromy_tol) {
  const int d = c.dim();
  const int p = c.deck_order();
  if (p == 0)
    fail(ErrorCode::BadParams, "developing needs a finite cover");
  if (base_top < 0 || base_top >= c.top_count())
    fail(ErrorCode::BadParams, "base top out of range");
  validate_metric(c, m);
  {
    CurvatureVector w = deficit_angles(c, m);
    if (w.size() > 0 && w.cwiseAbs().maxCoeff() > curvature_tol)
      fail(ErrorCode::CurvedInput, "metric has nonzero deficit angles");
  }

  // cover vertex (v, copy) -> coordinates
  std::map<std::pair<int, int>, Eigen::VectorXd> coords;
  double scale = std::sqrt(m.L.maxCoeff());
  const double tol = monodromy_tol * std::max(scale, 1.0);

  const auto label_at = [&](int t, int pos, int shift) {
    LiftVertex lv = c.top(t).verts[pos];
    return std::pair<int, int>(lv.v, deck_mod(lv.copy + shift, p));
  };

  // seed the base simplex
  {
    Eigen::MatrixXd D = top_sqdist(c, m, base_top);
    Eigen::MatrixXd X = embed_simplex(D, d);
    double sv = signed_volume(X);
    if (sv == 0) fail(ErrorCode::Degenerate, "degenerate base top");
    if ((sv > 0 ? 1 : -1) * c.top(base_top).sign != m.eps[base_top])
      X.col(d - 1) *= -1.0;  // mirror to realize the required sign
    for (int i = 0; i <= d; ++i)
      coords[label_at(base_top, i, 0)] = X.row(i).transpose();
  }

  std::set<std::pair<int, int>> visited;  // cover tops (t, shift)
  std::deque<std::pair<int, int>> queue;
  visited.insert({base_top, 0});
  queue.push_back({base_top, 0});
  double worst_monodromy = 0;

  while (!queue.empty()) {
    auto [t, s] = queue.front();
    queue.pop_front();
    for (int f = 0; f <= d; ++f) {
      const auto& g = c.facet_glue(t, f);
      int s2 = deck_mod(s + g.shift, p);
      if (visited.count({g.top, s2})) continue;
      visited.insert({g.top, s2});

      // coordinates of the d shared vertices are known; the opposite vertex
      // may or may not be.
      std::vector<Eigen::VectorXd> tuple(d + 1);
      int missing = -1;
      for (int i = 0; i <= d; ++i) {
        auto key = label_at(g.top, i, s2);
        auto it = coords.find(key);
        if (it != coords.end()) {
          tuple[i] = it->second;
        } else if (missing < 0) {
          missing = i;
        } else {
          missing = -2;  // more than one unknown: postpone
        }
      }
      if (missing == -2) {
        visited.erase({g.top, s2});
        continue;
      }
      if (missing >= 0) {
        std::vector<Eigen::VectorXd> face_pts;
        std::vector<double> sqd;
        for (int i = 0; i <= d; ++i) {
          if (i == missing) continue;
          face_pts.push_back(tuple[i]);
          sqd.push_back(m.L(c.edge_at(g.top, missing, i)));
        }
        int want = m.eps[g.top] * c.top(g.top).sign;
        tuple[missing] =
            place_apex(face_pts, sqd, want, tuple, missing, d);
        coords[label_at(g.top, missing, s2)] = tuple[missing];
      } else {
        // fully known: monodromy check against the metric
        Eigen::MatrixXd D = top_sqdist(c, m, g.top);
        for (int i = 0; i <= d; ++i)
          for (int j = i + 1; j <= d; ++j) {
            double got = (tuple[i] - tuple[j]).norm();
            double wanted = std::sqrt(D(i, j));
            worst_monodromy = std::max(worst_monodromy,
                                       std::abs(got - wanted));
          }
      }
      queue.push_back({g.top, s2});
    }
  }

  // every cover top must have been reached and must match the metric
  const long cover_tops = static_cast<long>(c.top_count()) * std::max(p, 1);
  if (static_cast<long>(visited.size()) != cover_tops)
    fail(ErrorCode::Monodromy, "cover not fully developed");
  for (auto [t, s] : visited) {
    Eigen::MatrixXd D = top_sqdist(c, m, t);
    for (int i = 0; i <= d; ++i)
      for (int j = i + 1; j <= d; ++j) {
        auto a = coords.at(label_at(t, i, s));
        auto b = coords.at(label_at(t, j, s));
        worst_monodromy = std::max(
            worst_monodromy, std::abs((a - b).norm() - std::sqrt(D(i, j))));
      }
  }
  if (worst_monodromy > tol)
    fail(ErrorCode::Monodromy, "coordinates disagree on re-entry");

  CoverPlacement out;
  out.dim = d;
  out.lifts.assign(c.vertex_count(), {});
  for (const auto& [key, x] : coords) out.lifts[key.first][key.second] = x;
  return out;
}

GaugeBasis gauge_basis(const CoverPlacement& pl, const Representation& r) {
  GaugeBasis basis;
  const int m = static_cast<int>(pl.lifts.size());
  using What = GaugeParam::What;
  switch (r.kind) {
    case Representation::Kind::Trivial: {
      if (pl.dim != 3)
        fail(ErrorCode::BadParams, "trivial gauge basis is for 3-space");
      if (m < 3)
        fail(ErrorCode::GaugeDegenerate, "too few vertices to fix the frame");
      // pin gauge: vertex 0 fixed, vertex 1 on +x, vertex 2 in upper xy
      basis.params.push_back({What::CoordX, 1, "dx_1"});
      basis.params.push_back({What::CoordX, 2, "dx_2"});
      basis.params.push_back({What::CoordY, 2, "dy_2"});
      for (int v = 3; v < m; ++v) {
        basis.params.push_back({What::CoordX, v, "dx_" + std::to_string(v)});
        basis.params.push_back({What::CoordY, v, "dy_" + std::to_string(v)});
        basis.params.push_back({What::CoordZ, v, "dz_" + std::to_string(v)});
      }
      break;
    }
    case Representation::Kind::MultiAxis: {
      for (int v = 0; v < m; ++v) {
        basis.params.push_back({What::CoordX, v, "dx_" + std::to_string(v)});
        basis.params.push_back({What::CoordY, v, "dy_" + std::to_string(v)});
        basis.params.push_back({What::CoordZ, v, "dz_" + std::to_string(v)});
      }
      break;
    }
    case Representation::Kind::SingleAxisCyclic:
    case Representation::Kind::CyclicInfinite: {
      for (int v = 0; v < m; ++v) {
        const auto& x = pl.coord(v, 0);
        if (std::hypot(x(0), x(1)) < 1e-9)
          fail(ErrorCode::GaugeDegenerate, "vertex on the rotation axis");
        basis.params.push_back({What::RadialU, v,
                                "rho_" + std::to_string(v) + " drho"});
      }
      for (int v = 1; v < m; ++v)
        basis.params.push_back({What::Phi, v,
                                "d(phi_" + std::to_string(v) + "-phi_0)"});
      for (int v = 1; v < m; ++v)
        basis.params.push_back({What::Z, v,
                                "d(z_" + std::to_string(v) + "-z_0)"});
      if (r.kind == Representation::Kind::CyclicInfinite) {
        basis.params.push_back({What::Alpha, -1, "dalpha"});
        basis.params.push_back({What::Trans, -1, "da"});
      }
      break;
    }
  }
  return basis;
}

}  // namespace pltor
