#include "pltor/torsion_engine.hpp"

#include <algorithm>
#include <cmath>

namespace pltor {

namespace {

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& M, const std::vector<int>& rows,
                          const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j)
      out(i, j) = M(rows[i], cols[j]);
  return out;
}

}  // namespace

std::vector<int> select_C(const Eigen::MatrixXd& A, double tol, SplitRng* rng) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n) fail(ErrorCode::BadParams, "A must be square");
  const double scale = max_abs(A);
  if (scale == 0.0) return {};
  const double cutoff = tol * scale;

  Eigen::MatrixXd S = A;
  std::vector<int> avail(n);
  for (int i = 0; i < n; ++i) avail[i] = i;
  std::vector<int> chosen;

  while (!avail.empty()) {
    double best_diag = 0, best_off = 0;
    for (int i : avail) best_diag = std::max(best_diag, std::abs(S(i, i)));
    for (size_t ii = 0; ii < avail.size(); ++ii)
      for (size_t jj = ii + 1; jj < avail.size(); ++jj)
        best_off = std::max(best_off,
                            std::abs(S(avail[ii], avail[jj])));
    if (std::max(best_diag, best_off) <= cutoff) break;

    const auto pick = [&](const std::vector<int>& cands) {
      if (rng && cands.size() > 1)
        return cands[rng->uniform_int(static_cast<int>(cands.size()))];
      return cands.front();
    };

    if (best_diag >= 0.5 * best_off) {
      std::vector<int> cands;
      for (int i : avail)
        if (std::abs(S(i, i)) >= 0.5 * best_diag) cands.push_back(i);
      const int piv = pick(cands);
      chosen.push_back(piv);
      avail.erase(std::find(avail.begin(), avail.end(), piv));
      const double d = S(piv, piv);
      for (int i : avail)
        for (int j : avail) S(i, j) -= S(i, piv) * S(piv, j) / d;
    } else {
      std::vector<std::pair<int, int>> cands;
      for (size_t ii = 0; ii < avail.size(); ++ii)
        for (size_t jj = ii + 1; jj < avail.size(); ++jj)
          if (std::abs(S(avail[ii], avail[jj])) >= 0.5 * best_off)
            cands.push_back({avail[ii], avail[jj]});
      std::pair<int, int> piv = cands.front();
      if (rng && cands.size() > 1)
        piv = cands[rng->uniform_int(static_cast<int>(cands.size()))];
      chosen.push_back(piv.first);
      chosen.push_back(piv.second);
      avail.erase(std::find(avail.begin(), avail.end(), piv.first));
      avail.erase(std::find(avail.begin(), avail.end(), piv.second));
      Eigen::Matrix2d P;
      P << S(piv.first, piv.first), S(piv.first, piv.second),
          S(piv.second, piv.first), S(piv.second, piv.second);
      Eigen::Matrix2d Pi = P.inverse();
      for (int i : avail) {
        for (int j : avail) {
          Eigen::Vector2d u(S(i, piv.first), S(i, piv.second));
          Eigen::Vector2d v(S(piv.first, j), S(piv.second, j));
          S(i, j) -= u.dot(Pi * v);
        }
      }
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

LogDet torsion3d(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                 const std::vector<int>& C) {
  const int n = static_cast<int>(A.rows());
  std::vector<int> cbar;
  {
    std::vector<bool> in_c(n, false);
    for (int i : C) in_c[i] = true;
    for (int i = 0; i < n; ++i)
      if (!in_c[i]) cbar.push_back(i);
  }
  if (static_cast<long>(cbar.size()) != B.cols())
    fail(ErrorCode::ShapeMismatch,
         "B restricted to the complement of C is not square (" +
             std::to_string(cbar.size()) + " rows, " +
             std::to_string(B.cols()) + " gauge parameters)");
  std::vector<int> all_cols(B.cols());
  for (size_t j = 0; j < all_cols.size(); ++j) all_cols[j] = static_cast<int>(j);
  LogDet detA = logdet(submatrix(A, C, C));
  if (detA.sign == 0.0)
    fail(ErrorCode::Singular, "det A|_C vanished for the chosen subset");
  LogDet detB = logdet(submatrix(B, cbar, all_cols));
  return detB * detB / detA;
}

TorsionReport invariant3d(const PreComplex& c, const CoverPlacement& pl,
                          const Representation& rep, uint64_t pivot_seed,
                          bool randomize_pivots) {
  if (c.dim() != 3) fail(ErrorCode::BadParams, "3-complexes only");
  MetricData m = read_metric(c, pl);
  GaugeBasis g = gauge_basis(pl, rep);
  Eigen::MatrixXd A = assemble_A3(c, m);
  Eigen::MatrixXd B = assemble_B3(c, pl, g);

  TorsionReport rep_out;
  rep_out.tol = 1e-8;
  SplitRng rng(pivot_seed);
  rep_out.C = select_C(A, 1e-8, randomize_pivots ? &rng : nullptr);
  {
    std::vector<bool> in_c(A.rows(), false);
    for (int i : rep_out.C) in_c[i] = true;
    for (int i = 0; i < A.rows(); ++i)
      if (!in_c[i]) rep_out.Cbar.push_back(i);
  }
  rep_out.detA_C = logdet(submatrix(A, rep_out.C, rep_out.C));
  std::vector<int> all_cols(B.cols());
  for (size_t j = 0; j < all_cols.size(); ++j) all_cols[j] = static_cast<int>(j);
  rep_out.detB_Cbar = logdet(submatrix(B, rep_out.Cbar, all_cols));
  rep_out.tau = torsion3d(A, B, rep_out.C);

  // value = |tau * prod_edges l^2 / prod_tops 6V| over the quotient
  LogDet val = rep_out.tau;
  for (int e = 0; e < c.cell_count(1); ++e)
    val = val * LogDet::from_value(m.L(e));  // l^2 = L
  for (int t = 0; t < c.top_count(); ++t)
    val = val / LogDet::from_value(6.0 * top_volume(c, m, t));
  val.sign = std::abs(val.sign);
  rep_out.invariant = val;
  rep_out.experimental_gauge = rep.kind == Representation::Kind::Trivial ||
                               rep.kind == Representation::Kind::CyclicInfinite;
  return rep_out;
}

}  // namespace pltor
