#include "pltor/placement.hpp"

#include <cmath>

namespace pltor {

Eigen::VectorXd Representation::apply(int n, const Eigen::VectorXd& x) const {
  switch (kind) {
    case Kind::Trivial:
    case Kind::MultiAxis:
      return x;
    case Kind::SingleAxisCyclic: {
      const double th = 2.0 * M_PI * k * n / p;
      Eigen::VectorXd y = x;
      const double c = std::cos(th), s = std::sin(th);
      y(0) = c * x(0) - s * x(1);
      y(1) = s * x(0) + c * x(1);
      return y;
    }
    case Kind::CyclicInfinite: {
      const double th = alpha * n;
      Eigen::VectorXd y = x;
      const double c = std::cos(th), s = std::sin(th);
      y(0) = c * x(0) - s * x(1);
      y(1) = s * x(0) + c * x(1);
      y(2) = x(2) + trans * n;
      return y;
    }
  }
  return x;
}

const Eigen::VectorXd& CoverPlacement::coord(int v, int copy) const {
  if (rep && rep->kind == Representation::Kind::SingleAxisCyclic)
    copy = deck_mod(copy, rep->p);
  auto it = lifts[v].find(copy);
  if (it == lifts[v].end())
    fail(ErrorCode::BadParams, "missing lift " + std::to_string(copy) +
                                   " of vertex " + std::to_string(v));
  return it->second;
}

bool CoverPlacement::has_coord(int v, int copy) const {
  if (rep && rep->kind == Representation::Kind::SingleAxisCyclic)
    copy = deck_mod(copy, rep->p);
  return lifts[v].count(copy) > 0;
}

double CoverPlacement::diameter() const {
  std::vector<const Eigen::VectorXd*> pts;
  for (const auto& mp : lifts)
    for (const auto& [c, x] : mp) pts.push_back(&x);
  double best = 0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      best = std::max(best, (*pts[i] - *pts[j]).norm());
  return best;
}

double CoverPlacement::equivariance_residual() const {
  if (!rep) return 0.0;
  double worst = 0.0;
  for (const auto& mp : lifts) {
    for (const auto& [c, x] : mp) {
      auto it = mp.find(c + 1);
      if (it == mp.end()) {
        if (rep->kind == Representation::Kind::SingleAxisCyclic)
          it = mp.find(deck_mod(c + 1, rep->p));
        if (it == mp.end()) continue;
      }
      worst = std::max(worst, (rep->apply(1, x) - it->second).norm());
    }
  }
  return worst;
}

std::pair<Isometry, double> fit_isometry(const Eigen::MatrixXd& X,
                                         const Eigen::MatrixXd& Y) {
  const int d = static_cast<int>(X.cols());
  Eigen::VectorXd cx = X.colwise().mean();
  Eigen::VectorXd cy = Y.colwise().mean();
  Eigen::MatrixXd Xc = X.rowwise() - cx.transpose();
  Eigen::MatrixXd Yc = Y.rowwise() - cy.transpose();
  Eigen::MatrixXd H = Xc.transpose() * Yc;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      H, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::MatrixXd U = svd.matrixU(), V = svd.matrixV();
  Eigen::VectorXd diag = Eigen::VectorXd::Ones(d);
  if ((V * U.transpose()).determinant() < 0) diag(d - 1) = -1;
  Eigen::MatrixXd R = V * diag.asDiagonal() * U.transpose();
  Isometry iso{R, cy - R * cx};
  double worst = 0;
  for (int i = 0; i < X.rows(); ++i)
    worst = std::max(
        worst,
        (iso.apply(X.row(i).transpose()) - Y.row(i).transpose()).norm());
  return {iso, worst};
}

}  // namespace pltor
