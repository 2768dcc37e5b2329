#include "pltor/linalg.hpp"

namespace pltor {

LogDet logdet(const Eigen::MatrixXd& M) {
  const long n = M.rows();
  if (n != M.cols()) return LogDet{};
  if (n == 0) return LogDet::one();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  double sign = lu.permutationP().determinant() *
                lu.permutationQ().determinant();
  double log_abs = 0.0;
  for (long i = 0; i < n; ++i) {
    const double u = lu.matrixLU()(i, i);
    if (u == 0.0) return LogDet{};
    if (u < 0) sign = -sign;
    log_abs += std::log(std::abs(u));
  }
  return LogDet{sign, log_abs};
}

double max_abs(const Eigen::MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  return M.cwiseAbs().maxCoeff();
}

int rank_svd(const Eigen::MatrixXd& M, double rel_tol) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (long i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

double sv_gap(const Eigen::MatrixXd& M, int claimed_rank) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  if (claimed_rank <= 0 || claimed_rank > s.size()) return 0.0;
  if (claimed_rank == s.size() || s(claimed_rank) == 0.0)
    return std::numeric_limits<double>::infinity();
  return s(claimed_rank - 1) / s(claimed_rank);
}

}  // namespace pltor
