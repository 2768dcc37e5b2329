#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace pltor {

/// Determinant in sign + log-magnitude form, so products like the ones in
/// torsion values never overflow.
struct LogDet {
  double sign = 0.0;      // -1, 0, +1
  double log_abs = -std::numeric_limits<double>::infinity();

  double value() const { return sign == 0.0 ? 0.0 : sign * std::exp(log_abs); }

  LogDet operator*(const LogDet& o) const {
    if (sign == 0.0 || o.sign == 0.0) return LogDet{};
    return LogDet{sign * o.sign, log_abs + o.log_abs};
  }
  LogDet operator/(const LogDet& o) const {
    return LogDet{sign * o.sign, log_abs - o.log_abs};
  }
  static LogDet one() { return LogDet{1.0, 0.0}; }
  static LogDet from_value(double v) {
    if (v == 0.0) return LogDet{};
    return LogDet{v > 0 ? 1.0 : -1.0, std::log(std::abs(v))};
  }
};

/// LU determinant of a square matrix (sign + log magnitude). The 0x0
/// determinant is 1 by convention.
LogDet logdet(const Eigen::MatrixXd& M);

double max_abs(const Eigen::MatrixXd& M);

/// Numerical rank from singular values with a relative threshold.
int rank_svd(const Eigen::MatrixXd& M, double rel_tol = 1e-8);

/// sigma_r / sigma_{r+1} for the claimed rank r (infinity when all the
/// trailing singular values vanish identically).
double sv_gap(const Eigen::MatrixXd& M, int claimed_rank);

}  // namespace pltor
