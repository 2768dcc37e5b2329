#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <vector>

#include "pltor/complex_core.hpp"
#include "pltor/errors.hpp"

namespace pltor {

/// A representation of the fundamental group into the isometries of flat
/// d-space, restricted to the cases the artifact supports.
struct Representation {
  enum class Kind { Trivial, SingleAxisCyclic, MultiAxis, CyclicInfinite };

  Kind kind = Kind::Trivial;
  int dim = 3;
  int p = 1;          // order, SingleAxisCyclic
  int k = 0;          // generator -> rotation by 2*pi*k/p about the z axis
  double alpha = 0;   // CyclicInfinite: rotation angle
  double trans = 0;   // CyclicInfinite: translation along the axis

  static Representation trivial(int dim) {
    return Representation{Kind::Trivial, dim, 1, 0, 0, 0};
  }
  static Representation cyclic(int p, int k) {
    return Representation{Kind::SingleAxisCyclic, 3, p, k, 0, 0};
  }
  static Representation zline(double alpha, double trans) {
    return Representation{Kind::CyclicInfinite, 3, 0, 0, alpha, trans};
  }

  int deck_order() const {
    switch (kind) {
      case Kind::SingleAxisCyclic: return p;
      case Kind::CyclicInfinite: return 0;
      default: return 1;
    }
  }

  /// Image of the deck generator's n-th power applied to x.
  Eigen::VectorXd apply(int n, const Eigen::VectorXd& x) const;
};

/// Coordinates of universal-cover vertex lifts in flat d-space.
/// lifts[v] maps a copy index to the lift's coordinates. Placements
/// produced by a representation are exactly equivariant by construction;
/// parsed ones are checked.
struct CoverPlacement {
  int dim = 3;
  std::optional<Representation> rep;
  std::vector<std::map<int, Eigen::VectorXd>> lifts;

  const Eigen::VectorXd& coord(int v, int copy) const;
  bool has_coord(int v, int copy) const;

  /// Largest pairwise distance over all stored lifts.
  double diameter() const;

  /// Max equivariance residual |f(g) x_{v,j} - x_{v,j+1}| over stored
  /// consecutive lifts; 0 when no representation is attached.
  double equivariance_residual() const;
};

struct Isometry {
  Eigen::MatrixXd R;
  Eigen::VectorXd t;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return R * x + t; }
};

/// Least-squares proper isometry mapping the rows of X onto the rows of Y,
/// plus the residual max deviation.
std::pair<Isometry, double> fit_isometry(const Eigen::MatrixXd& X,
                                         const Eigen::MatrixXd& Y);

}  // namespace pltor
