#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "pltor/complex_core.hpp"
#include "pltor/placement.hpp"

namespace pltor {

/// Squared edge lengths per edge cell plus the metric sign per top simplex.
/// eps is the product of the top's combinatorial orientation and the
/// orientation of its image under the placement the metric was read from.
struct MetricData {
  Eigen::VectorXd L;        // squared lengths, one per 1-cell
  std::vector<int> eps;     // +1/-1 per top
};

/// Deficit angle per hinge, reduced to (-pi, pi].
using CurvatureVector = Eigen::VectorXd;

/// Euclidean k-volume of a simplex from its (k+1)x(k+1) squared-distance
/// matrix. Throws NOT_REALIZABLE when the distances admit no Euclidean
/// simplex; returns 0 for degenerate ones.
double cm_volume(int k, const Eigen::MatrixXd& sqdist);

/// Signed volume of an ordered (d+1)-tuple of points in d-space.
double signed_volume(const Eigen::MatrixXd& points);

/// Interior dihedral angle of a top simplex at one of its (d-2)-faces,
/// from vertex coordinates (rows of `verts`).
double dihedral_angle(const Eigen::MatrixXd& verts,
                      std::span<const int> hinge_positions);

double reduce_angle(double x);  // to (-pi, pi]

/// Scale-invariant degeneracy test for a simplex given squared distances.
bool simplex_degenerate(const Eigen::MatrixXd& sqdist);

/// Dihedral angles of one simplex and their derivatives with respect to
/// squared edge lengths, all obtained from the inverse of the bordered
/// squared-distance matrix. theta(i, j) is the angle at the hinge shared by
/// the facets opposite vertices i and j, i.e. at the face omitting {i, j}.
class AngleKernel {
 public:
  static AngleKernel from_sqdist(const Eigen::MatrixXd& sqdist);

  double theta(int i, int j) const;
  /// d theta(i,j) / d L(a,b), a != b.
  double dtheta_dL(int i, int j, int a, int b) const;

 private:
  int n_ = 0;  // d+1
  Eigen::MatrixXd cinv_;
  Eigen::MatrixXd w_;
};

/// Squared-distance matrix of top t from lift-0 coordinates.
Eigen::MatrixXd top_sqdist(const PreComplex& c, const CoverPlacement& pl,
                           int t);
/// Squared-distance matrix of top t from a metric.
Eigen::MatrixXd top_sqdist(const PreComplex& c, const MetricData& m, int t);
/// Lift-0 coordinates of top t, rows = tuple positions.
Eigen::MatrixXd top_coords(const PreComplex& c, const CoverPlacement& pl,
                           int t);

/// Lengths read off the placement, signs from image orientations.
MetricData read_metric(const PreComplex& c, const CoverPlacement& pl);

/// Realizability of every top simplex (positive squared volumes of the top
/// and all its faces).
void validate_metric(const PreComplex& c, const MetricData& m);

CurvatureVector deficit_angles(const PreComplex& c, const CoverPlacement& pl);
CurvatureVector deficit_angles(const PreComplex& c, const MetricData& m);

/// Unsigned volume of top t from a metric.
double top_volume(const PreComplex& c, const MetricData& m, int t);

}  // namespace pltor
