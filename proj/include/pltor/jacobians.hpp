#pragma once

#include <functional>

#include "pltor/developing.hpp"
#include "pltor/metric_geometry.hpp"

namespace pltor {

/// d(deficit angle)/d(plain edge length): rows and columns are edge cells of
/// a 3-complex with a flat metric. Symmetric (it is the Hessian of the
/// length-weighted angle sum).
Eigen::MatrixXd assemble_A3(const PreComplex& c, const MetricData& m);

/// d(edge length)/d(gauge parameter) for a 3-complex placement. The column
/// of a radial entry rho_i d(rho_i) is d(l)/d(rho_i) divided by rho_i; a
/// moved vertex moves all of its lifts at once.
Eigen::MatrixXd assemble_B3(const PreComplex& c, const CoverPlacement& pl,
                            const GaugeBasis& g);

/// d(deficit angle around 2-faces)/d(squared edge length) of a 4-complex.
Eigen::MatrixXd assemble_Q4(const PreComplex& c, const MetricData& m);

/// Per 4D edge: unit direction of its base lift and an orthonormal triple
/// spanning the orthogonal complement in 4-space.
struct DeviationBasis {
  std::vector<Eigen::MatrixXd> frame;  // per edge: 4 x 3, columns the triple
  std::vector<Eigen::Vector4d> dir;    // per edge: unit direction

  static DeviationBasis standard(const PreComplex& c,
                                 const CoverPlacement& pl);
};

/// Linearized area response to edge deviations: rows are 2-faces, columns
/// come in blocks of three per edge (the deviation components in the edge's
/// frame). Entry = d(S_face)/d(v_edge component) at zero deviation, from the
/// quadrupled midpoint-triangle area.
Eigen::MatrixXd assemble_D4(const PreComplex& c, const CoverPlacement& pl,
                            const DeviationBasis& basis);

/// Area of a face whose edge midpoints are displaced by the given
/// deviations: 4*S(midpoint triangle) - S(face). Nonlinear; the oracle the
/// linearization is checked against. deviations[i] displaces the midpoint
/// opposite corner i of the face.
double deviated_area_differential(const Eigen::MatrixXd& face_pts,
                                  const std::array<Eigen::VectorXd, 3>& dev);

/// 3x3 block of squared-area responses d(S^2) at three chosen faces to the
/// deviation of one edge.
Eigen::Matrix3d squared_area_block(const PreComplex& c,
                                   const CoverPlacement& pl,
                                   const DeviationBasis& basis, int edge,
                                   const std::array<int, 3>& faces);

/// Transpose with swapped labels: the map taking face-area differentials to
/// edge deficit-angle differentials, conjugate to assemble_Q4's map.
Eigen::MatrixXd conjugate_omega_map(const Eigen::MatrixXd& q4);

/// Central differences with one Richardson extrapolation step.
struct FdGradient {
  Eigen::VectorXd g;
  Eigen::VectorXd err;  // extrapolation error estimate per component
};
FdGradient fd_oracle(const std::function<double(const Eigen::VectorXd&)>& f,
                     const Eigen::VectorXd& x0, double h);

}  // namespace pltor
