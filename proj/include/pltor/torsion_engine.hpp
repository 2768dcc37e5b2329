#pragma once

#include <optional>

#include "pltor/jacobians.hpp"
#include "pltor/linalg.hpp"
#include "pltor/prng.hpp"

namespace pltor {

/// Maximal edge subset C with A|_C nondegenerate, its determinant, the
/// complementary determinant of B, the torsion and the 3-manifold value
/// built from it.
struct TorsionReport {
  std::vector<int> C;     // pivot edge subset (ascending)
  std::vector<int> Cbar;  // complement
  LogDet detA_C;
  LogDet detB_Cbar;
  LogDet tau;
  LogDet invariant;       // |tau * prod l^2 / prod 6V|, sign kept separately
  double tol = 0.0;
  bool experimental_gauge = false;  // trivial-representation caveat
};

/// Pivot subset of a symmetric matrix: greedy principal pivoting (1x1
/// diagonal pivots, 2x2 pivots when the diagonal of the remaining Schur
/// complement vanishes). |C| = rank(A); empty C for A = 0. With an RNG the
/// choice among near-maximal pivots is randomized, producing a different
/// admissible subset.
std::vector<int> select_C(const Eigen::MatrixXd& A, double tol,
                          SplitRng* rng = nullptr);

/// tau = (det B|_Cbar)^2 / det A|_C. B|_Cbar keeps the rows NOT in C;
/// it must be square (SHAPE_MISMATCH otherwise). SINGULAR when det A|_C
/// vanishes for nonempty C.
LogDet torsion3d(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                 const std::vector<int>& C);

/// Full 3-manifold value for a placed complex. Determinants and products are
/// kept in sign + log magnitude form; the reported invariant is an absolute
/// value.
TorsionReport invariant3d(const PreComplex& c, const CoverPlacement& pl,
                          const Representation& rep,
                          uint64_t pivot_seed = 0,
                          bool randomize_pivots = false);

}  // namespace pltor
