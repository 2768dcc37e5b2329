#pragma once

#include <optional>

#include "pltor/torsion_engine.hpp"
#include "pltor/zoo.hpp"

namespace pltor {

enum class MoveKind { M23, M32, M14, M41, M33, M24, M42 };

const char* to_string(MoveKind k);
std::optional<MoveKind> parse_move_kind(const std::string& token);
int move_dim(MoveKind k);  // 3 or 4

/// A move site: the cluster of top-simplex lifts to replace, plus the cell
/// that identifies the pattern (shared facet, hinge, edge or vertex).
struct Site {
  MoveKind kind;
  std::vector<std::pair<int, int>> cluster;  // (top, shift)
  int anchor_top = -1, anchor_facet = -1;    // M23 / M24
  CellId anchor_cell;                        // M32/M33 hinge, M42 edge, M41 vertex
};

/// All clusters matching the move's before-pattern. Combinatorial
/// admissibility is checked here; geometric nondegeneracy at apply time.
std::vector<Site> find_sites(const PreComplex& c, MoveKind kind);

/// Multiplicative transformation data measured across a 2->4 move.
struct FactorReport {
  MoveKind kind = MoveKind::M23;
  std::string new_vertex;            // vertex-adding moves
  int new_edge = -1;                 // cell id in the new complex (2->4)
  std::vector<int> new_faces;        // cell ids in the new complex (2->4)
  // determinant of the pivot submatrix of the face-deficit Jacobian,
  // before and after, with the subsets extended by the new face/edge
  std::vector<int> pivot_faces, pivot_edges;  // before-complex cell ids
  LogDet det_before, det_after;
  double measured_ratio = 0;     // |det_after / det_before|
  double predicted_factor = 0;   // closed form from the six cluster points
  double analytic_entry = 0;     // assembled entry at (new face, new edge)
  double deviation_factor = 0;   // 3 |det J| / |V|
  double deviation_predicted = 0;  // 72 L^{5/2} of the new edge
};

struct MoveResult {
  PreComplex complex;
  CoverPlacement placement;
  MetricData metric;
  FactorReport report;
};

/// Rewrite the complex at the site, keep the placement consistent
/// (equivariantly placing any new vertex), re-read the metric and verify
/// zero curvature. Throws DEGENERATE_SITE when a no-new-vertex move would
/// create a degenerate simplex, RESAMPLE_EXHAUSTED when a new vertex cannot
/// be placed.
MoveResult apply_move(const PreComplex& c, const CoverPlacement& pl,
                      const Representation& rep, const Site& site,
                      uint64_t seed);

/// 3 |det J| / |V| for an edge surrounded by exactly four top simplices,
/// J the squared-area response block of three of the four faces at the
/// edge; equals 72 L^{5/2}. Throws WRONG_LINK otherwise.
double deviation_form_factor(const PreComplex& c, const CoverPlacement& pl,
                             int edge_cell);

/// n random admissible moves drawn from `kinds`; after each, the manifold
/// value is recomputed. The returned trace includes the initial value.
/// Inadmissible draws are skipped.
std::vector<TorsionReport> move_experiment(PreComplex& c, CoverPlacement& pl,
                                           const Representation& rep,
                                           const std::vector<MoveKind>& kinds,
                                           int n, uint64_t seed);

}  // namespace pltor
