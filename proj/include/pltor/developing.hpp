#pragma once

#include <string>
#include <vector>

#include "pltor/metric_geometry.hpp"
#include "pltor/placement.hpp"
#include "pltor/prng.hpp"

namespace pltor {

/// One coordinate differential of the gauge basis: the parameter it
/// differentiates (kind + vertex) and a display label. For the radial
/// entries the basis element is rho*d(rho), i.e. the derivative of the
/// half-squared axis distance.
struct GaugeParam {
  enum class What { RadialU, Phi, Z, CoordX, CoordY, CoordZ, Alpha, Trans };
  What what;
  int vertex = -1;  // -1 for representation parameters
  std::string label;
};

struct GaugeBasis {
  std::vector<GaugeParam> params;
  int size() const { return static_cast<int>(params.size()); }
};

/// Place one fundamental domain at seeded generic coordinates, complete the
/// orbits with the representation, and read the metric off the lifts.
/// Resamples while some top simplex is degenerate; throws
/// RESAMPLE_EXHAUSTED after `max_attempts` tries.
struct PlacementResult {
  CoverPlacement placement;
  MetricData metric;
  int attempts = 0;
};
PlacementResult equivariant_placement(const PreComplex& c,
                                      const Representation& r, uint64_t seed,
                                      int max_attempts = 100);

/// Breadth-first propagation of flat coordinates across shared (d-1)-faces
/// from a base top simplex, over the whole cover. Throws CURVED_INPUT when
/// some deficit angle is nonzero, MONODROMY when a revisited simplex
/// disagrees beyond tolerance.
CoverPlacement develop(const PreComplex& c, const MetricData& m, int base_top,
                       double curvature_tol = 1e-9,
                       double monodromy_tol = 1e-8);

/// The coordinate-differential basis spanned by the placement under the
/// given representation (see GaugeParam). Sizes: 3m-6 for the trivial case
/// (first three vertices pinned), m + 2(m-1) for a single rotation axis,
/// 3m when several axes fix the frame, m + 2(m-1) + 2 for the infinite
/// cyclic case.
GaugeBasis gauge_basis(const CoverPlacement& pl, const Representation& r);

/// Rotate/translate a trivial-representation placement into pin position:
/// vertex 0 at the origin, vertex 1 on the +x axis, vertex 2 in the upper
/// xy half-plane (3D only).
void canonicalize_trivial_gauge(CoverPlacement& pl);

}  // namespace pltor
