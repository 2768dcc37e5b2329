#pragma once

#include "pltor/developing.hpp"

namespace pltor {

/// A generated manifold: quotient pre-complex, equivariant placement of the
/// cover, and the fundamental-group representation used.
struct Generated {
  PreComplex complex;
  CoverPlacement placement;
  Representation rep;
  MetricData metric;
};

/// Boundary of a 4-simplex, five generic points in 3-space.
Generated gen_sphere3(uint64_t seed);

/// Boundary of a 5-simplex (six vertices, six 4-simplices), six generic
/// points in 4-space.
Generated gen_sphere4(uint64_t seed);

/// L(p,q) as the twisted-bipyramid quotient, unrolled to its p-fold cover:
/// the join of two p-gon circles with the deck action a_i -> a_{i+1},
/// b_j -> b_{j+q}. Requires 0 < q < p, gcd(p,q) = 1, 1 <= k < p. The
/// representation sends the deck generator to a rotation by 2*pi*k/p.
Generated gen_lens(int p, int q, int k, uint64_t seed);

/// S^1 x S^2 with an infinite cyclic representation (experimental):
/// rotation by alpha plus translation by a along the z axis. The boundary
/// of a tetrahedron is extruded into a one-layer prism cycle.
Generated gen_s1xs2(double alpha, double a, uint64_t seed);

}  // namespace pltor
