#include "pltor/zoo.hpp"

#include <numeric>

namespace pltor {

namespace {

int modular_inverse(int q, int p) {
  int t = 0, newt = 1, r = p, newr = q;
  while (newr != 0) {
    int quot = r / newr;
    t -= quot * newt; std::swap(t, newt);
    r -= quot * newr; std::swap(r, newr);
  }
  return ((t % p) + p) % p;
}

Generated finish(PreComplex c, const Representation& r, uint64_t seed) {
  PlacementResult pr = equivariant_placement(c, r, seed);
  return Generated{std::move(c), std::move(pr.placement), r,
                   std::move(pr.metric)};
}

PreComplex simplex_boundary(int d, std::vector<std::string> names) {
  std::vector<PreComplex::SignedTop> tops;
  for (int omit = 0; omit <= d + 1; ++omit) {
    PreComplex::SignedTop top;
    for (int i = 0; i <= d + 1; ++i)
      if (i != omit) top.verts.push_back({i, 0});
    top.sign = (omit % 2 == 0) ? 1 : -1;
    tops.push_back(std::move(top));
  }
  return PreComplex::build(d, 1, std::move(names), std::move(tops));
}

}  // namespace

Generated gen_sphere3(uint64_t seed) {
  PreComplex c = simplex_boundary(3, {"v1", "v2", "v3", "v4", "v5"});
  return finish(std::move(c), Representation::trivial(3), seed);
}

Generated gen_sphere4(uint64_t seed) {
  PreComplex c = simplex_boundary(4, {"A", "B", "C", "D", "E", "F"});
  return finish(std::move(c), Representation::trivial(4), seed);
}

Generated gen_lens(int p, int q, int k, uint64_t seed) {
  if (p < 2 || q <= 0 || q >= p || std::gcd(p, q) != 1 || k < 1 || k >= p)
    fail(ErrorCode::BadParams, "lens parameters need 0<q<p, gcd(p,q)=1, 1<=k<p");

  std::vector<std::string> names;
  std::vector<PreComplex::SignedTop> tops;

  if (p >= 3) {
    // Quotient tops: one join tetrahedron (a_0, a_1, b_j, b_{j+1}) per
    // deck orbit; b_j is the lift (b, j * q^{-1} mod p).
    names = {"a", "b"};
    const int qinv = modular_inverse(q, p);
    for (int j = 0; j < p; ++j) {
      PreComplex::SignedTop top;
      top.verts = {{0, 0},
                   {0, 1},
                   {1, deck_mod(qinv * j, p)},
                   {1, deck_mod(qinv * (j + 1), p)}};
      top.sign = 1;
      tops.push_back(std::move(top));
    }
  } else {
    // p = 2: digon joins are not simplicial, so both circles get four
    // vertices (two per orbit); the deck shifts copies by one.
    names = {"a0", "a1", "b0", "b1"};
    auto circ = [](int base, int i) {
      return LiftVertex{base + (i % 2), (i % 4) / 2};
    };
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 4; ++j) {
        PreComplex::SignedTop top;
        top.verts = {circ(0, i), circ(0, i + 1), circ(2, j), circ(2, j + 1)};
        top.sign = 1;
        tops.push_back(std::move(top));
      }
    }
  }

  PreComplex c = PreComplex::build(3, p, std::move(names), std::move(tops));
  return finish(std::move(c), Representation::cyclic(p, k), seed);
}

Generated gen_s1xs2(double alpha, double a, uint64_t seed) {
  if (a == 0.0) fail(ErrorCode::BadParams, "translation distance must be nonzero");

  // Prism cycle over the boundary of a tetrahedron on t0..t3: each triangle
  // (u < v < w) extrudes to three tetrahedra between copy 0 and copy 1.
  std::vector<std::string> names = {"t0", "t1", "t2", "t3"};
  std::vector<PreComplex::SignedTop> tops;
  const int tri[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
  for (int f = 0; f < 4; ++f) {
    const int u = tri[f][0], v = tri[f][1], w = tri[f][2];
    const LiftVertex u0{u, 0}, v0{v, 0}, w0{w, 0};
    const LiftVertex u1{u, 1}, v1{v, 1}, w1{w, 1};
    tops.push_back({{u0, v0, w0, w1}, 0});
    tops.push_back({{u0, v0, v1, w1}, 0});
    tops.push_back({{u0, u1, v1, w1}, 0});
  }
  PreComplex c = PreComplex::build(3, 0, std::move(names), std::move(tops),
                                   /*infer_signs=*/true);
  return finish(std::move(c), Representation::zline(alpha, a), seed);
}

}  // namespace pltor
