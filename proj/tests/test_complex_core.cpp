#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pltor/complex_core.hpp"

using namespace pltor;

namespace {

PreComplex::SignedTop top(std::vector<int> vs, int sign) {
  PreComplex::SignedTop t;
  for (int v : vs) t.verts.push_back({v, 0});
  t.sign = sign;
  return t;
}

PreComplex boundary_of_simplex(int d) {
  std::vector<std::string> names;
  for (int i = 0; i <= d + 1; ++i) names.push_back("v" + std::to_string(i));
  std::vector<PreComplex::SignedTop> tops;
  for (int omit = 0; omit <= d + 1; ++omit) {
    std::vector<int> vs;
    for (int i = 0; i <= d + 1; ++i)
      if (i != omit) vs.push_back(i);
    tops.push_back(top(vs, omit % 2 == 0 ? 1 : -1));
  }
  return PreComplex::build(d, 1, names, tops);
}

}  // namespace

TEST_CASE("boundary of a 4-simplex has binomial cell counts") {
  PreComplex c = boundary_of_simplex(3);
  CHECK(c.cell_count(3) == 5);
  CHECK(c.cell_count(2) == 10);
  CHECK(c.cell_count(1) == 10);
  CHECK(c.cell_count(0) == 5);
  CHECK(c.euler_characteristic() == 0);
}

TEST_CASE("boundary of a 5-simplex has binomial cell counts") {
  PreComplex c = boundary_of_simplex(4);
  CHECK(c.cell_count(4) == 6);
  CHECK(c.cell_count(3) == 15);
  CHECK(c.cell_count(2) == 20);
  CHECK(c.cell_count(1) == 15);
  CHECK(c.cell_count(0) == 6);
  CHECK(c.euler_characteristic() == 2);
}

TEST_CASE("pillow: two tetrahedra glued along all four faces") {
  PreComplex c = PreComplex::build(
      3, 1, {"1", "2", "3", "4"},
      {top({0, 1, 2, 3}, 1), top({0, 1, 2, 3}, -1)});
  CHECK(c.cell_count(3) == 2);
  CHECK(c.cell_count(2) == 4);
  CHECK(c.cell_count(1) == 6);
  CHECK(c.cell_count(0) == 4);
  CHECK(c.euler_characteristic() == 0);
  // every triangle shared by both tops
  for (int f = 0; f < 4; ++f) {
    auto cf = c.cofaces(2, f);
    REQUIRE(cf.size() == 2);
    CHECK(cf[0].first != cf[1].first);
  }
}

TEST_CASE("hinge cycles on the boundary of a 4-simplex") {
  PreComplex c = boundary_of_simplex(3);
  // edge {v1, v2}: the three tetrahedra containing it
  auto edges = c.cells_with_vertices(1, {0, 1});
  REQUIRE(edges.size() == 1);
  auto cyc = c.hinge_cycle(CellId{1, edges[0]});
  CHECK(cyc.size() == 3);
  // hinge cycle length equals the number of coface slots, for every hinge
  for (int h = 0; h < c.cell_count(1); ++h)
    CHECK(c.hinge_entries(h).size() == c.cofaces(1, h).size());
}

TEST_CASE("hinge cycles on the boundary of a 5-simplex") {
  PreComplex c = boundary_of_simplex(4);
  auto faces = c.cells_with_vertices(2, {0, 1, 2});
  REQUIRE(faces.size() == 1);
  CHECK(c.hinge_cycle(CellId{2, faces[0]}).size() == 3);
}

TEST_CASE("build errors") {
  SUBCASE("NON_MANIFOLD: a triangle in one top slot") {
    std::vector<PreComplex::SignedTop> tops;
    for (int omit = 0; omit < 4; ++omit) {  // drop the fifth tetrahedron
      std::vector<int> vs;
      for (int i = 0; i <= 4; ++i)
        if (i != omit) vs.push_back(i);
      tops.push_back(top(vs, omit % 2 == 0 ? 1 : -1));
    }
    CHECK_THROWS_WITH_AS(
        PreComplex::build(3, 1, {"a", "b", "c", "d", "e"}, tops),
        doctest::Contains("NON_MANIFOLD"), Error);
  }
  SUBCASE("ORIENTATION_CLASH: one sign flipped") {
    std::vector<PreComplex::SignedTop> tops;
    for (int omit = 0; omit <= 4; ++omit) {
      std::vector<int> vs;
      for (int i = 0; i <= 4; ++i)
        if (i != omit) vs.push_back(i);
      tops.push_back(top(vs, omit % 2 == 0 ? 1 : -1));
    }
    tops[2].sign = -tops[2].sign;
    CHECK_THROWS_WITH_AS(
        PreComplex::build(3, 1, {"a", "b", "c", "d", "e"}, tops),
        doctest::Contains("ORIENTATION_CLASH"), Error);
  }
  SUBCASE("BAD_ARITY: wrong tuple length") {
    CHECK_THROWS_WITH_AS(
        PreComplex::build(3, 1, {"a", "b", "c"}, {top({0, 1, 2}, 1)}),
        doctest::Contains("BAD_ARITY"), Error);
  }
  SUBCASE("BAD_ARITY: repeated cover vertex") {
    CHECK_THROWS_WITH_AS(
        PreComplex::build(3, 1, {"a", "b", "c"}, {top({0, 1, 2, 2}, 1)}),
        doctest::Contains("BAD_ARITY"), Error);
  }
}

TEST_CASE("vertex-multiset lookup returns all matching slots") {
  PreComplex c = PreComplex::build(
      3, 1, {"1", "2", "3", "4"},
      {top({0, 1, 2, 3}, 1), top({0, 1, 2, 3}, -1)});
  CHECK(c.cells_with_vertices(3, {0, 1, 2, 3}).size() == 2);
  CHECK(c.cells_with_vertices(1, {0, 1}).size() == 1);
}

TEST_CASE("deck quotient: cells come out as orbits") {
  // join of two pentagons with the shift-by-one deck action: the quotient
  // has 2 vertices, 7 edges, 10 triangles, 5 tetrahedra
  const int p = 5;
  std::vector<PreComplex::SignedTop> tops;
  for (int j = 0; j < p; ++j) {
    PreComplex::SignedTop t;
    t.verts = {{0, 0}, {0, 1}, {1, j}, {1, j + 1}};
    t.sign = 1;
    tops.push_back(t);
  }
  PreComplex c = PreComplex::build(3, p, {"a", "b"}, tops);
  CHECK(c.cell_count(0) == 2);
  CHECK(c.cell_count(1) == p + 2);
  CHECK(c.cell_count(2) == 2 * p);
  CHECK(c.cell_count(3) == p);
  CHECK(c.euler_characteristic() == 0);

  // a quotient top may meet the same hinge cell twice
  auto a_edges = c.cells_with_vertices(1, {0, 0});
  REQUIRE(a_edges.size() == 1);
  CHECK(c.hinge_entries(a_edges[0]).size() == p);

  // glue records round-trip through the explicit-glue builder
  PreComplex c2 = PreComplex::build_glued(3, p, c.vertex_names(), tops,
                                          c.glue_records());
  CHECK(c2.cell_count(1) == c.cell_count(1));
  for (int t = 0; t < c.top_count(); ++t)
    for (int f = 0; f <= 3; ++f) {
      CHECK(c.facet_glue(t, f).top == c2.facet_glue(t, f).top);
      CHECK(c.facet_glue(t, f).shift == c2.facet_glue(t, f).shift);
    }
}
