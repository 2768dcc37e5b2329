#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pltor/errors.hpp"

namespace pltor {

/// A vertex of the cover: a quotient vertex index plus a deck copy index.
/// For deck order p >= 2 copies live in Z_p, for the infinite-cyclic case
/// (deck order 0) they are plain integers, and for the trivial case (order 1)
/// they are always 0.
struct LiftVertex {
  int v = -1;
  int copy = 0;
  friend bool operator==(const LiftVertex&, const LiftVertex&) = default;
  friend auto operator<=>(const LiftVertex&, const LiftVertex&) = default;
};

/// Handle for a quotient cell: dimension and slot index.
struct CellId {
  int dim = -1;
  int index = -1;
  friend bool operator==(const CellId&, const CellId&) = default;
};

/// Explicit facet gluing record, usable across deck copies:
/// facet `facet_a` of top `top_a` at every lift n is identified with facet
/// `facet_b` of top `top_b` at lift n + shift. Facet f of a top is the one
/// omitting tuple position f; vertex correspondence is recovered by matching
/// (vertex, copy) labels, which are distinct within any facet.
struct GlueRecord {
  int top_a = -1, facet_a = -1;
  int top_b = -1, facet_b = -1;
  int shift = 0;
};

/// Oriented simplicial pre-complex of a closed d-manifold (d = 3 or 4),
/// represented as a quotient of a deck-symmetric cover.
///
/// Tops are ordered (d+1)-tuples of cover vertices with a combinatorial
/// orientation sign. Cells of every dimension are slot classes: corner slots
/// (top, position subset) merged through the facet gluings, with the deck
/// shift between slots tracked exactly. The same vertex multiset may appear
/// as several distinct cells, and one top may meet a cell several times.
class PreComplex {
 public:
  struct SignedTop {
    std::vector<LiftVertex> verts;  // d+1, ordered
    int sign = 1;                   // combinatorial orientation, +1/-1
  };

  struct SlotRef {
    int cell = -1;
    int shift = 0;  // labels(slot) = labels(cell base) + shift
  };

  struct FacetGlue {
    int top = -1, facet = -1, shift = 0;
    std::array<int8_t, 5> perm{};  // facet-local position map, a -> b side
  };

  struct HingeEntry {
    int top = -1;
    uint8_t hinge_mask = 0;  // positions of the hinge inside `top`
    int shift = 0;           // lift of `top` relative to the hinge base lift
  };

  /// Build from signed tops; facet gluings are inferred by matching
  /// (vertex, copy) multisets up to deck shifts. Each facet multiset class
  /// must appear in exactly two slots. With `infer_signs`, combinatorial
  /// signs are propagated from anchors (tops whose sign is already +/-1)
  /// instead of being validated as given.
  static PreComplex build(int dim, int deck_order,
                          std::vector<std::string> vertex_names,
                          std::vector<SignedTop> tops,
                          bool infer_signs = false);

  /// Build with explicit facet gluings (required whenever multiset matching
  /// would be ambiguous, e.g. after Pachner moves).
  static PreComplex build_glued(int dim, int deck_order,
                                std::vector<std::string> vertex_names,
                                std::vector<SignedTop> tops,
                                std::vector<GlueRecord> glues,
                                bool infer_signs = false);

  int dim() const { return dim_; }
  int deck_order() const { return deck_; }

  int vertex_count() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& vertex_names() const { return names_; }
  int vertex_index(const std::string& name) const;

  int top_count() const { return static_cast<int>(tops_.size()); }
  const SignedTop& top(int t) const { return tops_[t]; }

  int cell_count(int k) const { return static_cast<int>(cells_[k].size()); }
  /// Position-ordered (vertex, copy) labels of the cell's base lift.
  std::span<const LiftVertex> cell_labels(int k, int c) const {
    return cells_[k][c].labels;
  }

  /// All corner slots (top, position mask) belonging to a cell.
  const std::vector<std::pair<int, uint8_t>>& cofaces(int k, int c) const {
    return cells_[k][c].members;
  }

  /// The slot whose position-ordered labels are exactly cell_labels(k, c)
  /// (the cell's base lift, shift 0).
  std::pair<int, uint8_t> base_slot(int k, int c) const {
    return {cells_[k][c].base_top, cells_[k][c].base_mask};
  }

  SlotRef slot(int t, uint8_t mask) const { return slots_[t][mask]; }
  int cell_at(int t, uint8_t mask) const { return slots_[t][mask].cell; }
  int edge_at(int t, int i, int j) const {
    return slots_[t][uint8_t((1u << i) | (1u << j))].cell;
  }

  const FacetGlue& facet_glue(int t, int f) const { return glue_[t][f]; }

  /// The ordered walk of top slots around a (d-2)-cell.
  const std::vector<HingeEntry>& hinge_entries(int h) const {
    return hinge_cycles_[h];
  }

  /// Cyclically ordered (top index, combinatorial sign) pairs around a hinge.
  std::vector<std::pair<int, int>> hinge_cycle(CellId hinge) const;

  /// All k-cells whose base labels have exactly this vertex multiset
  /// (copies ignored).
  std::vector<int> cells_with_vertices(int k,
                                       std::vector<int> vertices) const;

  /// Canonical gluing records, one per unordered facet pair.
  std::vector<GlueRecord> glue_records() const;

  long euler_characteristic() const;

  int facet_count() const { return dim_ + 1; }

  /// Positions of facet f (all tuple positions except f), ascending.
  static std::array<int, 4> facet_positions(int d, int f);

  PreComplex() = default;  // empty; populate through build()

 private:
  struct Cell {
    int base_top = -1;
    uint8_t base_mask = 0;
    std::vector<LiftVertex> labels;
    std::vector<std::pair<int, uint8_t>> members;
  };

  static PreComplex build_impl(int dim, int deck_order,
                               std::vector<std::string> names,
                               std::vector<SignedTop> tops,
                               std::vector<GlueRecord> glues,
                               bool explicit_glues, bool infer_signs);
  void compute_cells();
  void compute_hinge_cycles();

  int dim_ = 0;
  int deck_ = 1;
  std::vector<std::string> names_;
  std::vector<SignedTop> tops_;
  std::vector<std::array<FacetGlue, 5>> glue_;
  std::array<std::vector<Cell>, 5> cells_;
  std::vector<std::array<SlotRef, 32>> slots_;
  std::vector<std::vector<HingeEntry>> hinge_cycles_;
};

/// copy arithmetic respecting the deck order (p >= 2: mod p; 0 or 1: plain).
inline int deck_mod(int c, int p) {
  if (p < 2) return c;
  int r = c % p;
  return r < 0 ? r + p : r;
}

}  // namespace pltor
