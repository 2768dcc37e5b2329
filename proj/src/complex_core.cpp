#include "pltor/complex_core.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>

namespace pltor {

namespace {

int perm_sign(std::span<const int8_t> perm, int n) {
  int inv = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (perm[i] > perm[j]) ++inv;
  return (inv % 2 == 0) ? 1 : -1;
}

std::vector<LiftVertex> shifted(std::vector<LiftVertex> labels, int s, int p) {
  for (auto& lv : labels) lv.copy = deck_mod(lv.copy + s, p);
  return labels;
}

/// Union-find over corner slots carrying the deck shift to the class root.
struct ShiftUf {
  std::vector<int> parent;
  std::vector<int> off;  // labels(x) = labels(root x) + off[x]
  int p;

  ShiftUf(int n, int deck) : parent(n), off(n, 0), p(deck) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int norm(int s) const { return deck_mod(s, p); }

  std::pair<int, int> find(int x) {
    int r = x;
    while (parent[r] != r) r = parent[r];
    int acc = 0, cur = x;
    while (parent[cur] != cur) {
      acc += off[cur];
      cur = parent[cur];
    }
    acc = norm(acc);
    cur = x;
    int rem = acc;
    while (parent[cur] != cur) {
      int next = parent[cur], o = off[cur];
      parent[cur] = r;
      off[cur] = norm(rem);
      rem = norm(rem - o);
      cur = next;
    }
    return {r, acc};
  }

  // relation labels(a) = labels(b) + s; false on an inconsistent shift
  // (the deck action would fix a cell, i.e. it is not free).
  bool unite(int a, int b, int s) {
    auto [ra, oa] = find(a);
    auto [rb, ob] = find(b);
    if (ra == rb) return norm(oa - ob - s) == 0;
    parent[ra] = rb;
    off[ra] = norm(ob + s - oa);
    return true;
  }
};

}  // namespace

std::array<int, 4> PreComplex::facet_positions(int d, int f) {
  std::array<int, 4> out{};
  int k = 0;
  for (int i = 0; i <= d; ++i)
    if (i != f) out[k++] = i;
  return out;
}

int PreComplex::vertex_index(const std::string& name) const {
  for (int i = 0; i < static_cast<int>(names_.size()); ++i)
    if (names_[i] == name) return i;
  return -1;
}

PreComplex PreComplex::build(int dim, int deck_order,
                             std::vector<std::string> vertex_names,
                             std::vector<SignedTop> tops, bool infer_signs) {
  return build_impl(dim, deck_order, std::move(vertex_names), std::move(tops),
                    {}, /*explicit_glues=*/false, infer_signs);
}

PreComplex PreComplex::build_glued(int dim, int deck_order,
                                   std::vector<std::string> vertex_names,
                                   std::vector<SignedTop> tops,
                                   std::vector<GlueRecord> glues,
                                   bool infer_signs) {
  return build_impl(dim, deck_order, std::move(vertex_names), std::move(tops),
                    std::move(glues), /*explicit_glues=*/true, infer_signs);
}

PreComplex PreComplex::build_impl(int dim, int deck_order,
                                  std::vector<std::string> names,
                                  std::vector<SignedTop> tops,
                                  std::vector<GlueRecord> glues,
                                  bool explicit_glues, bool infer_signs) {
  if (dim != 3 && dim != 4) fail(ErrorCode::BadParams, "dimension must be 3 or 4");
  if (deck_order < 0) fail(ErrorCode::BadParams, "deck order must be >= 0");
  if (names.empty()) fail(ErrorCode::BadArity, "no vertices");
  if (tops.empty()) fail(ErrorCode::BadArity, "no top simplices");
  {
    std::set<std::string> seen(names.begin(), names.end());
    if (seen.size() != names.size())
      fail(ErrorCode::BadArity, "duplicate vertex name");
  }

  PreComplex c;
  c.dim_ = dim;
  c.deck_ = deck_order;
  c.names_ = std::move(names);
  c.tops_ = std::move(tops);

  const int d = dim;
  const int m = c.vertex_count();
  const int nt = c.top_count();

  for (int t = 0; t < nt; ++t) {
    auto& top = c.tops_[t];
    if (static_cast<int>(top.verts.size()) != d + 1)
      fail(ErrorCode::BadArity, "top simplex needs d+1 vertices");
    for (auto& lv : top.verts) {
      if (lv.v < 0 || lv.v >= m) fail(ErrorCode::BadArity, "vertex out of range");
      if (deck_order == 1 && lv.copy != 0)
        fail(ErrorCode::BadArity, "nonzero copy with trivial deck");
      lv.copy = deck_mod(lv.copy, deck_order);
    }
    std::vector<LiftVertex> sorted = top.verts;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      fail(ErrorCode::BadArity, "repeated cover vertex within a top simplex");
    if (!infer_signs && top.sign != 1 && top.sign != -1)
      fail(ErrorCode::BadArity, "top sign must be +1 or -1");
  }

  const auto facet_labels = [&](int t, int f) {
    std::vector<LiftVertex> out;
    out.reserve(d);
    for (int i = 0; i <= d; ++i)
      if (i != f) out.push_back(c.tops_[t].verts[i]);
    return out;
  };

  c.glue_.assign(nt, {});

  // Install one gluing (both directions) with the label-matching permutation.
  const auto install = [&](int t1, int f1, int t2, int f2, int s) {
    if (t1 == t2 && f1 == f2)
      fail(ErrorCode::NonManifold, "facet glued to itself");
    auto la = facet_labels(t1, f1);
    auto lb = shifted(facet_labels(t2, f2), s, deck_order);
    FacetGlue fa{t2, f2, deck_order >= 2 ? deck_mod(s, deck_order) : s, {}};
    FacetGlue fb{t1, f1, deck_order >= 2 ? deck_mod(-s, deck_order) : -s, {}};
    for (int i = 0; i < d; ++i) {
      int j = -1;
      for (int jj = 0; jj < d; ++jj)
        if (la[i] == lb[jj]) { j = jj; break; }
      if (j < 0) fail(ErrorCode::NonManifold, "glued facets do not match");
      fa.perm[i] = static_cast<int8_t>(j);
      fb.perm[j] = static_cast<int8_t>(i);
    }
    if (c.glue_[t1][f1].top >= 0 || c.glue_[t2][f2].top >= 0)
      fail(ErrorCode::NonManifold, "facet glued more than once");
    c.glue_[t1][f1] = fa;
    c.glue_[t2][f2] = fb;
  };

  if (explicit_glues) {
    for (const auto& g : glues) {
      if (g.top_a < 0 || g.top_a >= nt || g.top_b < 0 || g.top_b >= nt ||
          g.facet_a < 0 || g.facet_a > d || g.facet_b < 0 || g.facet_b > d)
        fail(ErrorCode::BadParams, "glue record out of range");
      install(g.top_a, g.facet_a, g.top_b, g.facet_b, g.shift);
    }
    for (int t = 0; t < nt; ++t)
      for (int f = 0; f <= d; ++f)
        if (c.glue_[t][f].top < 0)
          fail(ErrorCode::NonManifold, "facet without gluing record");
  } else {
    // Match facets by (vertex, copy) multiset up to deck shifts.
    const auto canonical = [&](std::vector<LiftVertex> ls) {
      std::sort(ls.begin(), ls.end());
      if (deck_order == 0) {
        int mn = ls[0].copy;
        for (const auto& lv : ls) mn = std::min(mn, lv.copy);
        for (auto& lv : ls) lv.copy -= mn;
        std::sort(ls.begin(), ls.end());
        return ls;
      }
      if (deck_order >= 2) {
        auto best = ls;
        for (int s = 0; s < deck_order; ++s) {
          auto cand = shifted(ls, s, deck_order);
          std::sort(cand.begin(), cand.end());
          if (s == 0 || cand < best) best = cand;
        }
        return best;
      }
      return ls;
    };

    std::map<std::vector<LiftVertex>, std::vector<std::pair<int, int>>> buckets;
    for (int t = 0; t < nt; ++t)
      for (int f = 0; f <= d; ++f)
        buckets[canonical(facet_labels(t, f))].push_back({t, f});

    for (const auto& [key, members] : buckets) {
      if (members.size() != 2)
        fail(ErrorCode::NonManifold,
             "a (d-1)-cell lies in " + std::to_string(members.size()) +
                 " top slots");
      auto [t1, f1] = members[0];
      auto [t2, f2] = members[1];
      auto la = facet_labels(t1, f1);
      auto lb = facet_labels(t2, f2);
      std::sort(la.begin(), la.end());
      std::sort(lb.begin(), lb.end());
      std::vector<int> shifts;
      if (deck_order >= 2) {
        for (int s = 0; s < deck_order; ++s) {
          auto cand = shifted(lb, s, deck_order);
          std::sort(cand.begin(), cand.end());
          if (la == cand) shifts.push_back(s);
        }
      } else if (deck_order == 0) {
        int s = la[0].copy - lb[0].copy;
        // min copy must align, so only one candidate exists
        int mn_a = la[0].copy, mn_b = lb[0].copy;
        for (auto& lv : la) mn_a = std::min(mn_a, lv.copy);
        for (auto& lv : lb) mn_b = std::min(mn_b, lv.copy);
        s = mn_a - mn_b;
        if (la == shifted(lb, s, 0)) shifts.push_back(s);
      } else {
        if (la == lb) shifts.push_back(0);
      }
      if (shifts.size() != 1)
        fail(ErrorCode::NonManifold,
             "ambiguous facet matching; explicit glue records required");
      install(t1, f1, t2, f2, shifts[0]);
    }
  }

  // Combinatorial orientation: validate, or infer by propagation.
  if (infer_signs) {
    std::vector<int> sign(nt, 0);
    for (int t = 0; t < nt; ++t)
      if (c.tops_[t].sign == 1 || c.tops_[t].sign == -1)
        sign[t] = c.tops_[t].sign;
    std::vector<int> stack;
    for (int t0 = 0; t0 < nt; ++t0) {
      if (sign[t0] == 0) {
        bool any_known = false;
        for (int t = 0; t < nt && !any_known; ++t) any_known = sign[t] != 0;
        if (!any_known) sign[t0] = 1;
      }
    }
    for (int t = 0; t < nt; ++t)
      if (sign[t] != 0) stack.push_back(t);
    if (stack.empty()) { sign[0] = 1; stack.push_back(0); }
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      for (int f = 0; f <= d; ++f) {
        const auto& g = c.glue_[t][f];
        int ps = perm_sign(std::span<const int8_t>(g.perm.data(), d), d);
        int want = -sign[t] * ps * (((f + g.facet) % 2 == 0) ? 1 : -1);
        if (sign[g.top] == 0) {
          sign[g.top] = want;
          stack.push_back(g.top);
        } else if (sign[g.top] != want) {
          fail(ErrorCode::OrientationClash,
               "no consistent orientation extends the given signs");
        }
      }
    }
    for (int t = 0; t < nt; ++t) {
      if (sign[t] == 0)
        fail(ErrorCode::OrientationClash, "orientation not propagated");
      c.tops_[t].sign = sign[t];
    }
  }
  for (int t = 0; t < nt; ++t) {
    for (int f = 0; f <= d; ++f) {
      const auto& g = c.glue_[t][f];
      int ps = perm_sign(std::span<const int8_t>(g.perm.data(), d), d);
      int lhs = ps * (((f + g.facet) % 2 == 0) ? 1 : -1) * c.tops_[t].sign *
                c.tops_[g.top].sign;
      if (lhs != -1)
        fail(ErrorCode::OrientationClash,
             "cofaces induce equal orientations on a shared (d-1)-cell");
    }
  }

  c.compute_cells();
  c.compute_hinge_cycles();
  return c;
}

void PreComplex::compute_cells() {
  const int d = dim_;
  const int nt = top_count();
  const int nodes = nt * 32;
  ShiftUf uf(nodes, deck_);
  const auto node = [](int t, uint8_t mask) { return t * 32 + mask; };

  // Merge corner slots through each facet gluing (each gluing seen once).
  for (int t = 0; t < nt; ++t) {
    for (int f = 0; f <= d; ++f) {
      const auto& g = glue_[t][f];
      if (std::pair(t, f) > std::pair(g.top, g.facet)) continue;
      auto fp_a = facet_positions(d, f);
      auto fp_b = facet_positions(d, g.facet);
      for (uint8_t sub = 1; sub < (1u << d); ++sub) {
        uint8_t mask_a = 0, mask_b = 0;
        for (int i = 0; i < d; ++i) {
          if (sub & (1u << i)) {
            mask_a |= uint8_t(1u << fp_a[i]);
            mask_b |= uint8_t(1u << fp_b[g.perm[i]]);
          }
        }
        if (!uf.unite(node(t, mask_a), node(g.top, mask_b), g.shift))
          fail(ErrorCode::NonManifold,
               "deck action fixes a cell (cover orbits are not free)");
      }
    }
  }

  slots_.assign(nt, {});
  for (auto& arr : cells_) arr.clear();

  const uint8_t full = static_cast<uint8_t>((1u << (d + 1)) - 1);
  std::map<int, int> root_to_cell[5];
  for (int t = 0; t < nt; ++t) {
    for (uint8_t mask = 1; mask <= full; ++mask) {
      int pc = std::popcount(static_cast<unsigned>(mask));
      if (pc > d + 1) continue;
      int k = pc - 1;
      if (k == d) {
        if (mask != full) continue;
        Cell cell;
        cell.base_top = t;
        cell.base_mask = full;
        cell.labels = tops_[t].verts;
        cell.members = {{t, full}};
        slots_[t][full] = SlotRef{static_cast<int>(cells_[d].size()), 0};
        cells_[d].push_back(std::move(cell));
        continue;
      }
      if ((mask & full) != mask) continue;
      auto [root, off] = uf.find(node(t, mask));
      auto it = root_to_cell[k].find(root);
      if (it == root_to_cell[k].end()) {
        // first slot encountered becomes the base lift of the cell
        Cell cell;
        cell.base_top = t;
        cell.base_mask = mask;
        for (int i = 0; i <= d; ++i)
          if (mask & (1u << i)) cell.labels.push_back(tops_[t].verts[i]);
        int id = static_cast<int>(cells_[k].size());
        root_to_cell[k].emplace(root, id);
        // remember the base offset via slot shift arithmetic below
        cells_[k].push_back(std::move(cell));
        it = root_to_cell[k].find(root);
      }
      int cell_id = it->second;
      const Cell& base = cells_[k][cell_id];
      auto [base_root, base_off] = uf.find(node(base.base_top, base.base_mask));
      (void)base_root;
      int shift = deck_mod(off - base_off, deck_);
      slots_[t][mask] = SlotRef{cell_id, shift};
      cells_[k][cell_id].members.push_back({t, mask});
    }
  }

  // Every vertex name must denote exactly one 0-cell; otherwise the cover
  // is disconnected or the orbit structure is broken.
  if (cell_count(0) != vertex_count())
    fail(ErrorCode::NonManifold,
         "vertex names and 0-cells disagree (cover disconnected?)");
}

void PreComplex::compute_hinge_cycles() {
  const int d = dim_;
  const int nh = cell_count(d - 2);
  hinge_cycles_.assign(nh, {});
  long slot_bound = 0;
  for (int t = 0; t < top_count(); ++t) slot_bound += (d + 1) * d / 2;

  for (int h = 0; h < nh; ++h) {
    const Cell& cell = cells_[d - 2][h];
    int t = cell.base_top;
    uint8_t hm = cell.base_mask;
    int shift = 0;
    // the two positions of the base top not in the hinge
    int exit = -1;
    for (int i = 0; i <= d; ++i)
      if (!(hm & (1u << i))) { exit = i; break; }

    std::vector<HingeEntry>& cyc = hinge_cycles_[h];
    long guard = 0;
    while (true) {
      if (++guard > slot_bound + 1)
        fail(ErrorCode::OpenLink, "hinge walk does not close");
      cyc.push_back(HingeEntry{t, hm, shift});
      const FacetGlue& g = glue_[t][exit];
      auto fp_a = facet_positions(d, exit);
      auto fp_b = facet_positions(d, g.facet);
      uint8_t hm2 = 0;
      for (int i = 0; i < d; ++i)
        if (hm & (1u << fp_a[i])) hm2 |= uint8_t(1u << fp_b[g.perm[i]]);
      shift = deck_mod(shift + g.shift, deck_);
      int entry_facet = g.facet;
      int next_exit = -1;
      for (int i = 0; i <= d; ++i)
        if (!(hm2 & (1u << i)) && i != entry_facet) { next_exit = i; break; }
      t = g.top;
      hm = hm2;
      exit = next_exit;
      if (t == cell.base_top && hm == cell.base_mask &&
          deck_mod(shift, deck_) == 0)
        break;
    }
    if (cyc.size() != cell.members.size())
      fail(ErrorCode::OpenLink,
           "hinge link is not a single closed cycle");
    // each entry sits at the expected lift of the hinge
    for (const auto& e : cyc) {
      const SlotRef sr = slots_[e.top][e.hinge_mask];
      if (sr.cell != h || deck_mod(e.shift + sr.shift, deck_) != 0)
        fail(ErrorCode::OpenLink, "hinge walk left the hinge orbit");
    }
  }
}

std::vector<std::pair<int, int>> PreComplex::hinge_cycle(CellId hinge) const {
  if (hinge.dim != dim_ - 2 || hinge.index < 0 ||
      hinge.index >= cell_count(dim_ - 2))
    fail(ErrorCode::BadParams, "not a hinge cell");
  std::vector<std::pair<int, int>> out;
  for (const auto& e : hinge_cycles_[hinge.index])
    out.push_back({e.top, tops_[e.top].sign});
  return out;
}

std::vector<int> PreComplex::cells_with_vertices(
    int k, std::vector<int> vertices) const {
  std::sort(vertices.begin(), vertices.end());
  std::vector<int> out;
  for (int cidx = 0; cidx < cell_count(k); ++cidx) {
    std::vector<int> vs;
    for (const auto& lv : cells_[k][cidx].labels) vs.push_back(lv.v);
    std::sort(vs.begin(), vs.end());
    if (vs == vertices) out.push_back(cidx);
  }
  return out;
}

std::vector<GlueRecord> PreComplex::glue_records() const {
  std::vector<GlueRecord> out;
  for (int t = 0; t < top_count(); ++t) {
    for (int f = 0; f <= dim_; ++f) {
      const auto& g = glue_[t][f];
      if (std::pair(t, f) > std::pair(g.top, g.facet)) continue;
      out.push_back(GlueRecord{t, f, g.top, g.facet, g.shift});
    }
  }
  return out;
}

long PreComplex::euler_characteristic() const {
  long chi = 0;
  for (int k = 0; k <= dim_; ++k)
    chi += (k % 2 == 0 ? 1 : -1) * static_cast<long>(cell_count(k));
  return chi;
}

}  // namespace pltor
