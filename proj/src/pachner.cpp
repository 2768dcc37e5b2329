#include "pltor/pachner.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace pltor {

namespace {

using Labels = std::vector<LiftVertex>;

Labels member_labels(const PreComplex& c, std::pair<int, int> mem) {
  Labels out = c.top(mem.first).verts;
  for (auto& lv : out) lv.copy = deck_mod(lv.copy + mem.second, c.deck_order());
  return out;
}

Labels facet_of(const Labels& ls, int omit) {
  Labels out;
  for (int i = 0; i < static_cast<int>(ls.size()); ++i)
    if (i != omit) out.push_back(ls[i]);
  return out;
}

Labels sorted(Labels ls) {
  std::sort(ls.begin(), ls.end());
  return ls;
}

bool all_distinct(Labels ls) {
  std::sort(ls.begin(), ls.end());
  return std::adjacent_find(ls.begin(), ls.end()) == ls.end();
}

bool distinct_tops(const std::vector<std::pair<int, int>>& cluster) {
  std::set<int> seen;
  for (auto [t, s] : cluster)
    if (!seen.insert(t).second) return false;
  return true;
}

// outer labels of a star-shaped cluster around a cell; each member
// contributes its labels outside the cell, counted with multiplicity
std::map<LiftVertex, int> outer_counts(const std::vector<Labels>& mls,
                                       const std::vector<uint8_t>& masks,
                                       int d) {
  std::map<LiftVertex, int> cnt;
  for (size_t i = 0; i < mls.size(); ++i)
    for (int p = 0; p <= d; ++p)
      if (!(masks[i] & (1u << p))) ++cnt[mls[i][p]];
  return cnt;
}

}  // namespace

const char* to_string(MoveKind k) {
  switch (k) {
    case MoveKind::M23: return "2-3";
    case MoveKind::M32: return "3-2";
    case MoveKind::M14: return "1-4";
    case MoveKind::M41: return "4-1";
    case MoveKind::M33: return "3-3";
    case MoveKind::M24: return "2-4";
    case MoveKind::M42: return "4-2";
  }
  return "?";
}

std::optional<MoveKind> parse_move_kind(const std::string& token) {
  if (token == "2-3") return MoveKind::M23;
  if (token == "3-2") return MoveKind::M32;
  if (token == "1-4") return MoveKind::M14;
  if (token == "4-1") return MoveKind::M41;
  if (token == "3-3") return MoveKind::M33;
  if (token == "2-4") return MoveKind::M24;
  if (token == "4-2") return MoveKind::M42;
  return std::nullopt;
}

int move_dim(MoveKind k) {
  switch (k) {
    case MoveKind::M23:
    case MoveKind::M32:
    case MoveKind::M14:
    case MoveKind::M41:
      return 3;
    default:
      return 4;
  }
}

std::vector<Site> find_sites(const PreComplex& c, MoveKind kind) {
  std::vector<Site> sites;
  const int d = c.dim();
  if (move_dim(kind) != d) return sites;

  const auto facet_pair_sites = [&](MoveKind mk) {
    for (const auto& rec : c.glue_records()) {
      if (rec.top_a == rec.top_b) continue;
      Site s;
      s.kind = mk;
      // facet_a of (top_a, n) meets facet_b of (top_b, n + shift), so with
      // the first member at lift 0 the partner lift is the record's shift
      s.cluster = {{rec.top_a, 0},
                   {rec.top_b, deck_mod(rec.shift, c.deck_order())}};
      s.anchor_top = rec.top_a;
      s.anchor_facet = rec.facet_a;
      Labels l1 = member_labels(c, s.cluster[0]);
      Labels l2 = member_labels(c, s.cluster[1]);
      Labels all = l1;
      all.push_back(l2[rec.facet_b]);
      if (!all_distinct(all)) continue;
      sites.push_back(std::move(s));
    }
  };

  const auto star_sites = [&](MoveKind mk, int cell_dim, size_t star_size,
                              int outer_distinct, int outer_mult) {
    for (int cell = 0; cell < c.cell_count(cell_dim); ++cell) {
      if (c.cofaces(cell_dim, cell).size() != star_size) continue;
      Site s;
      s.kind = mk;
      s.anchor_cell = CellId{cell_dim, cell};
      std::vector<Labels> mls;
      std::vector<uint8_t> masks;
      bool ok = true;
      if (cell_dim == d - 2) {
        for (const auto& e : c.hinge_entries(cell)) {
          s.cluster.push_back({e.top, e.shift});
          mls.push_back(member_labels(c, s.cluster.back()));
          masks.push_back(e.hinge_mask);
        }
      } else {
        for (auto [t, mask] : c.cofaces(cell_dim, cell)) {
          int shift = deck_mod(-c.slot(t, mask).shift, c.deck_order());
          s.cluster.push_back({t, shift});
          mls.push_back(member_labels(c, s.cluster.back()));
          masks.push_back(mask);
        }
      }
      if (s.cluster.size() != star_size || !distinct_tops(s.cluster)) continue;
      auto cnt = outer_counts(mls, masks, d);
      if (static_cast<int>(cnt.size()) != outer_distinct) continue;
      for (const auto& [lv, n] : cnt)
        if (n != outer_mult) ok = false;
      // outer labels must avoid the cell's own labels
      Labels cell_ls(c.cell_labels(cell_dim, cell).begin(),
                     c.cell_labels(cell_dim, cell).end());
      for (const auto& lv : cell_ls)
        if (cnt.count(lv)) ok = false;
      if (!ok) continue;
      sites.push_back(std::move(s));
    }
  };

  switch (kind) {
    case MoveKind::M23:
    case MoveKind::M24:
      facet_pair_sites(kind);
      break;
    case MoveKind::M14:
      for (int t = 0; t < c.top_count(); ++t) {
        Site s;
        s.kind = kind;
        s.cluster = {{t, 0}};
        sites.push_back(std::move(s));
      }
      break;
    case MoveKind::M32:
      star_sites(kind, 1, 3, 3, 2);
      break;
    case MoveKind::M33:
      star_sites(kind, 2, 3, 3, 2);
      break;
    case MoveKind::M41:
      star_sites(kind, 0, 4, 4, 3);
      break;
    case MoveKind::M42:
      star_sites(kind, 1, 4, 4, 3);
      break;
  }
  return sites;
}

namespace {

// Replacement tuples in the cluster frame (vertex index c.vertex_count()
// denotes a newly created vertex).
std::vector<Labels> replacement_tuples(const PreComplex& c, const Site& site) {
  const int d = c.dim();
  std::vector<Labels> out;

  const auto ordered_outer = [&](const std::vector<Labels>& mls,
                                 const std::vector<uint8_t>& masks) {
    Labels outer;
    for (size_t i = 0; i < mls.size(); ++i)
      for (int p = 0; p <= d; ++p)
        if (!(masks[i] & (1u << p)) &&
            std::find(outer.begin(), outer.end(), mls[i][p]) == outer.end())
          outer.push_back(mls[i][p]);
    return outer;
  };

  switch (site.kind) {
    case MoveKind::M23:
    case MoveKind::M24: {
      Labels l1 = member_labels(c, site.cluster[0]);
      Labels l2 = member_labels(c, site.cluster[1]);
      const auto& g = c.facet_glue(site.anchor_top, site.anchor_facet);
      LiftVertex P = l1[site.anchor_facet];
      LiftVertex Q = l2[g.facet];
      Labels shared = facet_of(l1, site.anchor_facet);
      for (int omit = 0; omit < d; ++omit) {
        Labels top = {P, Q};
        for (int i = 0; i < d; ++i)
          if (i != omit) top.push_back(shared[i]);
        out.push_back(std::move(top));
      }
      break;
    }
    case MoveKind::M32:
    case MoveKind::M42: {
      std::vector<Labels> mls;
      std::vector<uint8_t> masks;
      for (size_t i = 0; i < site.cluster.size(); ++i) {
        mls.push_back(member_labels(c, site.cluster[i]));
        if (site.kind == MoveKind::M32) {
          masks.push_back(c.hinge_entries(site.anchor_cell.index)[i].hinge_mask);
        } else {
          auto [t, mask] = c.cofaces(1, site.anchor_cell.index)[i];
          masks.push_back(mask);
        }
      }
      auto ls = c.cell_labels(1, site.anchor_cell.index);
      Labels outer = ordered_outer(mls, masks);
      for (int apex = 0; apex < 2; ++apex) {
        Labels top = {ls[apex]};
        top.insert(top.end(), outer.begin(), outer.end());
        out.push_back(std::move(top));
      }
      break;
    }
    case MoveKind::M33: {
      std::vector<Labels> mls;
      std::vector<uint8_t> masks;
      for (size_t i = 0; i < site.cluster.size(); ++i) {
        mls.push_back(member_labels(c, site.cluster[i]));
        masks.push_back(c.hinge_entries(site.anchor_cell.index)[i].hinge_mask);
      }
      auto f = c.cell_labels(2, site.anchor_cell.index);
      Labels outer = ordered_outer(mls, masks);  // {A, B, C}
      for (int i = 0; i < 3; ++i) {
        Labels top(outer.begin(), outer.end());
        top.push_back(f[i]);
        top.push_back(f[(i + 1) % 3]);
        out.push_back(std::move(top));
      }
      break;
    }
    case MoveKind::M14: {
      Labels l = member_labels(c, site.cluster[0]);
      const LiftVertex nv{c.vertex_count(), 0};
      for (int pos = 0; pos <= d; ++pos) {
        Labels top = l;
        top[pos] = nv;
        out.push_back(std::move(top));
      }
      break;
    }
    case MoveKind::M41: {
      std::vector<Labels> mls;
      std::vector<uint8_t> masks;
      for (size_t i = 0; i < site.cluster.size(); ++i) {
        mls.push_back(member_labels(c, site.cluster[i]));
        auto [t, mask] = c.cofaces(0, site.anchor_cell.index)[i];
        masks.push_back(mask);
      }
      out.push_back(ordered_outer(mls, masks));
      break;
    }
  }
  return out;
}

struct RewriteResult {
  PreComplex complex;
  std::vector<int> top_map;     // old top -> new top (-1 removed)
  std::vector<int> vertex_map;  // old vertex -> new vertex (-1 removed)
  int first_added = -1;         // index of the first replacement top
  int new_vertex = -1;          // new vertex index, if any
};

RewriteResult rewrite_complex(const PreComplex& c, const Site& site,
                              const std::vector<Labels>& added) {
  const int d = c.dim();
  const int p = c.deck_order();

  std::set<int> removed;
  for (auto [t, s] : site.cluster) removed.insert(t);

  // vertex bookkeeping
  int removed_vertex = -1;
  if (site.kind == MoveKind::M41)
    removed_vertex = c.cell_labels(0, site.anchor_cell.index)[0].v;
  bool adds_vertex = site.kind == MoveKind::M14;

  std::vector<std::string> names;
  std::vector<int> vertex_map(c.vertex_count() + 1, -1);
  for (int v = 0; v < c.vertex_count(); ++v) {
    if (v == removed_vertex) continue;
    vertex_map[v] = static_cast<int>(names.size());
    names.push_back(c.vertex_names()[v]);
  }
  int new_vertex = -1;
  if (adds_vertex) {
    std::string nm;
    for (int i = 0;; ++i) {
      nm = "w" + std::to_string(i);
      bool used = false;
      for (const auto& n : names) used |= (n == nm);
      if (!used) break;
    }
    new_vertex = static_cast<int>(names.size());
    vertex_map[c.vertex_count()] = new_vertex;
    names.push_back(nm);
  }

  // top list: kept in order, then replacements
  std::vector<PreComplex::SignedTop> tops;
  std::vector<int> top_map(c.top_count(), -1);
  for (int t = 0; t < c.top_count(); ++t) {
    if (removed.count(t)) continue;
    top_map[t] = static_cast<int>(tops.size());
    PreComplex::SignedTop st = c.top(t);
    for (auto& lv : st.verts) lv.v = vertex_map[lv.v];
    tops.push_back(std::move(st));
  }
  const int first_added = static_cast<int>(tops.size());
  for (const auto& tup : added) {
    PreComplex::SignedTop st;
    st.verts = tup;
    for (auto& lv : st.verts) lv.v = vertex_map[lv.v];
    st.sign = 0;  // inferred
    tops.push_back(std::move(st));
  }

  // gluing records
  std::vector<GlueRecord> records;
  for (const auto& rec : c.glue_records()) {
    if (removed.count(rec.top_a) || removed.count(rec.top_b)) continue;
    records.push_back(GlueRecord{top_map[rec.top_a], rec.facet_a,
                                 top_map[rec.top_b], rec.facet_b, rec.shift});
  }

  struct Boundary {
    Labels key;          // sorted facet labels in the cluster frame
    int member_top, member_facet;
    int partner_top, partner_facet, partner_shift;
    bool partner_removed;
    int partner_member_shift = 0;  // cluster shift of the partner top when removed
    int assigned_top = -1, assigned_facet = -1;  // replacement side
  };
  std::vector<Boundary> boundary;
  std::map<Labels, int> boundary_by_key;
  std::map<int, int> member_shift;  // quotient top -> cluster shift
  for (auto [t, s] : site.cluster) member_shift[t] = s;

  for (auto [mt, ms] : site.cluster) {
    Labels ml = member_labels(c, {mt, ms});
    for (int f = 0; f <= d; ++f) {
      const auto& g = c.facet_glue(mt, f);
      const int pshift = deck_mod(ms + g.shift, p);
      const bool partner_in_cluster =
          removed.count(g.top) && member_shift[g.top] == pshift;
      if (partner_in_cluster) continue;
      Boundary b;
      b.key = sorted(facet_of(ml, f));
      b.member_top = mt;
      b.member_facet = f;
      b.partner_top = g.top;
      b.partner_facet = g.facet;
      b.partner_shift = pshift;
      b.partner_removed = removed.count(g.top) > 0;
      if (b.partner_removed) b.partner_member_shift = member_shift[g.top];
      if (boundary_by_key.count(b.key))
        fail(ErrorCode::DegenerateSite, "cluster boundary faces collide");
      boundary_by_key[b.key] = static_cast<int>(boundary.size());
      boundary.push_back(std::move(b));
    }
  }

  // replacement facets: attach to the boundary or pair up internally
  std::map<Labels, std::vector<std::pair<int, int>>> internal;
  for (size_t u = 0; u < added.size(); ++u) {
    const int new_idx = first_added + static_cast<int>(u);
    for (int f = 0; f <= d; ++f) {
      Labels key = sorted(facet_of(added[u], f));
      auto it = boundary_by_key.find(key);
      if (it != boundary_by_key.end()) {
        Boundary& b = boundary[it->second];
        if (b.assigned_top >= 0)
          fail(ErrorCode::DegenerateSite, "boundary facet matched twice");
        b.assigned_top = new_idx;
        b.assigned_facet = f;
      } else {
        internal[key].push_back({new_idx, f});
      }
    }
  }
  for (const auto& b : boundary)
    if (b.assigned_top < 0)
      fail(ErrorCode::DegenerateSite,
           "replacement cluster does not close the boundary");
  for (const auto& [key, slots] : internal) {
    if (slots.size() != 2)
      fail(ErrorCode::DegenerateSite, "replacement interior does not pair up");
    records.push_back(GlueRecord{slots[0].first, slots[0].second,
                                 slots[1].first, slots[1].second, 0});
  }
  for (size_t bi = 0; bi < boundary.size(); ++bi) {
    const Boundary& b = boundary[bi];
    if (!b.partner_removed) {
      records.push_back(GlueRecord{b.assigned_top, b.assigned_facet,
                                   top_map[b.partner_top], b.partner_facet,
                                   b.partner_shift});
      continue;
    }
    // cross-copy pairing: the partner facet is itself a cluster boundary
    // facet, seen at its own member lift
    if (std::pair(b.member_top, b.member_facet) >
        std::pair(b.partner_top, b.partner_facet))
      continue;  // handle each unordered pair once
    // locate the partner boundary record
    int pj = -1;
    for (size_t j = 0; j < boundary.size(); ++j)
      if (boundary[j].member_top == b.partner_top &&
          boundary[j].member_facet == b.partner_facet)
        pj = static_cast<int>(j);
    if (pj < 0)
      fail(ErrorCode::DegenerateSite, "cross-copy partner facet missing");
    const Boundary& b2 = boundary[pj];
    const int delta = deck_mod(b.partner_shift - b.partner_member_shift, p);
    records.push_back(GlueRecord{b.assigned_top, b.assigned_facet,
                                 b2.assigned_top, b2.assigned_facet, delta});
  }

  RewriteResult out;
  out.complex = PreComplex::build_glued(d, p, std::move(names),
                                        std::move(tops), std::move(records),
                                        /*infer_signs=*/true);
  out.top_map = std::move(top_map);
  out.vertex_map = std::move(vertex_map);
  out.first_added = first_added;
  out.new_vertex = new_vertex;
  return out;
}

// greedy full-pivot choice of row/column subsets with nondegenerate minor
std::pair<std::vector<int>, std::vector<int>> full_pivot_sets(
    const Eigen::MatrixXd& M, const std::vector<int>& row_cands,
    const std::vector<int>& col_cands, double rel_tol) {
  Eigen::MatrixXd S = M;
  std::vector<int> rows = row_cands, cols = col_cands;
  std::vector<int> rsel, csel;
  const double scale = max_abs(M);
  while (!rows.empty() && !cols.empty()) {
    double best = 0;
    int bi = -1, bj = -1;
    for (int i : rows)
      for (int j : cols)
        if (std::abs(S(i, j)) > best) { best = std::abs(S(i, j)); bi = i; bj = j; }
    if (best <= rel_tol * scale) break;
    rsel.push_back(bi);
    csel.push_back(bj);
    rows.erase(std::find(rows.begin(), rows.end(), bi));
    cols.erase(std::find(cols.begin(), cols.end(), bj));
    for (int i : rows)
      for (int j : cols) S(i, j) -= S(i, bj) * S(bi, j) / S(bi, bj);
  }
  std::sort(rsel.begin(), rsel.end());
  std::sort(csel.begin(), csel.end());
  return {rsel, csel};
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& M, const std::vector<int>& r,
                          const std::vector<int>& cc) {
  Eigen::MatrixXd out(r.size(), cc.size());
  for (size_t i = 0; i < r.size(); ++i)
    for (size_t j = 0; j < cc.size(); ++j) out(i, j) = M(r[i], cc[j]);
  return out;
}

}  // namespace

double deviation_form_factor(const PreComplex& c, const CoverPlacement& pl,
                             int edge_cell) {
  if (c.dim() != 4)
    fail(ErrorCode::BadParams, "deviation factors live on 4-complexes");
  const auto& star = c.cofaces(1, edge_cell);
  if (star.size() != 4)
    fail(ErrorCode::WrongLink, "edge is not in exactly four 4-simplices");
  // the four faces at the edge
  std::vector<int> faces;
  std::vector<int> face_top;  // a top containing the face
  for (auto [t, mask] : star) {
    for (int q = 0; q <= 4; ++q) {
      if (mask & (1u << q)) continue;
      const int fc = c.cell_at(t, uint8_t(mask | (1u << q)));
      if (std::find(faces.begin(), faces.end(), fc) == faces.end()) {
        faces.push_back(fc);
        face_top.push_back(t);
      }
    }
  }
  if (faces.size() != 4)
    fail(ErrorCode::WrongLink, "edge star has the wrong face pattern");

  DeviationBasis basis = DeviationBasis::standard(c, pl);
  const std::array<int, 3> jf = {faces[0], faces[1], faces[2]};
  Eigen::Matrix3d J = squared_area_block(c, pl, basis, edge_cell, jf);

  // volume of the simplex omitting the fourth face
  int vol_top = -1;
  for (auto [t, mask] : star) {
    bool has_f3 = false;
    for (int q = 0; q <= 4; ++q) {
      if (mask & (1u << q)) continue;
      if (c.cell_at(t, uint8_t(mask | (1u << q))) == faces[3]) has_f3 = true;
    }
    if (!has_f3) vol_top = t;
  }
  if (vol_top < 0)
    fail(ErrorCode::WrongLink, "edge star has no simplex opposite the face");
  const double V = std::abs(signed_volume(top_coords(c, pl, vol_top)));
  return 3.0 * std::abs(J.determinant()) / V;
}

MoveResult apply_move(const PreComplex& c, const CoverPlacement& pl,
                      const Representation& rep, const Site& site,
                      uint64_t seed) {
  const int d = c.dim();
  std::vector<Labels> added = replacement_tuples(c, site);
  RewriteResult rw = rewrite_complex(c, site, added);
  PreComplex& nc = rw.complex;

  // carry the placement over
  CoverPlacement npl;
  npl.dim = d;
  npl.rep = pl.rep;
  npl.lifts.assign(nc.vertex_count(), {});
  for (int v = 0; v < c.vertex_count(); ++v)
    if (rw.vertex_map[v] >= 0) npl.lifts[rw.vertex_map[v]] = pl.lifts[v];

  SplitRng rng(seed);
  if (rw.new_vertex >= 0) {
    // sample inside the replaced simplex image, shrunk toward the barycenter
    Labels l = member_labels(c, site.cluster[0]);
    Eigen::MatrixXd X(d + 1, d);
    for (int i = 0; i <= d; ++i)
      X.row(i) = pl.coord(l[i].v, l[i].copy).transpose();
    bool placed = false;
    for (int attempt = 0; attempt < 100 && !placed; ++attempt) {
      Eigen::VectorXd lam(d + 1);
      for (int i = 0; i <= d; ++i)
        lam(i) = -std::log(std::max(rng.next_double(), 1e-300));
      lam /= lam.sum();
      lam = 0.8 * lam + Eigen::VectorXd::Constant(d + 1, 0.2 / (d + 1));
      Eigen::VectorXd pt = X.transpose() * lam;

      std::set<int> copies{0};
      for (int t = rw.first_added; t < nc.top_count(); ++t)
        for (const auto& lv : nc.top(t).verts)
          if (lv.v == rw.new_vertex) copies.insert(lv.copy);
      npl.lifts[rw.new_vertex].clear();
      if (rep.kind == Representation::Kind::SingleAxisCyclic) {
        for (int cp = 0; cp < rep.p; ++cp)
          npl.lifts[rw.new_vertex][cp] = rep.apply(cp, pt);
      } else {
        for (int cp : copies)
          npl.lifts[rw.new_vertex][cp] = rep.apply(cp, pt);
      }
      placed = true;
      for (int t = rw.first_added; t < nc.top_count() && placed; ++t)
        if (simplex_degenerate(top_sqdist(nc, npl, t))) placed = false;
    }
    if (!placed)
      fail(ErrorCode::ResampleExhausted, "new vertex placement kept degenerating");
  } else {
    for (int t = rw.first_added; t < nc.top_count(); ++t)
      if (simplex_degenerate(top_sqdist(nc, npl, t)))
        fail(ErrorCode::DegenerateSite, "replacement simplex is degenerate");
  }

  MoveResult res;
  res.report.kind = site.kind;
  if (rw.new_vertex >= 0)
    res.report.new_vertex = nc.vertex_names()[rw.new_vertex];

  // factor data across a 2->4 move
  if (site.kind == MoveKind::M24) {
    MetricData mb = read_metric(c, pl);
    Eigen::MatrixXd Qb = assemble_Q4(c, mb);
    // pivot candidates: cells with at least one slot in a kept top
    std::set<int> removed;
    for (auto [t, s] : site.cluster) removed.insert(t);
    const auto kept_cells = [&](int k) {
      std::vector<int> out;
      for (int cell = 0; cell < c.cell_count(k); ++cell)
        for (auto [t, mask] : c.cofaces(k, cell))
          if (!removed.count(t)) { out.push_back(cell); break; }
      return out;
    };
    auto [rows, cols] = full_pivot_sets(Qb, kept_cells(2), kept_cells(1), 1e-8);
    res.report.pivot_faces = rows;
    res.report.pivot_edges = cols;
    res.report.det_before = logdet(submatrix(Qb, rows, cols));

    MetricData mn = read_metric(nc, npl);
    Eigen::MatrixXd Qa = assemble_Q4(nc, mn);
    // map the pivot cells into the new complex through kept slots
    const auto map_cell = [&](int k, int cell) {
      for (auto [t, mask] : c.cofaces(k, cell))
        if (!removed.count(t)) return nc.cell_at(rw.top_map[t], mask);
      fail(ErrorCode::DegenerateSite, "pivot cell lost by the move");
    };
    // new edge and new faces: the replacement tops start (P, Q, ...)
    const int u0 = rw.first_added;
    res.report.new_edge = nc.edge_at(u0, 0, 1);
    for (int u = u0; u < nc.top_count(); ++u)
      for (int q = 2; q <= 4; ++q) {
        const int fc = nc.cell_at(u, uint8_t(0b11u | (1u << q)));
        if (std::find(res.report.new_faces.begin(), res.report.new_faces.end(),
                      fc) == res.report.new_faces.end())
          res.report.new_faces.push_back(fc);
      }

    // the shared tetrahedron labels (C, D, E, F): facet of the first member
    Labels l1 = member_labels(c, site.cluster[0]);
    Labels shared = facet_of(l1, site.anchor_facet);
    Labels l2 = member_labels(c, site.cluster[1]);
    const LiftVertex P = l1[site.anchor_facet];
    const LiftVertex Q =
        l2[c.facet_glue(site.anchor_top, site.anchor_facet).facet];

    // the face playing the F role contains the last shared label
    const LiftVertex F = shared[d - 1];
    int f_face = -1;
    for (int fc : res.report.new_faces) {
      auto ls = nc.cell_labels(2, fc);
      for (const auto& lv : ls) {
        LiftVertex mapped{rw.vertex_map[F.v], F.copy};
        if (lv == mapped) f_face = fc;
      }
    }
    if (f_face < 0) fail(ErrorCode::DegenerateSite, "new-face labeling failed");

    std::vector<int> rows_a, cols_a;
    for (int r : rows) rows_a.push_back(map_cell(2, r));
    for (int cc : cols) cols_a.push_back(map_cell(1, cc));
    rows_a.push_back(f_face);
    cols_a.push_back(res.report.new_edge);
    res.report.det_after = logdet(submatrix(Qa, rows_a, cols_a));
    if (res.report.det_before.sign != 0 && res.report.det_after.sign != 0)
      res.report.measured_ratio = std::exp(res.report.det_after.log_abs -
                                           res.report.det_before.log_abs);

    // closed-form prediction from the six cluster points
    const auto pt = [&](const LiftVertex& lv) {
      return pl.coord(lv.v, lv.copy).transpose();
    };
    Eigen::MatrixXd six(6, 4);
    six.row(0) = pt(P);
    six.row(1) = pt(Q);
    for (int i = 0; i < 4; ++i) six.row(2 + i) = pt(shared[i]);
    const auto vol_omitting = [&](int omit) {
      Eigen::MatrixXd five(5, 4);
      int r = 0;
      for (int i = 0; i < 6; ++i)
        if (i != omit) five.row(r++) = six.row(i);
      return std::abs(signed_volume(five));
    };
    // S of the face (P, Q, F): F sits at six row 5
    Eigen::VectorXd e1 = (six.row(1) - six.row(0)).transpose();
    Eigen::VectorXd e2 = (six.row(5) - six.row(0)).transpose();
    const double s_abf =
        0.5 * std::sqrt(e1.squaredNorm() * e2.squaredNorm() -
                        e1.dot(e2) * e1.dot(e2));
    res.report.predicted_factor = s_abf / 24.0 * vol_omitting(0) *
                                  vol_omitting(1) /
                                  (vol_omitting(2) * vol_omitting(3) *
                                   vol_omitting(4));
    res.report.analytic_entry = Qa(f_face, res.report.new_edge);

    res.report.deviation_factor =
        pltor::deviation_form_factor(nc, npl, res.report.new_edge);
    {
      auto ls = nc.cell_labels(1, res.report.new_edge);
      const double L = (npl.coord(ls[0].v, ls[0].copy) -
                        npl.coord(ls[1].v, ls[1].copy))
                           .squaredNorm();
      res.report.deviation_predicted = 72.0 * std::pow(L, 2.5);
    }
  }

  res.metric = read_metric(nc, npl);
  {
    CurvatureVector w = deficit_angles(nc, npl);
    if (w.size() > 0 && w.cwiseAbs().maxCoeff() > 1e-9)
      fail(ErrorCode::CurvedInput, "move broke the zero-curvature state");
  }
  res.complex = std::move(nc);
  res.placement = std::move(npl);
  return res;
}

std::vector<TorsionReport> move_experiment(PreComplex& c, CoverPlacement& pl,
                                           const Representation& rep,
                                           const std::vector<MoveKind>& kinds,
                                           int n, uint64_t seed) {
  if (c.dim() != 3)
    fail(ErrorCode::BadParams, "move experiments run on 3-complexes");
  SplitRng rng(seed);
  std::vector<TorsionReport> trace;
  trace.push_back(invariant3d(c, pl, rep, rng.split(0).next_u64()));

  int applied = 0;
  int budget = 50 * std::max(n, 1);
  while (applied < n && budget-- > 0) {
    MoveKind kind = kinds[rng.uniform_int(static_cast<int>(kinds.size()))];
    std::vector<Site> sites = find_sites(c, kind);
    if (sites.empty()) continue;
    const int start = rng.uniform_int(static_cast<int>(sites.size()));
    bool done = false;
    for (size_t k = 0; k < sites.size() && !done; ++k) {
      const Site& site = sites[(start + k) % sites.size()];
      try {
        MoveResult mr = apply_move(c, pl, rep, site, rng.next_u64());
        c = std::move(mr.complex);
        pl = std::move(mr.placement);
        done = true;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateSite &&
            e.code() != ErrorCode::ResampleExhausted)
          throw;
      }
    }
    if (!done) continue;
    ++applied;
    trace.push_back(invariant3d(c, pl, rep, rng.split(applied).next_u64()));
  }
  return trace;
}

}  // namespace pltor
