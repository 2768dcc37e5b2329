// Command-line front end: generate triangulations, check the identity and
// chain suites, compute torsion values, apply moves and run move
// experiments. All reports are JSON on standard output; exit code 0 means
// every checked quantity is within tolerance, 1 a violation or singular
// input, 2 a parse or parameter error.

#include <CLI11.hpp>
#include <iostream>

#include "pltor/io.hpp"
#include "pltor/jsonw.hpp"
#include "pltor/pachner.hpp"
#include "pltor/torsion_engine.hpp"
#include "pltor/zoo.hpp"

using namespace pltor;

namespace {

void emit_logdet(JsonWriter& w, const std::string& key, const LogDet& ld) {
  w.key(key).begin_object();
  w.kv("sign", ld.sign);
  w.kv("log10_abs", ld.sign == 0.0 ? 0.0 : ld.log_abs / std::log(10.0));
  w.kv("value", ld.value());
  w.end_object();
}

Generated generate(const std::string& kind, int p, int q, int k, double alpha,
                   double a, uint64_t seed) {
  if (kind == "sphere3") return gen_sphere3(seed);
  if (kind == "sphere4") return gen_sphere4(seed);
  if (kind == "lens") return gen_lens(p, q, k, seed);
  if (kind == "s1xs2") return gen_s1xs2(alpha, a, seed);
  fail(ErrorCode::BadParams, "unknown --kind '" + kind + "'");
}

int cmd_gen(const std::string& kind, int p, int q, int k, double alpha,
            double a, uint64_t seed, const std::string& out_path) {
  Generated g = generate(kind, p, q, k, alpha, a, seed);
  std::string text = emit_tri(g.complex, g.rep, &g.placement);
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  return 0;
}

struct CheckOutcome {
  JsonWriter w;
  bool ok = true;
};

void check3(const TriFile& tf, double tol, CheckOutcome& co) {
  const PreComplex& c = tf.complex;
  const CoverPlacement& pl = *tf.placement;
  MetricData m = read_metric(c, pl);
  CurvatureVector w = deficit_angles(c, pl);
  const double max_omega = w.size() ? w.cwiseAbs().maxCoeff() : 0.0;
  co.w.kv("max_abs_deficit", max_omega);
  co.ok &= max_omega <= tol;

  GaugeBasis g = gauge_basis(pl, tf.rep);
  Eigen::MatrixXd A = assemble_A3(c, m);
  Eigen::MatrixXd B = assemble_B3(c, pl, g);
  const double a_scale = std::max(max_abs(A), 1e-300);
  const double sym = max_abs(A - A.transpose()) / a_scale;
  co.w.kv("A_symmetry_rel", sym);
  co.ok &= sym <= 1e-8;
  const double chain = max_abs(A * B) /
                       std::max(a_scale * std::max(max_abs(B), 1e-300), 1e-300);
  co.w.kv("chain_AB_rel", chain);
  co.ok &= chain <= 1e-8;

  const int edges = c.cell_count(1);
  const int rb = rank_svd(B), ra = rank_svd(A);
  co.w.kv("edges", edges);
  co.w.kv("gauge_size", g.size());
  co.w.kv("rank_A", ra);
  co.w.kv("rank_B", rb);
  co.w.kv("sv_gap_A", sv_gap(A, ra));
  co.w.kv("sv_gap_B", sv_gap(B, rb));
  co.w.kv("exact", rb == g.size() && ra + rb == edges);
  co.ok &= rb == g.size() && ra + rb == edges;
}

void check4(const TriFile& tf, double tol, CheckOutcome& co) {
  const PreComplex& c = tf.complex;
  const CoverPlacement& pl = *tf.placement;
  MetricData m = read_metric(c, pl);
  CurvatureVector w = deficit_angles(c, pl);
  const double max_omega = w.size() ? w.cwiseAbs().maxCoeff() : 0.0;
  co.w.kv("max_abs_deficit", max_omega);
  co.ok &= max_omega <= tol;

  Eigen::MatrixXd Q = assemble_Q4(c, m);
  DeviationBasis basis = DeviationBasis::standard(c, pl);
  Eigen::MatrixXd D = assemble_D4(c, pl, basis);
  const double prod =
      max_abs(conjugate_omega_map(Q) * D) /
      std::max(max_abs(Q) * std::max(max_abs(D), 1e-300), 1e-300);
  co.w.kv("chain_rel", prod);
  co.ok &= prod <= 1e-8;
  co.w.kv("rank_QT", rank_svd(conjugate_omega_map(Q)));

  // per 4-surrounded edge: annihilation, block rank, column proportions
  double worst_annih = 0, worst_prop = 0;
  bool ranks_ok = true;
  int four_edges = 0;
  for (int e = 0; e < c.cell_count(1); ++e) {
    if (c.cofaces(1, e).size() != 4) continue;
    ++four_edges;
    std::vector<int> faces, tops;
    for (auto [t, mask] : c.cofaces(1, e)) {
      for (int qq = 0; qq <= 4; ++qq) {
        if (mask & (1u << qq)) continue;
        int fc = c.cell_at(t, uint8_t(mask | (1u << qq)));
        if (std::find(faces.begin(), faces.end(), fc) == faces.end())
          faces.push_back(fc);
      }
      tops.push_back(t);
    }
    if (faces.size() != 4) continue;
    // squared-area responses of the 4 faces to this edge's deviation
    Eigen::MatrixXd R(4, 3);
    for (int r = 0; r < 4; ++r) {
      auto ls = c.cell_labels(2, faces[r]);
      Eigen::MatrixXd pts(3, 4);
      for (int i = 0; i < 3; ++i)
        pts.row(i) = pl.coord(ls[i].v, ls[i].copy).transpose();
      double s = cm_volume(2, [&] {
        Eigen::MatrixXd dd = Eigen::MatrixXd::Zero(3, 3);
        for (int i = 0; i < 3; ++i)
          for (int j = i + 1; j < 3; ++j)
            dd(i, j) = dd(j, i) = (pts.row(i) - pts.row(j)).squaredNorm();
        return dd;
      }());
      for (int comp = 0; comp < 3; ++comp)
        R(r, comp) = 2.0 * s * D(faces[r], 3 * e + comp);
    }
    if (rank_svd(R) != 3) ranks_ok = false;
    // annihilating vector: signed volumes of the tops opposite each face
    Eigen::Vector4d vol;
    for (int r = 0; r < 4; ++r) {
      int vt = -1;
      for (int t : tops) {
        bool has = false;
        for (auto [tt, mask] : c.cofaces(2, faces[r]))
          if (tt == t) has = true;
        if (!has) vt = t;
      }
      vol(r) = std::abs(signed_volume(top_coords(c, pl, vt)));
    }
    // fix signs from the column proportions
    Eigen::VectorXd col(4);
    for (int r = 0; r < 4; ++r) col(r) = Q(faces[r], e);
    Eigen::Vector4d signs;
    for (int r = 0; r < 4; ++r) signs(r) = col(r) >= 0 ? 1.0 : -1.0;
    Eigen::Vector4d annih = vol.cwiseProduct(signs);
    double resid = (annih.transpose() * R).cwiseAbs().maxCoeff() /
                   std::max(annih.norm() * max_abs(R), 1e-300);
    worst_annih = std::max(worst_annih, resid);
    // proportions: Q column entries vs +/- vol * area
    Eigen::Vector4d expect;
    for (int r = 0; r < 4; ++r) {
      auto ls = c.cell_labels(2, faces[r]);
      Eigen::MatrixXd pts(3, 4);
      for (int i = 0; i < 3; ++i)
        pts.row(i) = pl.coord(ls[i].v, ls[i].copy).transpose();
      Eigen::VectorXd u = (pts.row(1) - pts.row(0)).transpose();
      Eigen::VectorXd v = (pts.row(2) - pts.row(0)).transpose();
      double s = 0.5 * std::sqrt(u.squaredNorm() * v.squaredNorm() -
                                 u.dot(v) * u.dot(v));
      expect(r) = vol(r) * s * signs(r);
    }
    double scale = col.norm() * expect.norm();
    double cross = std::abs(col.dot(expect)) / std::max(scale, 1e-300);
    worst_prop = std::max(worst_prop, 1.0 - cross);
    (void)scale;
  }
  co.w.kv("four_surrounded_edges", four_edges);
  co.w.kv("annihilation_rel", worst_annih);
  co.w.kv("block_ranks_3", ranks_ok);
  co.w.kv("column_proportion_dev", worst_prop);
  co.ok &= worst_annih <= 1e-8 && ranks_ok && worst_prop <= 1e-10;
}

int cmd_check(const std::string& path, double tol) {
  TriFile tf = parse_tri_file(path);
  CheckOutcome co;
  co.w.begin_object();
  co.w.kv("schema", 1);
  co.w.kv("dim", tf.complex.dim());
  co.w.kv("tops", tf.complex.top_count());
  co.w.kv("tol", tol);
  if (!tf.placement) {
    co.w.kv("lifts", false);
  } else {
    co.w.kv("lifts", true);
    if (tf.complex.dim() == 3)
      check3(tf, tol, co);
    else
      check4(tf, tol, co);
  }
  co.w.kv("ok", co.ok);
  co.w.end_object();
  std::cout << co.w.str() << "\n";
  return co.ok ? 0 : 1;
}

void emit_torsion_report(JsonWriter& w, const TorsionReport& tr) {
  w.kv("schema", 1);
  w.kv("C", tr.C);
  w.kv("Cbar", tr.Cbar);
  emit_logdet(w, "detA_C", tr.detA_C);
  emit_logdet(w, "detB_Cbar", tr.detB_Cbar);
  emit_logdet(w, "tau", tr.tau);
  emit_logdet(w, "invariant", tr.invariant);
  w.kv("experimental_gauge", tr.experimental_gauge);
}

int cmd_invariant(const std::string& path, uint64_t pivot_seed) {
  TriFile tf = parse_tri_file(path);
  if (tf.complex.dim() != 3 || !tf.placement)
    fail(ErrorCode::BadParams, "invariant needs a dim-3 file with lifts");
  TorsionReport tr = invariant3d(tf.complex, *tf.placement, tf.rep,
                                 pivot_seed, pivot_seed != 0);
  JsonWriter w;
  w.begin_object();
  emit_torsion_report(w, tr);
  w.end_object();
  std::cout << w.str() << "\n";
  return 0;
}

int cmd_move(const std::string& path, const std::string& kind_token,
             uint64_t seed, const std::string& out_path) {
  TriFile tf = parse_tri_file(path);
  auto kind = parse_move_kind(kind_token);
  if (!kind) fail(ErrorCode::BadParams, "unknown move kind '" + kind_token + "'");
  if (!tf.placement) fail(ErrorCode::BadParams, "move needs lifts");

  std::vector<Site> sites = find_sites(tf.complex, *kind);
  if (sites.empty()) fail(ErrorCode::DegenerateSite, "no admissible site");
  SplitRng rng(seed);
  const int start = rng.uniform_int(static_cast<int>(sites.size()));
  std::optional<MoveResult> result;
  for (size_t i = 0; i < sites.size() && !result; ++i) {
    try {
      result = apply_move(tf.complex, *tf.placement, tf.rep,
                          sites[(start + i) % sites.size()], rng.next_u64());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateSite &&
          e.code() != ErrorCode::ResampleExhausted)
        throw;
    }
  }
  if (!result) fail(ErrorCode::DegenerateSite, "all sites degenerate");

  JsonWriter w;
  w.begin_object();
  w.kv("schema", 1);
  w.kv("kind", to_string(*kind));
  w.kv("tops_before", tf.complex.top_count());
  w.kv("tops_after", result->complex.top_count());
  if (!result->report.new_vertex.empty())
    w.kv("new_vertex", result->report.new_vertex);
  if (tf.complex.dim() == 3) {
    TorsionReport before = invariant3d(tf.complex, *tf.placement, tf.rep);
    TorsionReport after =
        invariant3d(result->complex, result->placement, tf.rep);
    emit_logdet(w, "invariant_before", before.invariant);
    emit_logdet(w, "invariant_after", after.invariant);
  }
  if (*kind == MoveKind::M24) {
    const FactorReport& fr = result->report;
    emit_logdet(w, "det_before", fr.det_before);
    emit_logdet(w, "det_after", fr.det_after);
    w.kv("measured_ratio", fr.measured_ratio);
    w.kv("predicted_factor", fr.predicted_factor);
    w.kv("analytic_entry", fr.analytic_entry);
    w.kv("pivot_faces", fr.pivot_faces);
    w.kv("pivot_edges", fr.pivot_edges);
    w.kv("deviation_factor", fr.deviation_factor);
    w.kv("deviation_predicted", fr.deviation_predicted);
    const double rel =
        std::abs(fr.measured_ratio - std::abs(fr.predicted_factor)) /
        std::max(std::abs(fr.predicted_factor), 1e-300);
    w.kv("factor_rel_error", rel);
  }
  w.end_object();
  std::cout << w.str() << "\n";

  std::string text =
      emit_tri(result->complex, tf.rep, &result->placement);
  if (out_path.empty())
    std::cerr << text;
  else
    write_file(out_path, text);
  return 0;
}

int cmd_experiment(const std::string& path, const std::string& kinds_token,
                   int n, uint64_t seed, const std::string& out_path) {
  TriFile tf = parse_tri_file(path);
  if (!tf.placement) fail(ErrorCode::BadParams, "experiment needs lifts");
  std::vector<MoveKind> kinds;
  std::string tok;
  std::istringstream ks(kinds_token);
  while (std::getline(ks, tok, ',')) {
    auto k = parse_move_kind(tok);
    if (!k) fail(ErrorCode::BadParams, "unknown move kind '" + tok + "'");
    kinds.push_back(*k);
  }
  if (kinds.empty()) fail(ErrorCode::BadParams, "empty --kinds");

  PreComplex c = tf.complex;
  CoverPlacement pl = *tf.placement;
  std::vector<TorsionReport> trace = move_experiment(c, pl, tf.rep, kinds, n, seed);

  double lo = 0, hi = 0;
  for (size_t i = 0; i < trace.size(); ++i) {
    const double v = trace[i].invariant.log_abs;
    lo = i == 0 ? v : std::min(lo, v);
    hi = i == 0 ? v : std::max(hi, v);
  }
  const double spread = trace.empty() ? 0.0 : std::exp(hi - lo) - 1.0;

  JsonWriter w;
  w.begin_object();
  w.kv("schema", 1);
  w.kv("moves_applied", static_cast<int>(trace.size()) - 1);
  w.key("invariants").begin_array();
  for (const auto& tr : trace) w.value(tr.invariant.value());
  w.end_array();
  w.kv("relative_spread", spread);
  w.kv("tops_final", c.top_count());
  w.end_object();
  std::cout << w.str() << "\n";

  if (!out_path.empty()) write_file(out_path, emit_tri(c, tf.rep, &pl));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"torsion invariants of triangulated manifolds"};
  app.require_subcommand(1);

  std::string kind = "sphere3", file, out_path, kinds = "2-3,3-2,1-4,4-1",
              move_kind = "2-3";
  int p = 5, q = 1, kk = 1, n = 10;
  double alpha = 0.7, a = 1.0, tol = 1e-9;
  uint64_t seed = 1, pivot_seed = 0;
  bool json_flag = true;

  auto* gen = app.add_subcommand("gen", "generate a triangulation file");
  gen->add_option("--kind", kind, "sphere3|sphere4|lens|s1xs2");
  gen->add_option("--p", p);
  gen->add_option("--q", q);
  gen->add_option("--k", kk);
  gen->add_option("--alpha", alpha);
  gen->add_option("--a", a);
  gen->add_option("--seed", seed);
  gen->add_option("-o,--out", out_path);

  auto* check = app.add_subcommand("check", "verify the identity suites");
  check->add_option("file", file)->required();
  check->add_option("--tol", tol);
  check->add_flag("--json", json_flag);

  auto* inv = app.add_subcommand("invariant", "torsion and manifold value");
  inv->add_option("file", file)->required();
  inv->add_option("--pivot-seed", pivot_seed);
  inv->add_flag("--json", json_flag);

  auto* mv = app.add_subcommand("move", "apply one Pachner move");
  mv->add_option("file", file)->required();
  mv->add_option("--kind", move_kind)->required();
  mv->add_option("--seed", seed);
  mv->add_option("-o,--out", out_path);
  mv->add_flag("--json", json_flag);

  auto* exp = app.add_subcommand("experiment", "random move sequence");
  exp->add_option("file", file)->required();
  exp->add_option("--kinds", kinds);
  exp->add_option("-n", n);
  exp->add_option("--seed", seed);
  exp->add_option("-o,--out", out_path);
  exp->add_flag("--json", json_flag);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen(kind, p, q, kk, alpha, a, seed, out_path);
    if (check->parsed()) return cmd_check(file, tol);
    if (inv->parsed()) return cmd_invariant(file, pivot_seed);
    if (mv->parsed()) return cmd_move(file, move_kind, seed, out_path);
    if (exp->parsed()) return cmd_experiment(file, kinds, n, seed, out_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::BadParams:
      case ErrorCode::BadArity:
        return 2;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
