#include "pltor/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace pltor {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool same_gluing(const PreComplex& a, const PreComplex& b) {
  if (a.top_count() != b.top_count() || a.dim() != b.dim()) return false;
  for (int t = 0; t < a.top_count(); ++t) {
    for (int f = 0; f <= a.dim(); ++f) {
      const auto& ga = a.facet_glue(t, f);
      const auto& gb = b.facet_glue(t, f);
      if (ga.top != gb.top || ga.facet != gb.facet || ga.shift != gb.shift)
        return false;
    }
  }
  return true;
}

}  // namespace

std::string emit_tri(const PreComplex& c, const Representation& rep,
                     const CoverPlacement* placement) {
  std::ostringstream out;
  out << "dim " << c.dim() << "\n";
  switch (rep.kind) {
    case Representation::Kind::Trivial:
      out << "group trivial\n";
      break;
    case Representation::Kind::SingleAxisCyclic:
      out << "group cyclic " << rep.p << " " << rep.k << "\n";
      break;
    case Representation::Kind::CyclicInfinite:
      out << "group zline " << fmt17(rep.alpha) << " " << fmt17(rep.trans)
          << "\n";
      break;
    case Representation::Kind::MultiAxis:
      out << "group multiaxis\n";
      break;
  }
  for (const auto& n : c.vertex_names()) out << "vertex " << n << "\n";
  for (int t = 0; t < c.top_count(); ++t) {
    const auto& top = c.top(t);
    out << "simplex " << (top.sign > 0 ? "+" : "-");
    for (const auto& lv : top.verts) {
      out << " " << c.vertex_names()[lv.v];
      if (lv.copy != 0) out << "@" << lv.copy;
    }
    out << "\n";
  }

  // glue lines only when tuple matching would not reconstruct the gluing
  bool need_glue = true;
  try {
    std::vector<PreComplex::SignedTop> tops;
    for (int t = 0; t < c.top_count(); ++t) tops.push_back(c.top(t));
    PreComplex re = PreComplex::build(c.dim(), c.deck_order(),
                                      c.vertex_names(), tops);
    need_glue = !same_gluing(c, re);
  } catch (const Error&) {
    need_glue = true;
  }
  if (need_glue) {
    for (const auto& g : c.glue_records())
      out << "glue " << g.top_a << " " << g.facet_a << " " << g.top_b << " "
          << g.facet_b << " " << g.shift << "\n";
  }

  if (placement) {
    for (int v = 0; v < c.vertex_count(); ++v) {
      for (const auto& [copy, x] : placement->lifts[v]) {
        out << "lift " << c.vertex_names()[v] << " " << copy;
        for (int i = 0; i < x.size(); ++i) out << " " << fmt17(x(i));
        out << "\n";
      }
    }
  }
  return out.str();
}

TriFile parse_tri(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int dim = -1;
  Representation rep = Representation::trivial(3);
  bool have_group = false;
  std::vector<std::string> names;
  std::vector<PreComplex::SignedTop> raw_tops;
  std::vector<std::vector<std::pair<std::string, int>>> top_tokens;
  std::vector<GlueRecord> glues;
  struct LiftLine {
    std::string name;
    int copy;
    Eigen::VectorXd x;
  };
  std::vector<LiftLine> lift_lines;

  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto fail_here = [&](const std::string& msg) {
      fail(ErrorCode::BadParams,
           "line " + std::to_string(lineno) + ": " + msg);
    };
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word) || word[0] == '#') continue;
    if (word == "dim") {
      if (!(ls >> dim)) fail_here("bad dim line");
    } else if (word == "group") {
      std::string kind;
      if (!(ls >> kind)) fail_here("bad group line");
      if (kind == "trivial") {
        rep = Representation::trivial(dim > 0 ? dim : 3);
      } else if (kind == "cyclic") {
        int p, k;
        if (!(ls >> p >> k)) fail_here("bad cyclic group line");
        rep = Representation::cyclic(p, k);
      } else if (kind == "zline") {
        double a, t;
        if (!(ls >> a >> t)) fail_here("bad zline group line");
        rep = Representation::zline(a, t);
      } else if (kind == "multiaxis") {
        rep = Representation{Representation::Kind::MultiAxis, 3, 1, 0, 0, 0};
      } else {
        fail_here("unknown group kind");
      }
      have_group = true;
    } else if (word == "vertex") {
      std::string n;
      if (!(ls >> n)) fail_here("bad vertex line");
      names.push_back(n);
    } else if (word == "simplex") {
      std::string sgn;
      if (!(ls >> sgn) || (sgn != "+" && sgn != "-"))
        fail_here("bad simplex sign");
      std::vector<std::pair<std::string, int>> toks;
      std::string tok;
      while (ls >> tok) {
        int copy = 0;
        auto at = tok.find('@');
        if (at != std::string::npos) {
          copy = std::stoi(tok.substr(at + 1));
          tok = tok.substr(0, at);
        }
        toks.push_back({tok, copy});
      }
      PreComplex::SignedTop st;
      st.sign = sgn == "+" ? 1 : -1;
      raw_tops.push_back(st);
      top_tokens.push_back(std::move(toks));
    } else if (word == "glue") {
      GlueRecord g;
      if (!(ls >> g.top_a >> g.facet_a >> g.top_b >> g.facet_b >> g.shift))
        fail_here("bad glue line");
      glues.push_back(g);
    } else if (word == "lift") {
      LiftLine ll;
      if (!(ls >> ll.name >> ll.copy)) fail_here("bad lift line");
      std::vector<double> xs;
      double v;
      while (ls >> v) xs.push_back(v);
      ll.x = Eigen::Map<Eigen::VectorXd>(xs.data(), xs.size());
      lift_lines.push_back(std::move(ll));
    } else {
      fail_here("unknown record '" + word + "'");
    }
  }

  if (dim != 3 && dim != 4) fail(ErrorCode::BadParams, "missing or bad dim");
  if (!have_group) rep = Representation::trivial(dim);
  rep.dim = dim;

  const auto vid = [&](const std::string& n) {
    for (size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return static_cast<int>(i);
    fail(ErrorCode::BadParams, "unknown vertex '" + n + "'");
  };
  for (size_t t = 0; t < raw_tops.size(); ++t) {
    for (const auto& [n, copy] : top_tokens[t])
      raw_tops[t].verts.push_back({vid(n), copy});
  }

  TriFile out;
  if (glues.empty())
    out.complex = PreComplex::build(dim, rep.deck_order(), names, raw_tops);
  else
    out.complex = PreComplex::build_glued(dim, rep.deck_order(), names,
                                          raw_tops, glues);
  out.rep = rep;

  if (!lift_lines.empty()) {
    CoverPlacement pl;
    pl.dim = dim;
    pl.rep = rep;
    pl.lifts.assign(out.complex.vertex_count(), {});
    for (const auto& ll : lift_lines) {
      if (ll.x.size() != dim)
        fail(ErrorCode::BadParams, "lift with wrong coordinate count");
      pl.lifts[vid(ll.name)][ll.copy] = ll.x;
    }
    const double res = pl.equivariance_residual();
    const double scale = std::max(pl.diameter(), 1.0);
    if (res > 1e-12 * scale)
      fail(ErrorCode::BadParams, "lifts are not equivariant under the group");
    out.placement = std::move(pl);
  }
  return out;
}

TriFile parse_tri_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::BadParams, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_tri(ss.str());
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::BadParams, "cannot write '" + path + "'");
  out << content;
}

}  // namespace pltor
