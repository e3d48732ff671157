#include "toricres/morse.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace toricres {

MorseQuiver quiver_of(const ExitPathQuiver& q) {
  MorseQuiver m;
  m.level.reserve(q.strata.size());
  for (const Stratum& s : q.strata) m.level.push_back(int(s.dim));
  for (const ExitEdge& e : q.edges) m.edges.push_back({e.src, e.dst, e.sign});
  return m;
}

QuiverSheaf sheaf_of(const ExitPathQuiver& q) {
  QuiverSheaf f;
  f.nvars = q.torus.phi.target.nrays();
  for (const Stratum& s : q.strata) f.objects.push_back(s.bundle);
  for (const ExitEdge& e : q.edges) f.values.push_back(Poly({Rat(1), e.exponent}));
  return f;
}

bool validate_acyclic_matching(const MorseQuiver& q, const Matching& m) {
  std::vector<int> touched(q.level.size(), 0);
  std::vector<bool> matched(q.edges.size(), false);
  for (size_t e : m) {
    if (e >= q.edges.size()) return false;
    if (matched[e]) return false;
    matched[e] = true;
    if (++touched[q.edges[e].src] > 1) return false;
    if (++touched[q.edges[e].dst] > 1) return false;
  }
  // cycle detection on the reversed-matched quiver, DFS with colors
  size_t n = q.level.size();
  std::vector<std::vector<size_t>> adj(n);
  for (size_t e = 0; e < q.edges.size(); ++e) {
    if (matched[e]) adj[q.edges[e].dst].push_back(q.edges[e].src);
    else adj[q.edges[e].src].push_back(q.edges[e].dst);
  }
  std::vector<int> color(n, 0);
  std::vector<std::pair<size_t, size_t>> stack;
  for (size_t s = 0; s < n; ++s) {
    if (color[s] != 0) continue;
    stack.push_back({s, 0});
    color[s] = 1;
    while (!stack.empty()) {
      auto& [v, idx] = stack.back();
      if (idx < adj[v].size()) {
        size_t w = adj[v][idx++];
        if (color[w] == 1) return false;
        if (color[w] == 0) {
          color[w] = 1;
          stack.push_back({w, 0});
        }
      } else {
        color[v] = 2;
        stack.pop_back();
      }
    }
  }
  return true;
}

std::vector<std::vector<size_t>> gradient_flow_lines(const MorseQuiver& q, const Matching& m,
                                                     size_t src, size_t dst) {
  std::vector<bool> matched(q.edges.size(), false);
  for (size_t e : m) matched[e] = true;
  // matched partner above a vertex: the matched edge having it as destination
  std::vector<size_t> up_edge(q.level.size(), size_t(-1));
  for (size_t e = 0; e < q.edges.size(); ++e)
    if (matched[e]) up_edge[q.edges[e].dst] = e;
  std::vector<std::vector<size_t>> out_edges(q.level.size());
  for (size_t e = 0; e < q.edges.size(); ++e)
    if (!matched[e]) out_edges[q.edges[e].src].push_back(e);

  std::vector<std::vector<size_t>> found;
  std::vector<size_t> path;
  // depth-first over alternating paths; acyclicity bounds the depth
  auto dfs = [&](auto&& self, size_t v) -> void {
    for (size_t e : out_edges[v]) {
      size_t w = q.edges[e].dst;
      path.push_back(e);
      if (w == dst) {
        found.push_back(path);
      } else if (up_edge[w] != size_t(-1) && q.edges[up_edge[w]].src != v) {
        path.push_back(up_edge[w]);
        self(self, q.edges[up_edge[w]].src);
        path.pop_back();
      }
      path.pop_back();
    }
  };
  dfs(dfs, src);
  return found;
}

ComplexMatrices sheaf_complex(const MorseQuiver& q, const QuiverSheaf& f) {
  ComplexMatrices c;
  c.nvars = f.nvars;
  int maxlev = 0;
  for (int l : q.level) maxlev = std::max(maxlev, l);
  c.gens.assign(size_t(maxlev) + 1, {});
  for (size_t v = 0; v < q.level.size(); ++v) {
    if (q.level[v] < 0) throw std::invalid_argument("negative level");
    c.gens[size_t(q.level[v])].push_back(v);
  }
  std::map<size_t, std::pair<size_t, size_t>> pos;  // vertex -> (level, index)
  for (size_t k = 0; k < c.gens.size(); ++k)
    for (size_t i = 0; i < c.gens[k].size(); ++i) pos[c.gens[k][i]] = {k, i};
  c.d.resize(c.gens.size());
  for (size_t k = 0; k < c.gens.size(); ++k) {
    size_t rows = k == 0 ? 0 : c.gens[k - 1].size();
    c.d[k] = PolyMat(rows, c.gens[k].size());
  }
  for (size_t e = 0; e < q.edges.size(); ++e) {
    auto [kl, i] = pos[q.edges[e].src];
    auto [kd, j] = pos[q.edges[e].dst];
    if (kl != kd + 1) throw std::invalid_argument("edge does not drop level by one");
    Poly val = f.values[e].scaled(Rat(q.edges[e].sign));
    c.d[kl].at(j, i) = c.d[kl].at(j, i) + val;
  }
  return c;
}

bool check_d_squared(const ComplexMatrices& c) {
  for (size_t k = 2; k < c.d.size(); ++k)
    if (!c.d[k - 1].mul(c.d[k]).is_zero()) return false;
  return true;
}

Matching rho_positive_matching(const ExitPathQuiver& q, size_t rho) {
  const ExitTorus& t = q.torus;
  if (rho >= t.ray_functionals.size() || is_zero(t.ray_functionals[rho]))
    throw std::invalid_argument("RAY_INACTIVE");
  Matching m;
  for (size_t e = 0; e < q.edges.size(); ++e) {
    const ExitEdge& edge = q.edges[e];
    // matched: the only newly active wall is rho's, crossed at the upper value
    if (edge.newly_active.size() == 1 && edge.newly_active[0] == rho &&
        edge.exponent[rho] == 0)
      m.push_back(e);
  }
  return m;
}

namespace {

struct EliminationState {
  // current complex, tracked by original vertex ids per level
  std::vector<std::vector<size_t>> gens;
  std::vector<PolyMat> d;
  // cumulative maps relative to the original complex
  std::vector<PolyMat> p, inc, h;
  size_t nvars = 0;

  std::pair<size_t, size_t> find(size_t vid) const {
    for (size_t k = 0; k < gens.size(); ++k)
      for (size_t i = 0; i < gens[k].size(); ++i)
        if (gens[k][i] == vid) return {k, i};
    throw std::logic_error("generator not found");
  }

  // eliminate the pair (s at level k, t at level k-1) with unit pivot
  void eliminate(size_t s_vid, size_t t_vid) {
    auto [k, si] = find(s_vid);
    auto [km, ti] = find(t_vid);
    if (km + 1 != k) throw std::logic_error("matched pair levels wrong");
    const Poly& u = d[k].at(ti, si);
    if (!u.is_unit()) throw std::invalid_argument("MATCHING_NOT_RESPECTING");
    Rat uinv = Rat(1) / u.unit_value();

    size_t nk = gens[k].size(), nkm = gens[km].size();
    // step maps on the current complex
    // i_step: level k: x -> x - uinv * d[t,x] * s ; identity elsewhere
    // p_step: level k: s -> 0 ; level k-1: t -> -uinv * (c-part), i.e. p(t) = -uinv*col_s minus t
    // h_step: level k-1: t -> -uinv * s
    // Compose into cumulative maps, then shrink matrices.
    std::vector<size_t> keep_k, keep_km;
    for (size_t i = 0; i < nk; ++i)
      if (i != si) keep_k.push_back(i);
    for (size_t i = 0; i < nkm; ++i)
      if (i != ti) keep_km.push_back(i);

    // new differential at level k: D - c uinv b
    PolyMat ndk(keep_km.size(), keep_k.size());
    for (size_t a = 0; a < keep_km.size(); ++a)
      for (size_t b = 0; b < keep_k.size(); ++b) {
        Poly corr = d[k].at(keep_km[a], si) * d[k].at(ti, keep_k[b]);
        ndk.at(a, b) = d[k].at(keep_km[a], keep_k[b]) - corr.scaled(uinv);
      }
    // level k+1: drop the s-row
    PolyMat ndk1;
    if (k + 1 < d.size()) {
      ndk1 = PolyMat(keep_k.size(), d[k + 1].cols());
      for (size_t a = 0; a < keep_k.size(); ++a)
        for (size_t b = 0; b < d[k + 1].cols(); ++b) ndk1.at(a, b) = d[k + 1].at(keep_k[a], b);
    }
    // level k-1: drop the t-column
    PolyMat ndkm;
    if (km >= 1) {
      ndkm = PolyMat(d[km].rows(), keep_km.size());
      for (size_t a = 0; a < d[km].rows(); ++a)
        for (size_t b = 0; b < keep_km.size(); ++b) ndkm.at(a, b) = d[km].at(a, keep_km[b]);
    }

    // step maps as full matrices on the current complex
    PolyMat pk(keep_k.size(), nk);  // level k projection
    for (size_t a = 0; a < keep_k.size(); ++a)
      pk.at(a, keep_k[a]) = Poly::constant(Rat(1), nvars);
    PolyMat pkm(keep_km.size(), nkm);  // level k-1 projection: t -> -uinv * c
    for (size_t a = 0; a < keep_km.size(); ++a) {
      pkm.at(a, keep_km[a]) = Poly::constant(Rat(1), nvars);
      pkm.at(a, ti) = (-d[k].at(keep_km[a], si)).scaled(uinv);
    }
    PolyMat ik(nk, keep_k.size());  // level k inclusion: x -> x - uinv*d[t,x]*s
    for (size_t a = 0; a < keep_k.size(); ++a) {
      ik.at(keep_k[a], a) = Poly::constant(Rat(1), nvars);
      ik.at(si, a) = (-d[k].at(ti, keep_k[a])).scaled(uinv);
    }
    PolyMat ikm(nkm, keep_km.size());
    for (size_t a = 0; a < keep_km.size(); ++a)
      ikm.at(keep_km[a], a) = Poly::constant(Rat(1), nvars);
    PolyMat hkm(nk, nkm);  // level k-1 -> level k homotopy: t -> -uinv*s
    hkm.at(si, ti) = Poly::constant(-uinv, nvars);

    // cumulative: p' = p_step . p ; i' = i . i_step ; h' = h + i . h_step . p
    std::vector<PolyMat> np = p, ni = inc, nh = h;
    np[k] = pk.mul(p[k]);
    np[km] = pkm.mul(p[km]);
    ni[k] = inc[k].mul(ik);
    ni[km] = inc[km].mul(ikm);
    nh[km] = h[km] + inc[k].mul(hkm).mul(p[km]);
    p = std::move(np);
    inc = std::move(ni);
    h = std::move(nh);

    gens[k].erase(gens[k].begin() + si);
    gens[km].erase(gens[km].begin() + ti);
    d[k] = std::move(ndk);
    if (k + 1 < d.size()) d[k + 1] = std::move(ndk1);
    if (km >= 1) d[km] = std::move(ndkm);
    else d[km] = PolyMat(0, keep_km.size());
  }
};

}  // namespace

MorseReductionResult morse_reduce(const MorseQuiver& q, const QuiverSheaf& f, const Matching& m) {
  if (!validate_acyclic_matching(q, m))
    throw std::invalid_argument("matching is not an acyclic partial matching");
  MorseReductionResult res;
  res.original = sheaf_complex(q, f);

  EliminationState st;
  st.gens = res.original.gens;
  st.d = res.original.d;
  st.nvars = res.original.nvars;
  for (size_t k = 0; k < st.gens.size(); ++k) {
    st.p.push_back(PolyMat::identity(st.gens[k].size(), st.nvars));
    st.inc.push_back(PolyMat::identity(st.gens[k].size(), st.nvars));
    st.h.push_back(PolyMat(k + 1 < st.gens.size() ? st.gens[k + 1].size() : 0,
                           st.gens[k].size()));
  }
  for (size_t e : m) st.eliminate(q.edges[e].src, q.edges[e].dst);

  res.reduced.gens = st.gens;
  res.reduced.d = st.d;
  res.reduced.nvars = st.nvars;
  res.p = st.p;
  res.inc = st.inc;
  res.h = st.h;
  for (const auto& lv : st.gens)
    for (size_t vid : lv) res.critical.push_back(vid);
  std::sort(res.critical.begin(), res.critical.end());

  // reduced quiver via gradient flow lines, with the sign rule
  // (-1)^{(len-1)/2} * product of edge signs
  std::map<size_t, size_t> newid;
  for (size_t i = 0; i < res.critical.size(); ++i) newid[res.critical[i]] = i;
  res.reduced_quiver.level.clear();
  for (size_t vid : res.critical) res.reduced_quiver.level.push_back(q.level[vid]);
  res.reduced_sheaf.nvars = f.nvars;
  for (size_t vid : res.critical) res.reduced_sheaf.objects.push_back(f.objects[vid]);
  std::vector<bool> matched(q.edges.size(), false);
  for (size_t e : m) matched[e] = true;
  for (size_t a : res.critical) {
    for (size_t b : res.critical) {
      if (q.level[a] != q.level[b] + 1) continue;
      for (const auto& line : gradient_flow_lines(q, m, a, b)) {
        int sign = (line.size() / 2) % 2 == 0 ? 1 : -1;  // (-1)^{(len-1)/2}
        Poly val = Poly::constant(Rat(1), f.nvars);
        for (size_t idx = 0; idx < line.size(); ++idx) {
          size_t e = line[idx];
          sign *= q.edges[e].sign;
          if (matched[e]) {
            if (!f.values[e].is_unit()) throw std::invalid_argument("MATCHING_NOT_RESPECTING");
            val = val.scaled(Rat(1) / f.values[e].unit_value());
          } else {
            val = val * f.values[e];
          }
        }
        res.reduced_quiver.edges.push_back({newid[a], newid[b], sign});
        res.reduced_sheaf.values.push_back(val);
      }
    }
  }
  res.reduced_flowline = sheaf_complex(res.reduced_quiver, res.reduced_sheaf);
  return res;
}

}  // namespace toricres
