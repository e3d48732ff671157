#include "toricres/complex.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace toricres {

namespace {

// src - dst, entries must be non-negative
IntVec sub_exponent(const IntVec& src, const IntVec& dst) {
  IntVec e(src.size());
  for (size_t i = 0; i < src.size(); ++i) {
    e[i] = src[i] - dst[i];
    if (e[i] < 0) throw std::logic_error("negative transported exponent");
  }
  return e;
}

}  // namespace

LineBundleComplex complex_of_quiver(const ExitPathQuiver& q) {
  LineBundleComplex c;
  c.fan = q.torus.phi.target;
  size_t maxdim = 0;
  for (const Stratum& s : q.strata) maxdim = std::max(maxdim, s.dim);
  c.terms.assign(maxdim + 1, {});
  c.term_supports.assign(maxdim + 1, {});
  std::vector<std::pair<size_t, size_t>> pos(q.strata.size());
  for (const Stratum& s : q.strata) {
    pos[s.id] = {s.dim, c.terms[s.dim].size()};
    c.terms[s.dim].push_back(s.bundle);
    c.term_supports[s.dim].push_back(s.support.values);
  }
  c.diff.resize(maxdim + 1);
  for (size_t k = 0; k <= maxdim; ++k) {
    size_t rows = k == 0 ? 0 : c.terms[k - 1].size();
    c.diff[k] = PolyMat(rows, c.terms[k].size());
  }
  for (const ExitEdge& e : q.edges) {
    auto [ks, is] = pos[e.src];
    auto [kd, id] = pos[e.dst];
    if (ks != kd + 1) throw std::logic_error("edge level mismatch");
    c.diff[ks].at(id, is) = c.diff[ks].at(id, is) + Poly({Rat(e.sign), e.exponent});
  }
  return c;
}

AugmentedComplex build_resolution(const StackyMorphism& phi, size_t codim_bound) {
  if (!smoothly_covered(phi.target)) throw std::invalid_argument("NOT_SMOOTHLY_COVERED");
  AugmentedComplex out;
  out.phi = phi;
  out.quiver = build_quiver(phi, codim_bound);
  out.cx = complex_of_quiver(*out.quiver);
  const Stratum& id_str = out.quiver->strata[out.quiver->identity_stratum];
  if (id_str.dim != 0) throw std::logic_error("identity stratum has positive dimension");
  size_t pos = 0;
  for (const Stratum& s : out.quiver->strata) {
    if (s.dim != 0) continue;
    if (s.id == id_str.id) break;
    ++pos;
  }
  out.alpha = pos;
  return out;
}

AugmentedComplex diagonal_resolution(const StackyFan& f, size_t codim_bound) {
  return build_resolution(diagonal_morphism(f), codim_bound);
}

LineBundleComplex tensor_resolutions(const LineBundleComplex& a, const LineBundleComplex& b) {
  LineBundleComplex c;
  c.fan = product_stacky_fan(a.fan, b.fan);
  size_t na = a.fan.nrays(), nb = b.fan.nrays();
  size_t la = a.terms.size(), lb = b.terms.size();
  c.terms.assign(la + lb - 1, {});
  c.term_supports.assign(la + lb - 1, {});
  // index bookkeeping: in degree k, blocks (i, k-i) with i ascending
  auto embed_a = [&](const IntVec& v) {
    IntVec w(na + nb, Int(0));
    for (size_t i = 0; i < na; ++i) w[i] = v[i];
    return w;
  };
  auto embed_b = [&](const IntVec& v) {
    IntVec w(na + nb, Int(0));
    for (size_t i = 0; i < nb; ++i) w[na + i] = v[i];
    return w;
  };
  std::vector<size_t> map_a(na), map_b(nb);
  for (size_t i = 0; i < na; ++i) map_a[i] = i;
  for (size_t i = 0; i < nb; ++i) map_b[i] = na + i;

  for (size_t k = 0; k < c.terms.size(); ++k) {
    for (size_t i = 0; i < la; ++i) {
      if (k < i || k - i >= lb) continue;
      size_t j = k - i;
      for (size_t x = 0; x < a.terms[i].size(); ++x)
        for (size_t y = 0; y < b.terms[j].size(); ++y) {
          IntVec sup = embed_a(a.term_supports[i][x]);
          IntVec supb = embed_b(b.term_supports[j][y]);
          c.term_supports[k].push_back(add(sup, supb));
          c.terms[k].push_back(
              pic_canonical_form(divisor_of_support({c.term_supports[k].back()}), c.fan));
        }
    }
  }
  auto block_offset = [&](size_t k, size_t i) {
    // offset of block (i, k-i) within degree k
    size_t off = 0;
    for (size_t i2 = 0; i2 < i; ++i2) {
      if (k < i2 || k - i2 >= lb) continue;
      off += a.terms[i2].size() * b.terms[k - i2].size();
    }
    return off;
  };
  c.diff.resize(c.terms.size());
  for (size_t k = 0; k < c.terms.size(); ++k) {
    size_t rows = k == 0 ? 0 : c.terms[k - 1].size();
    c.diff[k] = PolyMat(rows, c.terms[k].size());
    if (k == 0) continue;
    for (size_t i = 0; i <= k && i < la; ++i) {
      size_t j = k - i;
      if (j >= lb) continue;
      size_t ra = a.terms[i].size(), rb = b.terms[j].size();
      size_t src_off = block_offset(k, i);
      // d_a tensor id: block (i,j) -> (i-1, j)
      if (i >= 1) {
        size_t dst_off = block_offset(k - 1, i - 1);
        for (size_t x = 0; x < ra; ++x)
          for (size_t y = 0; y < rb; ++y)
            for (size_t x2 = 0; x2 < a.terms[i - 1].size(); ++x2) {
              const Poly& entry = a.diff[i].at(x2, x);
              if (entry.is_zero()) continue;
              c.diff[k].at(dst_off + x2 * rb + y, src_off + x * rb + y) =
                  c.diff[k].at(dst_off + x2 * rb + y, src_off + x * rb + y) +
                  entry.reindex(map_a, na + nb);
            }
      }
      // (-1)^i id tensor d_b: block (i,j) -> (i, j-1)
      if (j >= 1) {
        size_t dst_off = block_offset(k - 1, i);
        Rat sgn = (i % 2 == 0) ? Rat(1) : Rat(-1);
        for (size_t x = 0; x < ra; ++x)
          for (size_t y = 0; y < rb; ++y)
            for (size_t y2 = 0; y2 < b.terms[j - 1].size(); ++y2) {
              const Poly& entry = b.diff[j].at(y2, y);
              if (entry.is_zero()) continue;
              size_t rb2 = b.terms[j - 1].size();
              c.diff[k].at(dst_off + x * rb2 + y2, src_off + x * rb + y) =
                  c.diff[k].at(dst_off + x * rb2 + y2, src_off + x * rb + y) +
                  entry.reindex(map_b, na + nb).scaled(sgn);
            }
      }
    }
  }
  return c;
}

bool check_d_squared(const LineBundleComplex& c) {
  for (size_t k = 2; k < c.diff.size(); ++k)
    if (!c.diff[k - 1].mul(c.diff[k]).is_zero()) return false;
  return true;
}

bool check_homogeneity(const LineBundleComplex& c) {
  for (size_t k = 1; k < c.diff.size(); ++k) {
    for (size_t i = 0; i < c.terms[k].size(); ++i)
      for (size_t j = 0; j < c.terms[k - 1].size(); ++j) {
        for (const Monomial& t : c.diff[k].at(j, i).terms()) {
          // target class must equal source class + class of the exponent divisor
          IntVec src_div(c.nvars());
          for (size_t r = 0; r < c.nvars(); ++r) src_div[r] = c.terms[k][i].coeffs[r] + t.exp[r];
          if (!(pic_canonical_form(src_div, c.fan) == c.terms[k - 1][j])) return false;
        }
      }
  }
  return true;
}

namespace {

// try to match summands of degree k of a onto b respecting classes (or lifted
// supports when keyed_on_support) and entry patterns, extending the partial
// sign assignment; backtracking search
struct IsoSearch {
  const LineBundleComplex& a;
  const LineBundleComplex& b;
  bool by_support;
  std::vector<std::vector<size_t>> perm;  // per degree
  std::vector<std::vector<int>> unit;

  bool keys_equal(size_t k, size_t i, size_t j) const {
    if (by_support) return a.term_supports[k][i] == b.term_supports[k][j];
    return a.terms[k][i] == b.terms[k][j];
  }

  bool run() {
    size_t degs = a.terms.size();
    if (b.terms.size() != degs) return false;
    for (size_t k = 0; k < degs; ++k)
      if (a.terms[k].size() != b.terms[k].size()) return false;
    perm.assign(degs, {});
    unit.assign(degs, {});
    return place_degree(0);
  }

  bool place_degree(size_t k) {
    if (k == a.terms.size()) return check_units();
    size_t n = a.terms[k].size();
    std::vector<size_t> p(n, size_t(-1));
    std::vector<bool> used(n, false);
    return backtrack(k, 0, p, used);
  }

  bool backtrack(size_t k, size_t i, std::vector<size_t>& p, std::vector<bool>& used) {
    if (i == a.terms[k].size()) {
      perm[k] = p;
      if (place_degree(k + 1)) return true;
      return false;
    }
    for (size_t j = 0; j < p.size(); ++j) {
      if (used[j] || !keys_equal(k, i, j)) continue;
      // entry-pattern compatibility with the previous degree's permutation
      if (k >= 1 && !column_compatible(k, i, j)) continue;
      p[i] = j;
      used[j] = true;
      if (backtrack(k, i + 1, p, used)) return true;
      used[j] = false;
      p[i] = size_t(-1);
    }
    return false;
  }

  bool column_compatible(size_t k, size_t i, size_t j) const {
    // the column of a.diff[k] at i must match (up to global sign) the column of
    // b.diff[k] at j after applying perm[k-1] to rows
    for (size_t r = 0; r < a.terms[k - 1].size(); ++r) {
      const Poly& pa = a.diff[k].at(r, i);
      const Poly& pb = b.diff[k].at(perm[k - 1][r], j);
      if (pa.is_zero() != pb.is_zero()) return false;
      if (!pa.is_zero() && !(pa == pb) && !(pa == -pb)) return false;
    }
    return true;
  }

  bool check_units() {
    // signs: unit[k][i] with b[perm(j), perm(i)] = unit_j * unit_i * a[j, i]
    // 2-coloring over the summand graph
    struct Node {
      size_t k, i;
    };
    size_t total = 0;
    std::vector<size_t> off(a.terms.size());
    for (size_t k = 0; k < a.terms.size(); ++k) {
      off[k] = total;
      total += a.terms[k].size();
    }
    std::vector<int> sign(total, 0);
    std::vector<std::vector<std::pair<size_t, int>>> adj(total);
    for (size_t k = 1; k < a.diff.size(); ++k)
      for (size_t i = 0; i < a.terms[k].size(); ++i)
        for (size_t r = 0; r < a.terms[k - 1].size(); ++r) {
          const Poly& pa = a.diff[k].at(r, i);
          if (pa.is_zero()) continue;
          const Poly& pb = b.diff[k].at(perm[k - 1][r], perm[k][i]);
          int rel;
          if (pa == pb) rel = 1;
          else if (pa == -pb) rel = -1;
          else return false;
          adj[off[k] + i].push_back({off[k - 1] + r, rel});
          adj[off[k - 1] + r].push_back({off[k] + i, rel});
        }
    for (size_t s = 0; s < total; ++s) {
      if (sign[s] != 0) continue;
      sign[s] = 1;
      std::vector<size_t> stack{s};
      while (!stack.empty()) {
        size_t v = stack.back();
        stack.pop_back();
        for (auto [w, rel] : adj[v]) {
          int want = sign[v] * rel;
          if (sign[w] == 0) {
            sign[w] = want;
            stack.push_back(w);
          } else if (sign[w] != want) {
            return false;
          }
        }
      }
    }
    unit.assign(a.terms.size(), {});
    for (size_t k = 0; k < a.terms.size(); ++k)
      for (size_t i = 0; i < a.terms[k].size(); ++i) unit[k].push_back(sign[off[k] + i]);
    return true;
  }
};

}  // namespace

std::optional<ComplexIso> find_iso_up_to_units(const LineBundleComplex& a,
                                               const LineBundleComplex& b) {
  IsoSearch s{a, b, false, {}, {}};
  if (!s.run()) return std::nullopt;
  return ComplexIso{s.perm, s.unit};
}

namespace {

std::optional<ComplexIso> find_iso_by_support(const LineBundleComplex& a,
                                              const LineBundleComplex& b) {
  IsoSearch s{a, b, true, {}, {}};
  if (!s.run()) return std::nullopt;
  return ComplexIso{s.perm, s.unit};
}

StackyFan chart_subfan(const StackyFan& f, const std::vector<size_t>& removed,
                       std::vector<size_t>& reindex) {
  std::vector<bool> drop(f.nrays(), false);
  for (size_t r : removed) drop[r] = true;
  reindex.assign(f.nrays(), size_t(-1));
  std::vector<IntVec> rays;
  for (size_t r = 0; r < f.nrays(); ++r) {
    if (drop[r]) continue;
    reindex[r] = rays.size();
    rays.push_back(f.rays[r]);
  }
  std::vector<ConeKey> cones;
  for (const auto& c : f.cones) {
    bool keep = true;
    for (size_t r : c)
      if (drop[r]) keep = false;
    if (!keep) continue;
    ConeKey k;
    for (size_t r : c) k.push_back(reindex[r]);
    std::sort(k.begin(), k.end());
    cones.push_back(k);
  }
  return make_fan(f.rank_L, f.rank_N, f.beta, rays, cones);
}

LineBundleComplex reindex_complex(const LineBundleComplex& c, const StackyFan& new_fan,
                                  const std::vector<size_t>& reindex) {
  LineBundleComplex out;
  out.fan = new_fan;
  out.terms.assign(c.terms.size(), {});
  out.term_supports.assign(c.terms.size(), {});
  for (size_t k = 0; k < c.terms.size(); ++k) {
    for (const IntVec& sup : c.term_supports[k]) {
      IntVec ns(new_fan.nrays(), Int(0));
      for (size_t r = 0; r < sup.size(); ++r)
        if (reindex[r] != size_t(-1)) ns[reindex[r]] = sup[r];
      out.term_supports[k].push_back(ns);
      out.terms[k].push_back(pic_canonical_form(divisor_of_support({ns}), new_fan));
    }
  }
  out.diff.resize(c.diff.size());
  for (size_t k = 0; k < c.diff.size(); ++k)
    out.diff[k] = c.diff[k].reindex(reindex, new_fan.nrays());
  return out;
}

// the chart-side complex of a quiver: classes and variables in the chart fan
LineBundleComplex chart_complex_of_quiver(const ExitPathQuiver& q, const StackyFan& chart,
                                          const std::vector<size_t>& reindex) {
  return reindex_complex(complex_of_quiver(q), chart, reindex);
}

PolyMat iso_matrix(const ComplexIso& iso, size_t k, size_t n, size_t nvars) {
  // maps a -> b: row perm[k][i], column i, entry unit
  PolyMat m(n, n);
  for (size_t i = 0; i < n; ++i)
    m.at(iso.perm[k][i], i) = Poly::constant(Rat(iso.unit[k][i]), nvars);
  return m;
}

PolyMat iso_matrix_inv(const ComplexIso& iso, size_t k, size_t n, size_t nvars) {
  PolyMat m(n, n);
  for (size_t i = 0; i < n; ++i)
    m.at(i, iso.perm[k][i]) = Poly::constant(Rat(iso.unit[k][i]), nvars);
  return m;
}

}  // namespace

RestrictionResult restrict_to_chart(const AugmentedComplex& c, const std::vector<size_t>& rays) {
  if (!c.quiver) throw std::invalid_argument("restriction requires a quiver-backed complex");
  const ExitPathQuiver& q0 = *c.quiver;
  const StackyFan& X = c.phi.target;

  RestrictionResult out;
  std::vector<size_t> reindex;
  out.chart_fan = chart_subfan(X, rays, reindex);
  if (!smoothly_covered(out.chart_fan)) throw std::invalid_argument("NOT_SMOOTHLY_COVERED");
  out.restricted = reindex_complex(c.cx, out.chart_fan, reindex);

  size_t degs = out.restricted.terms.size();
  size_t nv = out.chart_fan.nrays();
  out.p.clear();
  out.inc.clear();
  out.h.clear();
  for (size_t k = 0; k < degs; ++k) {
    size_t n = out.restricted.terms[k].size();
    out.p.push_back(PolyMat::identity(n, nv));
    out.inc.push_back(PolyMat::identity(n, nv));
    size_t up = k + 1 < degs ? out.restricted.terms[k + 1].size() : 0;
    out.h.push_back(PolyMat(up, n));
  }

  ExitPathQuiver cur = q0;
  LineBundleComplex cur_cx = chart_complex_of_quiver(cur, out.chart_fan, reindex);
  std::vector<size_t> allowed = q0.torus.families;

  for (size_t rho : rays) {
    if (std::find(allowed.begin(), allowed.end(), rho) == allowed.end()) continue;  // no wall
    Matching match = rho_positive_matching(cur, rho);
    MorseQuiver mq = quiver_of(cur);
    QuiverSheaf sheaf = sheaf_of(cur);
    // move the sheaf into chart variables and classes
    sheaf.nvars = nv;
    for (auto& v : sheaf.values) v = v.reindex(reindex, nv);
    for (size_t s = 0; s < sheaf.objects.size(); ++s) {
      IntVec sup(nv, Int(0));
      const IntVec& full = cur.strata[s].support.values;
      for (size_t r = 0; r < full.size(); ++r)
        if (reindex[r] != size_t(-1)) sup[reindex[r]] = full[r];
      sheaf.objects[s] = pic_canonical_form(divisor_of_support({sup}), out.chart_fan);
    }
    MorseReductionResult red = morse_reduce(mq, sheaf, match);

    allowed.erase(std::remove(allowed.begin(), allowed.end(), rho), allowed.end());
    ExitPathQuiver next = build_quiver_families(cur.torus, allowed);
    LineBundleComplex next_cx = chart_complex_of_quiver(next, out.chart_fan, reindex);

    // identify the reduced complex with the freshly built coarse complex
    LineBundleComplex red_cx;
    red_cx.fan = out.chart_fan;
    red_cx.terms.assign(red.reduced.gens.size(), {});
    red_cx.term_supports.assign(red.reduced.gens.size(), {});
    for (size_t k = 0; k < red.reduced.gens.size(); ++k)
      for (size_t vid : red.reduced.gens[k]) {
        red_cx.terms[k].push_back(sheaf.objects[vid]);
        IntVec sup(nv, Int(0));
        const IntVec& full = cur.strata[vid].support.values;
        for (size_t r = 0; r < full.size(); ++r)
          if (reindex[r] != size_t(-1)) sup[reindex[r]] = full[r];
        red_cx.term_supports[k].push_back(sup);
      }
    red_cx.diff = red.reduced.d;
    if (red_cx.terms.size() != next_cx.terms.size())
      throw std::logic_error("reduced complex has unexpected length");
    auto iso = find_iso_up_to_units(red_cx, next_cx);
    if (!iso) throw std::logic_error("reduced complex does not match the coarse stratification");

    // compose: p' = iso . red.p . p ; i' = i . red.inc . iso^{-1} ; h' = h + i . red.h . p
    std::vector<PolyMat> np(degs), ni(degs), nh(degs);
    for (size_t k = 0; k < degs; ++k) {
      size_t red_n = red_cx.terms[k].size();
      PolyMat im = iso_matrix(*iso, k, red_n, nv);
      PolyMat imi = iso_matrix_inv(*iso, k, red_n, nv);
      np[k] = im.mul(red.p[k]).mul(out.p[k]);
      ni[k] = out.inc[k].mul(red.inc[k]).mul(imi);
      if (k + 1 < degs)
        nh[k] = out.h[k] + out.inc[k + 1].mul(red.h[k]).mul(out.p[k]);
      else
        nh[k] = out.h[k];
    }
    out.p = std::move(np);
    out.inc = std::move(ni);
    out.h = std::move(nh);
    cur = std::move(next);
    cur_cx = std::move(next_cx);
  }

  out.reduced = cur_cx;
  size_t pos = 0;
  for (const Stratum& s : cur.strata) {
    if (s.dim != 0) continue;
    if (s.id == cur.identity_stratum) break;
    ++pos;
  }
  out.reduced_alpha = pos;
  return out;
}

namespace {

struct TransportData {
  std::vector<std::pair<size_t, Int>> raymap;  // source ray -> (target ray, multiplier)
  IntMat beta_src_rays;                        // rank_N_src x nrays_src
  std::vector<IntVec> reps;                    // coset reps in M_src
  IntMat coker_basis_check;                    // phi^T for reducing reps
};

IntVec transport_support(const TransportData& td, const IntVec& support, const IntVec& rep,
                         size_t target_nrays) {
  IntVec out(target_nrays, Int(0));
  for (size_t r = 0; r < td.raymap.size(); ++r) {
    Int shift = 0;
    for (size_t i = 0; i < td.beta_src_rays.rows(); ++i)
      shift += rep[i] * td.beta_src_rays.at(i, r);
    out[td.raymap[r].first] = ceil_div(support[r] - shift, td.raymap[r].second);
  }
  return out;
}

}  // namespace

std::vector<PushforwardSummand> pushforward_finite_quotient_complex(const AugmentedComplex& c,
                                                                    const StackyMorphism& pi) {
  if (!c.quiver) throw std::invalid_argument("pushforward requires a quiver-backed complex");
  Classification cls = classify_stacky_morphism(pi);
  if (!cls.finite_quotient) throw std::invalid_argument("NOT_FINITE_QUOTIENT");
  if (!(pi.source == c.phi.target)) throw std::invalid_argument("quotient source differs from ambient fan");

  const ExitPathQuiver& q = *c.quiver;
  const StackyFan& Xp = pi.target;
  auto raymap = quotient_ray_map(pi);
  TransportData td;
  td.raymap = *raymap;
  td.beta_src_rays = pi.source.beta_ray_matrix();
  IntMat pit = pi.phi.transpose();
  CokernelDecomposition ck = cokernel_decomposition(pit, true);
  if (!ck.representatives_available) throw std::invalid_argument("NOT_FINITE_QUOTIENT");
  td.reps = ck.representatives;

  // canonical reduction of an element of M_src to a listed representative
  SmithResult snf = smith_normal_form(pit);
  SmithResult usmith = smith_normal_form(snf.u);
  IntMat uinv = usmith.v.mul(usmith.u);
  auto canonical_rep = [&](const IntVec& m) {
    IntVec y = snf.u.mul_vec(m);
    size_t n = y.size();
    for (size_t i = 0; i < n; ++i) {
      Int di = i < snf.rank ? snf.d.at(i, i) : Int(0);
      if (di != 0) {
        Int q0 = floor_div(y[i], di);
        y[i] -= q0 * di;
      }
    }
    return uinv.mul_vec(y);
  };

  // q-grading: image of the rep in M_Y modulo the Y-side quotient lattice
  IntMat phiT = c.phi.phi.transpose();  // M_X -> M_Y
  // the Y-side quotient lattice: phi_Y^T(M_Y') = phiT(pi^T-image) saturated by construction;
  // classes computed modulo phiT(pi^*(M_X'))
  IntMat y_lattice = phiT.mul(pit);  // M_X' -> M_Y
  HermiteResult y_h = hermite_normal_form(y_lattice.transpose());
  auto q_class = [&](const IntVec& m) { return reduce_mod_row_lattice(phiT.mul_vec(m), y_h); };

  // expanded summands: (stratum, rep) in a deterministic order
  struct Key {
    size_t dim;
    size_t stratum;
    size_t rep;
  };
  std::map<IntVec, std::vector<Key>> by_q;
  for (const Stratum& s : q.strata)
    for (size_t ri = 0; ri < td.reps.size(); ++ri) {
      IntVec qc = q_class(td.reps[ri]);
      by_q[qc].push_back({s.dim, s.id, ri});
    }

  IntMat fam_mat(q.torus.families.size(), q.torus.codim);
  for (size_t i = 0; i < q.torus.families.size(); ++i)
    for (size_t j = 0; j < q.torus.codim; ++j)
      fam_mat.at(i, j) = q.torus.ray_functionals[q.torus.families[i]][j];

  std::vector<PushforwardSummand> out;
  for (auto& [qc, keys] : by_q) {
    PushforwardSummand ps;
    ps.q_rep = qc;
    size_t maxdim = 0;
    for (const Key& k : keys) maxdim = std::max(maxdim, k.dim);
    ps.complex.fan = Xp;
    ps.complex.terms.assign(maxdim + 1, {});
    ps.complex.term_supports.assign(maxdim + 1, {});
    ps.provenance.assign(maxdim + 1, {});
    std::map<std::pair<size_t, size_t>, std::pair<size_t, size_t>> pos;  // (stratum, rep) -> (deg, idx)
    for (const Key& k : keys) {
      IntVec sup = transport_support(td, q.strata[k.stratum].support.values, td.reps[k.rep],
                                     Xp.nrays());
      pos[{k.stratum, k.rep}] = {k.dim, ps.complex.terms[k.dim].size()};
      ps.complex.terms[k.dim].push_back(pic_canonical_form(divisor_of_support({sup}), Xp));
      ps.complex.term_supports[k.dim].push_back(sup);
      ps.provenance[k.dim].push_back({k.stratum, td.reps[k.rep]});
    }
    ps.complex.diff.resize(maxdim + 1);
    for (size_t k = 0; k <= maxdim; ++k) {
      size_t rows = k == 0 ? 0 : ps.complex.terms[k - 1].size();
      ps.complex.diff[k] = PolyMat(rows, ps.complex.terms[k].size());
    }
    for (const ExitEdge& e : q.edges) {
      // positioned support of the destination lift
      IntVec pos_sup = q.strata[e.dst].support.values;
      for (size_t i = 0; i < q.torus.families.size(); ++i) {
        Int shift = 0;
        for (size_t j = 0; j < q.torus.codim; ++j) shift += fam_mat.at(i, j) * e.dst_translation[j];
        pos_sup[q.torus.families[i]] += shift;
      }
      for (size_t ri = 0; ri < td.reps.size(); ++ri) {
        auto it_src = pos.find({e.src, ri});
        if (it_src == pos.end()) continue;
        // the destination representative: rep + translation expressed in M_src
        IntVec mshift = td.reps[ri];
        for (size_t j = 0; j < q.torus.codim; ++j) {
          for (size_t i = 0; i < mshift.size(); ++i)
            mshift[i] += e.dst_translation[j] * q.torus.basis[j][i];
        }
        IntVec rep_dst = canonical_rep(mshift);
        size_t rj = td.reps.size();
        for (size_t x = 0; x < td.reps.size(); ++x)
          if (td.reps[x] == rep_dst) {
            rj = x;
            break;
          }
        if (rj == td.reps.size()) throw std::logic_error("destination representative not found");
        auto it_dst = pos.find({e.dst, rj});
        if (it_dst == pos.end()) throw std::logic_error("pushforward edge crosses q-classes");

        IntVec src_t = transport_support(td, q.strata[e.src].support.values, td.reps[ri],
                                         Xp.nrays());
        IntVec dst_t = transport_support(td, pos_sup, td.reps[ri], Xp.nrays());
        IntVec expo(Xp.nrays());
        for (size_t r = 0; r < Xp.nrays(); ++r) {
          expo[r] = src_t[r] - dst_t[r];
          if (expo[r] < 0) throw std::logic_error("negative transported exponent");
        }
        auto [kd, jd] = it_dst->second;
        auto [ks, js] = it_src->second;
        ps.complex.diff[ks].at(jd, js) =
            ps.complex.diff[ks].at(jd, js) + Poly({Rat(e.sign), expo});
      }
    }
    out.push_back(std::move(ps));
  }
  return out;
}

StackyMorphism torus_quotient_morphism(const StackyMorphism& phi, const std::vector<IntVec>& n_g) {
  const StackyFan& X = phi.target;
  const StackyFan& Y = phi.source;
  size_t k = n_g.size();
  IntMat g(X.rank_N, k);
  for (size_t j = 0; j < k; ++j)
    for (size_t i = 0; i < X.rank_N; ++i) g.at(i, j) = n_g[j][i];
  {
    SmithResult s = smith_normal_form(g);
    if (s.rank != k) throw std::invalid_argument("N_G generators dependent");
    for (size_t i = 0; i < k; ++i)
      if (s.d.at(i, i) != 1) throw std::invalid_argument("N_G not saturated");
  }
  // projection N_X -> N_X / N_G: last rows of U from U g = D
  SmithResult sx = smith_normal_form(g);
  IntMat proj_x(X.rank_N - k, X.rank_N);
  for (size_t i = 0; i < X.rank_N - k; ++i)
    for (size_t j = 0; j < X.rank_N; ++j) proj_x.at(i, j) = sx.u.at(k + i, j);

  // Y-side: preimage phi^{-1}(N_G), then the projection
  std::vector<IntVec> pre;
  for (size_t j = 0; j < k; ++j) {
    auto y = solve_int(phi.phi, n_g[j]);
    if (!y) throw std::invalid_argument("Y is not invariant under the torus");
    pre.push_back(*y);
  }
  IntMat gy(Y.rank_N, k);
  for (size_t j = 0; j < k; ++j)
    for (size_t i = 0; i < Y.rank_N; ++i) gy.at(i, j) = pre[j][i];
  SmithResult sy = smith_normal_form(gy);
  IntMat proj_y(Y.rank_N - k, Y.rank_N);
  for (size_t i = 0; i < Y.rank_N - k; ++i)
    for (size_t j = 0; j < Y.rank_N; ++j) proj_y.at(i, j) = sy.u.at(k + i, j);

  // phi' with phi' . proj_y = proj_x . phi
  IntMat phi2(X.rank_N - k, Y.rank_N - k);
  for (size_t j = 0; j < Y.rank_N - k; ++j) {
    IntVec e(Y.rank_N - k, Int(0));
    e[j] = 1;
    auto y = solve_int(proj_y, e);
    if (!y) throw std::logic_error("quotient projection not surjective");
    IntVec img = proj_x.mul_vec(phi.phi.mul_vec(*y));
    for (size_t i = 0; i < X.rank_N - k; ++i) phi2.at(i, j) = img[i];
  }

  StackyMorphism out;
  out.source = make_fan(Y.rank_L, Y.rank_N - k, proj_y.mul(Y.beta), Y.rays, Y.cones);
  out.target = make_fan(X.rank_L, X.rank_N - k, proj_x.mul(X.beta), X.rays, X.cones);
  out.Phi = phi.Phi;
  out.phi = phi2;
  return out;
}

bool pullback_torus_quotient_check(const StackyMorphism& phi, const std::vector<IntVec>& n_g) {
  StackyMorphism quotient = torus_quotient_morphism(phi, n_g);
  ExitPathQuiver qa = build_quiver(phi);
  ExitPathQuiver qb = build_quiver(quotient);
  LineBundleComplex ca = complex_of_quiver(qa);
  LineBundleComplex cb = complex_of_quiver(qb);
  // the two stacks share Cox data: compare supports and differentials
  return find_iso_by_support(ca, cb).has_value();
}

AugmentedComplex pullback_torus_quotient_complex(const AugmentedComplex& c,
                                                 const StackyMorphism& phi_upstairs) {
  const StackyFan& X = phi_upstairs.target;
  if (X.nrays() != c.cx.fan.nrays() || !(X.rays == c.cx.fan.rays))
    throw std::invalid_argument("ray data mismatch in torus pullback");
  AugmentedComplex out;
  out.phi = phi_upstairs;
  out.alpha = c.alpha;
  out.cx = c.cx;
  out.cx.fan = X;
  for (size_t k = 0; k < out.cx.terms.size(); ++k)
    for (size_t i = 0; i < out.cx.terms[k].size(); ++i)
      out.cx.terms[k][i] =
          pic_canonical_form(divisor_of_support({out.cx.term_supports[k][i]}), X);
  out.quiver = build_quiver(phi_upstairs);
  return out;
}

AugmentedComplex iflat_extend_complex(const AugmentedComplex& c, const StackyFan& big_fan) {
  const StackyFan& small = c.cx.fan;
  if (big_fan.rank_L != small.rank_L || big_fan.rank_N != small.rank_N ||
      !(big_fan.beta == small.beta))
    throw std::invalid_argument("NOT_EQUIV_CODIM_2: lattice data differs");
  // match small rays into big rays; every big ray with nonzero beta image must appear
  std::vector<size_t> embed(small.nrays(), size_t(-1));
  for (size_t r = 0; r < small.nrays(); ++r) {
    for (size_t s = 0; s < big_fan.nrays(); ++s)
      if (big_fan.rays[s] == small.rays[r]) {
        embed[r] = s;
        break;
      }
    if (embed[r] == size_t(-1))
      throw std::invalid_argument("NOT_EQUIV_CODIM_2: small fan ray missing upstairs");
  }
  for (size_t s = 0; s < big_fan.nrays(); ++s) {
    if (std::find(embed.begin(), embed.end(), s) != embed.end()) continue;
    if (!is_zero(big_fan.beta.mul_vec(big_fan.rays[s])))
      throw std::invalid_argument("NOT_EQUIV_CODIM_2");
  }
  AugmentedComplex out;
  out.phi = c.phi;
  out.phi.target = big_fan;
  out.alpha = c.alpha;
  out.cx = reindex_complex(c.cx, big_fan, embed);
  return out;
}

FiberReport fiber_exactness_check(const AugmentedComplex& c, size_t trials, uint64_t seed) {
  FiberReport rep;
  const StackyFan& X = c.cx.fan;
  // torus data straight from the lattice maps (the source fan may present only
  // the open torus of Y, e.g. after a codimension-two extension)
  ExitTorus torus;
  if (c.quiver) {
    torus = c.quiver->torus;
  } else {
    torus.phi = c.phi;
    torus.codim = c.phi.target.rank_N - c.phi.source.rank_N;
    torus.basis = kernel_saturated_basis(c.phi.phi.transpose());
    IntMat br = c.phi.target.beta_ray_matrix();
    for (size_t r = 0; r < c.phi.target.nrays(); ++r) {
      IntVec row(torus.codim);
      for (size_t i = 0; i < torus.codim; ++i) {
        Int v = 0;
        for (size_t k = 0; k < c.phi.target.rank_N; ++k) v += torus.basis[i][k] * br.at(k, r);
        row[i] = v;
      }
      torus.ray_functionals.push_back(std::move(row));
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> draw(1, 997);
  auto rand_rat = [&]() {
    Rat r(Int(draw(rng)), Int(draw(rng)));
    r.canonicalize();
    return r;
  };

  auto charts = X.maximal_cones();
  size_t on_target = std::max<size_t>(1, trials / 10);
  std::vector<size_t> dims(c.cx.terms.size());
  for (size_t k = 0; k < dims.size(); ++k) dims[k] = c.cx.terms[k].size();

  for (const auto& sigma : charts) {
    // chart coordinates: variables on sigma's rays, others specialised to 1
    std::vector<size_t> reindex(X.nrays(), size_t(-1));
    for (size_t i = 0; i < sigma.size(); ++i) reindex[sigma[i]] = i;
    std::vector<PolyMat> spec(c.cx.diff.size());
    for (size_t k = 0; k < c.cx.diff.size(); ++k)
      spec[k] = c.cx.diff[k].reindex(reindex, sigma.size());

    // functionals of the torus restricted to the chart variables
    std::vector<IntVec> fun;
    for (size_t j = 0; j < torus.codim; ++j) {
      IntVec row(sigma.size());
      for (size_t i = 0; i < sigma.size(); ++i) row[i] = torus.ray_functionals[sigma[i]][j];
      fun.push_back(row);
    }
    auto on_y = [&](const RatVec& x) {
      for (const IntVec& row : fun) {
        Rat prod = 1;
        for (size_t i = 0; i < x.size(); ++i) {
          if (row[i] == 0) continue;
          if (!row[i].fits_slong_p()) throw std::overflow_error("functional too large");
          long e = row[i].get_si();
          Rat b = x[i];
          if (e < 0) {
            b = 1 / b;
            e = -e;
          }
          for (long t = 0; t < e; ++t) prod *= b;
        }
        if (prod != 1) return false;
      }
      return true;
    };

    auto is_complex_at = [&](const std::vector<RatMat>& ev) {
      for (size_t k = 2; k < ev.size(); ++k) {
        RatMat sq = ev[k - 1].mul(ev[k]);
        for (size_t i = 0; i < sq.rows(); ++i)
          for (size_t j = 0; j < sq.cols(); ++j)
            if (sq.at(i, j) != 0) return false;
      }
      return true;
    };

    for (size_t t = 0; t < trials; ++t) {
      RatVec x(sigma.size());
      for (auto& v : x) v = rand_rat();
      bool y = on_y(x);
      std::vector<RatMat> ev(spec.size());
      for (size_t k = 0; k < spec.size(); ++k) ev[k] = spec[k].eval(x);
      if (!is_complex_at(ev)) {
        rep.ok = false;
        rep.failures.push_back("specialized differential does not square to zero");
        ++rep.trials_run;
        continue;
      }
      std::vector<size_t> h = homology_dims(ev, dims);
      ++rep.trials_run;
      if (y) {
        if (h[0] != 1) {
          rep.ok = false;
          rep.failures.push_back("on-Y point with dim H_0 != 1");
        }
      } else {
        for (size_t k = 0; k < h.size(); ++k)
          if (h[k] != 0) {
            rep.ok = false;
            rep.failures.push_back("off-Y point with nonzero H_" + std::to_string(k));
            break;
          }
      }
    }

    // forced on-Y points: solve the monomial equations by parametrising the
    // torus of Y through the chart; requires a unimodular chart (variety case)
    IntMat rays_mat = IntMat::from_cols(X.cone_gens(sigma));
    IntMat beta_rays = X.beta.mul(rays_mat);
    bool variety_chart = sigma.size() == X.rank_N && beta_rays.rows() == beta_rays.cols();
    if (variety_chart) {
      SmithResult s = smith_normal_form(beta_rays);
      for (size_t i = 0; i < s.rank; ++i)
        if (s.d.at(i, i) != 1) variety_chart = false;
      if (s.rank != beta_rays.rows()) variety_chart = false;
    }
    if (variety_chart) {
      // x_rho = prod_j s_j^{e(rho, j)}, e = <m_rho, phi(f_j)> with m the dual basis
      size_t dy = c.phi.source.rank_N;
      for (size_t t = 0; t < on_target; ++t) {
        RatVec svals(dy);
        for (auto& v : svals) v = rand_rat();
        RatVec x(sigma.size(), Rat(1));
        for (size_t i = 0; i < sigma.size(); ++i) {
          // m_i = i-th row of beta_rays^{-1}; exponent on s_j: (m_i, phi f_j)
          for (size_t j = 0; j < dy; ++j) {
            IntVec fj(dy, Int(0));
            fj[j] = 1;
            IntVec img = c.phi.phi.mul_vec(fj);
            auto lam = solve_int(beta_rays, img);
            if (!lam) throw std::logic_error("chart solve failed");
            Int e = (*lam)[i];
            if (!e.fits_slong_p()) throw std::overflow_error("exponent too large");
            long ee = e.get_si();
            Rat b = svals[j];
            if (ee < 0) {
              b = 1 / b;
              ee = -ee;
            }
            for (long u = 0; u < ee; ++u) x[i] *= b;
          }
        }
        if (!on_y(x)) {
          rep.ok = false;
          rep.failures.push_back("forced on-Y point failed the membership test");
          continue;
        }
        std::vector<RatMat> ev(spec.size());
        for (size_t k = 0; k < spec.size(); ++k) ev[k] = spec[k].eval(x);
        std::vector<size_t> h = homology_dims(ev, dims);
        ++rep.trials_run;
        if (h[0] != 1) {
          rep.ok = false;
          rep.failures.push_back("forced on-Y point with dim H_0 != 1");
        }
      }
    }
  }
  return rep;
}

bool koszul_compare(const RestrictionResult& r, const AugmentedComplex& original) {
  const StackyFan& chart = r.chart_fan;
  // local model: saturated binomial lattice of the restricted torus directions
  ExitTorus torus = original.quiver ? original.quiver->torus : exit_torus(original.phi);
  size_t c = torus.codim;
  // exponents of the torus characters on the chart variables
  std::vector<size_t> chart_rays;  // indices into the original ray list
  {
    const StackyFan& X = original.phi.target;
    for (const IntVec& ray : chart.rays) {
      size_t found = X.nrays();
      for (size_t rr = 0; rr < X.nrays(); ++rr)
        if (X.rays[rr] == ray) {
          found = rr;
          break;
        }
      if (found == X.nrays()) throw std::invalid_argument("NO_LOCAL_MODEL");
      chart_rays.push_back(found);
    }
  }
  IntMat e_mat(c, chart.nrays());
  for (size_t j = 0; j < c; ++j)
    for (size_t i = 0; i < chart.nrays(); ++i)
      e_mat.at(j, i) = torus.ray_functionals[chart_rays[i]][j];
  // saturation of the row space (double kernel)
  std::vector<IntVec> ker = kernel_saturated_basis(e_mat);
  IntMat ker_mat(ker.size(), chart.nrays());
  for (size_t i = 0; i < ker.size(); ++i)
    for (size_t j = 0; j < chart.nrays(); ++j) ker_mat.at(i, j) = ker[i][j];
  std::vector<IntVec> binoms = kernel_saturated_basis(ker_mat);
  if (binoms.size() != rank_int(e_mat)) throw std::logic_error("local model rank mismatch");

  // chart cover quotient: cover = coordinate fan on the chart rays,
  // transported by ceil((F - <m, e_rho>)/1) over coker(phi_chart^T)
  size_t n = chart.nrays();
  IntMat beta_chart_rays = chart.beta_ray_matrix();
  TransportData td;
  for (size_t i = 0; i < n; ++i) td.raymap.push_back({i, Int(1)});
  td.beta_src_rays = IntMat::identity(n);
  IntMat phi_chart(chart.rank_N, n);  // N-side map of the cover quotient
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < chart.rank_N; ++j) phi_chart.at(j, i) = beta_chart_rays.at(j, i);
  CokernelDecomposition ck = cokernel_decomposition(phi_chart.transpose(), true);
  if (!ck.representatives_available) throw std::invalid_argument("NO_LOCAL_MODEL");
  td.reps = ck.representatives;

  // Koszul quiver on subsets of the binomials, with supports on the cover
  size_t nb = binoms.size();
  LineBundleComplex expected;
  expected.fan = chart;
  expected.terms.assign(nb + 1, {});
  expected.term_supports.assign(nb + 1, {});
  std::vector<IntVec> subset_support(size_t(1) << nb);
  std::vector<std::pair<size_t, size_t>> spos(size_t(1) << nb);
  auto positive_part = [&](const IntVec& v) {
    IntVec w(n, Int(0));
    for (size_t i = 0; i < n; ++i) w[i] = v[i] > 0 ? v[i] : Int(0);
    return w;
  };
  auto negative_part = [&](const IntVec& v) {
    IntVec w(n, Int(0));
    for (size_t i = 0; i < n; ++i) w[i] = v[i] < 0 ? -v[i] : Int(0);
    return w;
  };
  // expanded summand positions per (subset, rep)
  std::map<std::pair<size_t, size_t>, std::pair<size_t, size_t>> pos;
  for (size_t mask = 0; mask < (size_t(1) << nb); ++mask) {
    IntVec sup(n, Int(0));
    size_t lvl = 0;
    for (size_t j = 0; j < nb; ++j)
      if (mask & (size_t(1) << j)) {
        sup = add(sup, positive_part(binoms[j]));
        ++lvl;
      }
    subset_support[mask] = sup;
    for (size_t ri = 0; ri < td.reps.size(); ++ri) {
      IntVec tsup = transport_support(td, sup, td.reps[ri], n);
      pos[{mask, ri}] = {lvl, expected.terms[lvl].size()};
      expected.terms[lvl].push_back(pic_canonical_form(divisor_of_support({tsup}), chart));
      expected.term_supports[lvl].push_back(tsup);
    }
  }
  expected.diff.resize(nb + 1);
  for (size_t k = 0; k <= nb; ++k) {
    size_t rows = k == 0 ? 0 : expected.terms[k - 1].size();
    expected.diff[k] = PolyMat(rows, expected.terms[k].size());
  }
  // canonical rep reduction for the cover quotient
  SmithResult snf = smith_normal_form(phi_chart.transpose());
  SmithResult usm = smith_normal_form(snf.u);
  IntMat uinv = usm.v.mul(usm.u);
  auto canonical_rep = [&](const IntVec& m) {
    IntVec y = snf.u.mul_vec(m);
    for (size_t i = 0; i < y.size(); ++i) {
      Int di = i < snf.rank ? snf.d.at(i, i) : Int(0);
      if (di != 0) y[i] -= floor_div(y[i], di) * di;
    }
    return uinv.mul_vec(y);
  };
  auto rep_index = [&](const IntVec& m) {
    IntVec r0 = canonical_rep(m);
    for (size_t x = 0; x < td.reps.size(); ++x)
      if (td.reps[x] == r0) return x;
    throw std::logic_error("representative lookup failed");
  };
  for (size_t mask = 0; mask < (size_t(1) << nb); ++mask) {
    size_t before = 0;
    for (size_t j = 0; j < nb; ++j) {
      if (!(mask & (size_t(1) << j))) continue;
      size_t sub = mask & ~(size_t(1) << j);
      int ksign = before % 2 == 0 ? 1 : -1;
      ++before;
      for (size_t ri = 0; ri < td.reps.size(); ++ri) {
        auto [ks, js] = pos[{mask, ri}];
        IntVec src_t = transport_support(td, subset_support[mask], td.reps[ri], n);
        // edge (a): positioned destination = canonical subset support
        {
          auto [kd, jd] = pos[{sub, ri}];
          (void)kd;
          IntVec dst_t = transport_support(td, subset_support[sub], td.reps[ri], n);
          IntVec expo = sub_exponent(src_t, dst_t);
          expected.diff[ks].at(jd, js) =
              expected.diff[ks].at(jd, js) + Poly({Rat(ksign), expo});
        }
        // edge (b): positioned destination = subset support translated by binom_j;
        // on the cover M_src = Z^n, so the representative shifts by binom_j itself
        {
          IntVec shifted = add(subset_support[sub], binoms[j]);
          IntVec dst_t = transport_support(td, shifted, td.reps[ri], n);
          IntVec m2 = td.reps[ri];
          for (size_t i = 0; i < n; ++i) m2[i] += binoms[j][i];
          size_t rj = rep_index(m2);
          auto [kd, jd] = pos[{sub, rj}];
          (void)kd;
          IntVec expo = sub_exponent(src_t, dst_t);
          expected.diff[ks].at(jd, js) =
              expected.diff[ks].at(jd, js) + Poly({Rat(-ksign), expo});
        }
      }
    }
  }
  return find_iso_up_to_units(r.reduced, expected).has_value();
}

}  // namespace toricres
