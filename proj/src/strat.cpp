#include "toricres/strat.hpp"

#include <algorithm>
#include <stdexcept>

#include "toricres/lp.hpp"

namespace toricres {

namespace {

RatVec to_rat(const IntVec& v) {
  RatVec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
  return r;
}

// bounds of a . w over the unit box [0,1]^c
std::pair<Int, Int> box_range(const IntVec& a) {
  Int lo = 0, hi = 0;
  for (const Int& x : a) {
    if (x < 0) lo += x;
    else hi += x;
  }
  return {lo, hi};
}

struct CellData {
  std::vector<bool> active;  // per family
  IntVec values;             // per family: level if active, else F = ceil(a.w)
  RatVec sample;
};

// deterministic orientation basis of the linear span of a cell:
// reduced-echelon basis of the null space of the active functionals
std::vector<RatVec> orientation_basis(const std::vector<IntVec>& active_rows, size_t c) {
  RatMat m(active_rows.size(), c);
  for (size_t i = 0; i < active_rows.size(); ++i)
    for (size_t j = 0; j < c; ++j) m.at(i, j) = Rat(active_rows[i][j]);
  return nullspace_rat(m);
}

Rat det_sign_matrix(RatMat g) {
  size_t n = g.rows();
  Rat det = 1;
  for (size_t k = 0; k < n; ++k) {
    size_t piv = n;
    for (size_t r = k; r < n; ++r)
      if (g.at(r, k) != 0) {
        piv = r;
        break;
      }
    if (piv == n) return Rat(0);
    if (piv != k) {
      for (size_t c0 = 0; c0 < n; ++c0) std::swap(g.at(piv, c0), g.at(k, c0));
      det = -det;
    }
    det *= g.at(k, k);
    for (size_t r = k + 1; r < n; ++r) {
      if (g.at(r, k) == 0) continue;
      Rat f = g.at(r, k) / g.at(k, k);
      for (size_t c0 = k; c0 < n; ++c0) g.at(r, c0) -= f * g.at(k, c0);
    }
  }
  return det;
}

struct Enumerator {
  std::vector<IntVec> rows;  // family functionals
  size_t c = 0;
  std::vector<CellData> found;

  std::optional<RatVec> feasible(const CellData& cell, size_t depth) const {
    OpenPolyhedron p;
    p.nvars = c;
    for (size_t i = 0; i < depth; ++i) {
      RatVec a = to_rat(rows[i]);
      Rat v(cell.values[i]);
      if (cell.active[i]) {
        p.eq.push_back({a, v});
      } else {
        p.lt.push_back({a, v});
        p.gt.push_back({a, v - 1});
      }
    }
    for (size_t j = 0; j < c; ++j) {
      RatVec e(c, Rat(0));
      e[j] = 1;
      p.le.push_back({e, Rat(1)});
      RatVec ne(c, Rat(0));
      ne[j] = -1;
      p.le.push_back({ne, Rat(0)});
    }
    return interior_point(p);
  }

  void dfs(size_t depth, CellData& cell) {
    auto pt = feasible(cell, depth);
    if (!pt) return;
    if (depth == rows.size()) {
      cell.sample = *pt;
      found.push_back(cell);
      return;
    }
    auto [lo, hi] = box_range(rows[depth]);
    for (Int k = lo; k <= hi; k += 1) {
      cell.active[depth] = true;
      cell.values[depth] = k;
      dfs(depth + 1, cell);
    }
    for (Int k = lo + 1; k <= hi; k += 1) {
      cell.active[depth] = false;
      cell.values[depth] = k;  // a.w in (k-1, k)
      dfs(depth + 1, cell);
    }
  }

  void run() {
    CellData cell;
    cell.active.assign(rows.size(), false);
    cell.values.assign(rows.size(), Int(0));
    dfs(0, cell);
  }
};

ExitPathQuiver quiver_for_families(const ExitTorus& t, std::vector<Stratum> strata,
                                   const std::vector<size_t>& fams);

}  // namespace

ExitTorus exit_torus(const StackyMorphism& phi) {
  Classification cls = classify_stacky_morphism(phi);
  if (!cls.immersion) throw std::invalid_argument("NOT_IMMERSION");
  CokernelDecomposition ck = cokernel_decomposition(phi.phi, false);
  if (!ck.torsion.empty()) throw std::invalid_argument("TORSION_COKERNEL");
  ExitTorus t;
  t.phi = phi;
  t.codim = phi.target.rank_N - phi.source.rank_N;
  t.basis = kernel_saturated_basis(phi.phi.transpose());
  if (t.basis.size() != t.codim) throw std::logic_error("kernel basis dimension mismatch");
  IntMat br = phi.target.beta_ray_matrix();
  for (size_t r = 0; r < phi.target.nrays(); ++r) {
    IntVec row(t.codim);
    for (size_t i = 0; i < t.codim; ++i) {
      Int v = 0;
      for (size_t k = 0; k < phi.target.rank_N; ++k) v += t.basis[i][k] * br.at(k, r);
      row[i] = v;
    }
    if (is_zero(row)) t.inactive_rays.push_back(r);
    else t.families.push_back(r);
    t.ray_functionals.push_back(std::move(row));
  }
  return t;
}

std::vector<Stratum> enumerate_strata(const ExitTorus& t, size_t codim_bound) {
  return enumerate_strata_families(t, t.families, codim_bound);
}

std::vector<Stratum> enumerate_strata_families(const ExitTorus& t,
                                               const std::vector<size_t>& use_families,
                                               size_t codim_bound) {
  size_t c = t.codim;
  if (c > codim_bound) throw std::invalid_argument("CODIM_LIMIT");
  const StackyFan& X = t.phi.target;

  auto full_support = [&](const IntVec& fvals) {
    SupportFunction s;
    s.values.assign(X.nrays(), Int(0));
    for (size_t i = 0; i < use_families.size(); ++i) s.values[use_families[i]] = fvals[i];
    return s;
  };

  if (c == 0) {
    Stratum s;
    s.id = 0;
    s.dim = 0;
    s.support = full_support({});
    s.bundle = pic_canonical_form(divisor_of_support(s.support), X);
    return {s};
  }

  Enumerator en;
  en.c = c;
  for (size_t f : use_families) en.rows.push_back(t.ray_functionals[f]);
  {
    RatMat m(en.rows.size(), c);
    for (size_t i = 0; i < en.rows.size(); ++i)
      for (size_t j = 0; j < c; ++j) m.at(i, j) = Rat(en.rows[i][j]);
    if (rank_rat(m) != c)
      throw std::invalid_argument("NOT_SMOOTHLY_COVERED: ray functionals do not span");
  }
  en.run();

  // torus classes keyed by (active pattern, family values reduced modulo the
  // translation lattice A.Z^c); canonical lift = least (values, sample)
  IntMat a_mat(en.rows.size(), c);
  for (size_t i = 0; i < en.rows.size(); ++i)
    for (size_t j = 0; j < c; ++j) a_mat.at(i, j) = en.rows[i][j];
  HermiteResult trans = hermite_normal_form(a_mat.transpose());

  // canonical lifts prefer samples in the half-open box [0,1)^c, then least
  // (values, sample); this keeps the identity stratum at the zero lift
  auto half_open = [&](const CellData& cell) {
    for (const Rat& x : cell.sample)
      if (x >= 1) return false;
    return true;
  };
  auto better_than = [&](const CellData& a, const CellData& b) {
    bool ha = half_open(a), hb = half_open(b);
    if (ha != hb) return ha;
    int cv = cmp(a.values, b.values);
    if (cv != 0) return cv < 0;
    for (size_t j = 0; j < c; ++j)
      if (a.sample[j] != b.sample[j]) return a.sample[j] < b.sample[j];
    return false;
  };
  std::map<std::pair<std::vector<bool>, IntVec>, CellData> classes;
  for (const CellData& cell : en.found) {
    auto key = std::make_pair(cell.active, reduce_mod_row_lattice(cell.values, trans));
    auto it = classes.find(key);
    if (it == classes.end()) {
      classes.emplace(key, cell);
      continue;
    }
    if (better_than(cell, it->second)) it->second = cell;
  }

  std::vector<Stratum> strata;
  for (auto& [key, cell] : classes) {
    Stratum s;
    std::vector<IntVec> act_rows;
    for (size_t i = 0; i < use_families.size(); ++i)
      if (cell.active[i]) {
        s.active.push_back(use_families[i]);
        act_rows.push_back(en.rows[i]);
      }
    RatMat m(act_rows.size(), c);
    for (size_t i = 0; i < act_rows.size(); ++i)
      for (size_t j = 0; j < c; ++j) m.at(i, j) = Rat(act_rows[i][j]);
    s.dim = c - rank_rat(m);
    s.sample = cell.sample;
    s.family_values = cell.values;
    s.support = full_support(cell.values);
    s.bundle = pic_canonical_form(divisor_of_support(s.support), X);
    strata.push_back(std::move(s));
  }
  std::sort(strata.begin(), strata.end(), [](const Stratum& a, const Stratum& b) {
    if (a.dim != b.dim) return a.dim > b.dim;
    for (size_t j = 0; j < a.sample.size(); ++j)
      if (a.sample[j] != b.sample[j]) return a.sample[j] < b.sample[j];
    return cmp(a.family_values, b.family_values) < 0;
  });
  for (size_t i = 0; i < strata.size(); ++i) strata[i].id = i;
  return strata;
}

namespace {

ExitPathQuiver quiver_for_families(const ExitTorus& t, std::vector<Stratum> strata,
                                   const std::vector<size_t>& fams) {
  ExitPathQuiver q;
  q.torus = t;
  q.strata = std::move(strata);
  size_t c = t.codim;
  const StackyFan& X = t.phi.target;

  if (c == 0 || q.strata.empty()) return q;

  std::vector<IntVec> rows;
  for (size_t f : fams) rows.push_back(t.ray_functionals[f]);
  IntMat a_mat(rows.size(), c);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < c; ++j) a_mat.at(i, j) = rows[i][j];
  HermiteResult trans = hermite_normal_form(a_mat.transpose());

  // the identity stratum: all walls active, torus class of the zero lift
  for (const Stratum& s : q.strata)
    if (s.active.size() == fams.size() &&
        is_zero(reduce_mod_row_lattice(s.family_values, trans)))
      q.identity_stratum = s.id;

  std::map<std::pair<std::vector<bool>, IntVec>, size_t> lookup;
  auto active_pattern = [&](const std::vector<size_t>& act) {
    std::vector<bool> p(fams.size(), false);
    for (size_t i = 0; i < fams.size(); ++i)
      p[i] = std::find(act.begin(), act.end(), fams[i]) != act.end();
    return p;
  };
  for (const Stratum& s : q.strata)
    lookup[{active_pattern(s.active), reduce_mod_row_lattice(s.family_values, trans)}] = s.id;

  for (const Stratum& src : q.strata) {
    if (src.dim == 0) continue;
    std::vector<bool> act = active_pattern(src.active);
    std::vector<IntVec> act_rows;
    for (size_t i = 0; i < fams.size(); ++i)
      if (act[i]) act_rows.push_back(rows[i]);
    std::vector<RatVec> src_basis = orientation_basis(act_rows, c);

    std::set<std::pair<std::vector<bool>, IntVec>> seen;
    RatMat act_mat(act_rows.size(), c);
    for (size_t r0 = 0; r0 < act_rows.size(); ++r0)
      for (size_t j = 0; j < c; ++j) act_mat.at(r0, j) = Rat(act_rows[r0][j]);
    size_t act_rank = rank_rat(act_mat);
    for (size_t i = 0; i < fams.size(); ++i) {
      if (act[i]) continue;
      {  // skip families constant on the stratum span
        RatMat aug(act_rows.size() + 1, c);
        for (size_t r0 = 0; r0 < act_rows.size(); ++r0)
          for (size_t j = 0; j < c; ++j) aug.at(r0, j) = Rat(act_rows[r0][j]);
        for (size_t j = 0; j < c; ++j) aug.at(act_rows.size(), j) = Rat(rows[i][j]);
        if (rank_rat(aug) == act_rank) continue;
      }
      for (int side = 0; side < 2; ++side) {
        // side 0: lower crossing a_i.w = F_i - 1; side 1: upper a_i.w = F_i
        Int bound = src.family_values[i] - (side == 0 ? 1 : 0);

        std::vector<IntVec> eq_rows = act_rows;
        eq_rows.push_back(rows[i]);
        RatVec eq_vals;
        for (size_t r0 = 0; r0 < fams.size(); ++r0)
          if (act[r0]) eq_vals.push_back(Rat(src.family_values[r0]));
        eq_vals.push_back(Rat(bound));

        std::vector<bool> facet_active = act;
        facet_active[i] = true;
        IntVec facet_values = src.family_values;
        facet_values[i] = bound;  // the ceiling at an exact wall value is the value itself

        OpenPolyhedron p;
        p.nvars = c;
        for (size_t r0 = 0; r0 < eq_rows.size(); ++r0)
          p.eq.push_back({to_rat(eq_rows[r0]), eq_vals[r0]});
        bool empty = false;
        for (size_t j = 0; j < fams.size() && !empty; ++j) {
          if (facet_active[j] || j == i) continue;
          RatMat base(eq_rows.size(), c);
          for (size_t r0 = 0; r0 < eq_rows.size(); ++r0)
            for (size_t k = 0; k < c; ++k) base.at(r0, k) = Rat(eq_rows[r0][k]);
          RatMat aug(eq_rows.size() + 1, c);
          for (size_t r0 = 0; r0 < eq_rows.size(); ++r0)
            for (size_t k = 0; k < c; ++k) aug.at(r0, k) = Rat(eq_rows[r0][k]);
          for (size_t k = 0; k < c; ++k) aug.at(eq_rows.size(), k) = Rat(rows[j][k]);
          if (rank_rat(aug) == rank_rat(base)) {
            // row j is constant on the facet hyperplane; compute the value
            RatMat sys(c, eq_rows.size());
            for (size_t r0 = 0; r0 < eq_rows.size(); ++r0)
              for (size_t k = 0; k < c; ++k) sys.at(k, r0) = Rat(eq_rows[r0][k]);
            auto x = solve_rat(sys, to_rat(rows[j]));
            if (!x) throw std::logic_error("inconsistent facet system");
            Rat v = 0;
            for (size_t r0 = 0; r0 < eq_rows.size(); ++r0) v += (*x)[r0] * eq_vals[r0];
            Rat fj(src.family_values[j]);
            if (v == fj) {
              facet_active[j] = true;
            } else if (v == fj - 1) {
              facet_active[j] = true;
              facet_values[j] = src.family_values[j] - 1;
            } else if (v > fj || v < fj - 1) {
              empty = true;
            }
          } else {
            p.lt.push_back({to_rat(rows[j]), Rat(src.family_values[j])});
            p.gt.push_back({to_rat(rows[j]), Rat(src.family_values[j] - 1)});
          }
        }
        if (empty) continue;
        if (!interior_point(p)) continue;
        if (!seen.insert({facet_active, facet_values}).second) continue;

        auto it = lookup.find({facet_active, reduce_mod_row_lattice(facet_values, trans)});
        if (it == lookup.end()) throw std::logic_error("facet stratum not found");
        const Stratum& dst = q.strata[it->second];

        IntVec diff = sub(facet_values, dst.family_values);
        auto z = solve_int(a_mat, diff);
        if (!z) throw std::logic_error("facet translation not integral");

        ExitEdge e;
        e.src = src.id;
        e.dst = dst.id;
        e.dst_translation = *z;
        e.exponent.assign(X.nrays(), Int(0));
        for (size_t r0 = 0; r0 < fams.size(); ++r0) {
          Int d = src.family_values[r0] - facet_values[r0];
          if (d < 0) throw std::logic_error("negative boundary exponent");
          e.exponent[fams[r0]] = d;
        }
        for (size_t r0 = 0; r0 < fams.size(); ++r0)
          if (facet_active[r0] && !act[r0]) e.newly_active.push_back(fams[r0]);

        // incidence sign: outward normal followed by the facet orientation,
        // expressed in the stratum orientation
        std::vector<IntVec> facet_rows;
        for (size_t r0 = 0; r0 < fams.size(); ++r0)
          if (facet_active[r0]) facet_rows.push_back(rows[r0]);
        std::vector<RatVec> dst_basis = orientation_basis(facet_rows, c);
        size_t d0 = src_basis.size();
        if (dst_basis.size() != d0 - 1) throw std::logic_error("facet dimension mismatch");
        RatVec n(c, Rat(0));
        for (const RatVec& b : src_basis) {
          Rat coef = 0;
          for (size_t k = 0; k < c; ++k) coef += Rat(rows[i][k]) * b[k];
          for (size_t k = 0; k < c; ++k) n[k] += coef * b[k];
        }
        if (side == 0)
          for (size_t k = 0; k < c; ++k) n[k] = -n[k];
        RatMat bs(c, d0);
        for (size_t col = 0; col < d0; ++col)
          for (size_t k = 0; k < c; ++k) bs.at(k, col) = src_basis[col][k];
        RatMat xm(d0, d0);
        auto put_col = [&](size_t col, const RatVec& vec) {
          auto xc = solve_rat(bs, vec);
          if (!xc) throw std::logic_error("vector outside stratum span");
          for (size_t k = 0; k < d0; ++k) xm.at(k, col) = (*xc)[k];
        };
        put_col(0, n);
        for (size_t col = 0; col + 1 < d0; ++col) put_col(col + 1, dst_basis[col]);
        Rat det = det_sign_matrix(xm);
        if (det == 0) throw std::logic_error("degenerate orientation comparison");
        e.sign = det > 0 ? 1 : -1;
        q.edges.push_back(std::move(e));
      }
    }
  }
  return q;
}

}  // namespace

ExitPathQuiver exit_path_quiver(const ExitTorus& t, std::vector<Stratum> strata) {
  return quiver_for_families(t, std::move(strata), t.families);
}

ExitPathQuiver build_quiver(const StackyMorphism& phi, size_t codim_bound) {
  ExitTorus t = exit_torus(phi);
  return exit_path_quiver(t, enumerate_strata(t, codim_bound));
}

ExitPathQuiver build_quiver_families(const ExitTorus& t, const std::vector<size_t>& use_families,
                                     size_t codim_bound) {
  return quiver_for_families(t, enumerate_strata_families(t, use_families, codim_bound),
                             use_families);
}

SupportFunction bondal_support(const StackyFan& f, const RatVec& m) {
  IntMat br = f.beta_ray_matrix();
  SupportFunction s;
  s.values.resize(f.nrays());
  for (size_t r = 0; r < f.nrays(); ++r) {
    Rat v = 0;
    for (size_t i = 0; i < f.rank_N; ++i) v += m[i] * Rat(br.at(i, r));
    s.values[r] = ceil_rat(v);
  }
  return s;
}

std::set<DivisorClass> thomsen_collection(const StackyFan& f) {
  if (!smoothly_covered(f)) throw std::invalid_argument("NOT_SMOOTHLY_COVERED");
  ExitTorus t = exit_torus(identity_point_morphism(f));
  std::set<DivisorClass> out;
  for (const Stratum& s : enumerate_strata(t, f.rank_N)) out.insert(s.bundle);
  return out;
}

}  // namespace toricres
