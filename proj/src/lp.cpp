#include "toricres/lp.hpp"

#include <stdexcept>

namespace toricres {

namespace {

// Dictionary-based simplex on:  maximize c.y  s.t.  M y = r, y >= 0.
// Bland's rule, exact rationals.
struct Dictionary {
  // basis[i] = variable index of row i; tableau row: y_basis[i] = rhs[i] - sum tab[i][j] y_j (nonbasic j)
  size_t nvars;
  std::vector<std::vector<Rat>> tab;  // m x nvars (columns for all vars; basic columns are unit)
  std::vector<Rat> rhs;
  std::vector<size_t> basis;

  bool pivot_to_optimal(RatVec& obj, Rat& obj_const) {
    // obj is expressed over all variables; reduce through basis each iteration
    size_t m = tab.size();
    for (;;) {
      // reduced costs: substitute basic variables out of obj
      RatVec red = obj;
      Rat cval = obj_const;
      for (size_t i = 0; i < m; ++i) {
        if (red[basis[i]] == 0) continue;
        Rat f = red[basis[i]];
        for (size_t j = 0; j < nvars; ++j) {
          if (tab[i][j] == 0) continue;
          red[j] -= f * tab[i][j];
        }
        cval += f * rhs[i];
      }
      // entering: smallest index with positive reduced cost (maximization)
      size_t enter = nvars;
      for (size_t j = 0; j < nvars; ++j)
        if (red[j] > 0) {
          enter = j;
          break;
        }
      if (enter == nvars) {
        obj = red;
        obj_const = cval;
        return true;  // optimal
      }
      // leaving: min ratio, Bland tie-break by basis variable index
      size_t leave = m;
      Rat best;
      for (size_t i = 0; i < m; ++i) {
        if (tab[i][enter] <= 0) continue;
        Rat ratio = rhs[i] / tab[i][enter];
        if (leave == m || ratio < best ||
            (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m) return false;  // unbounded
      pivot(leave, enter);
    }
  }

  void pivot(size_t row, size_t col) {
    Rat p = tab[row][col];
    for (size_t j = 0; j < nvars; ++j) tab[row][j] /= p;
    rhs[row] /= p;
    for (size_t i = 0; i < tab.size(); ++i) {
      if (i == row || tab[i][col] == 0) continue;
      Rat f = tab[i][col];
      for (size_t j = 0; j < nvars; ++j) tab[i][j] -= f * tab[row][j];
      rhs[i] -= f * rhs[row];
    }
    basis[row] = col;
  }
};

}  // namespace

LpResult lp_solve(const LinearProgram& lp) {
  // variables: x = u - w with u, w >= 0, slack s >= 0 per <= row
  size_t n = lp.nvars;
  size_t mle = lp.le.size(), meq = lp.eq.size();
  size_t m = mle + meq;
  size_t nv = 2 * n + mle + m;  // u, w, slacks, artificials
  size_t art0 = 2 * n + mle;

  Dictionary d;
  d.nvars = nv;
  d.tab.assign(m, std::vector<Rat>(nv, Rat(0)));
  d.rhs.assign(m, Rat(0));
  d.basis.assign(m, 0);

  auto fill_row = [&](size_t i, const RatVec& a, const Rat& b, bool with_slack) {
    for (size_t j = 0; j < n; ++j) {
      d.tab[i][j] = a[j];
      d.tab[i][n + j] = -a[j];
    }
    if (with_slack) d.tab[i][2 * n + i] = 1;
    d.rhs[i] = b;
  };
  for (size_t i = 0; i < mle; ++i) fill_row(i, lp.le[i].first, lp.le[i].second, true);
  for (size_t i = 0; i < meq; ++i) fill_row(mle + i, lp.eq[i].first, lp.eq[i].second, false);
  // make rhs non-negative, add artificials as the initial basis
  for (size_t i = 0; i < m; ++i) {
    if (d.rhs[i] < 0) {
      for (size_t j = 0; j < nv; ++j) d.tab[i][j] = -d.tab[i][j];
      d.rhs[i] = -d.rhs[i];
    }
    d.tab[i][art0 + i] = 1;
    d.basis[i] = art0 + i;
  }

  // phase 1: maximize -sum(artificials)
  RatVec p1(nv, Rat(0));
  for (size_t i = 0; i < m; ++i) p1[art0 + i] = -1;
  Rat c1 = 0;
  if (!d.pivot_to_optimal(p1, c1)) throw std::logic_error("phase-1 unbounded");
  if (c1 != 0) return {LpStatus::Infeasible, Rat(0), {}};
  // drive remaining artificials out of the basis (degenerate rows)
  for (size_t i = 0; i < m; ++i) {
    if (d.basis[i] < art0) continue;
    size_t enter = art0;
    for (size_t j = 0; j < art0; ++j)
      if (d.tab[i][j] != 0) {
        enter = j;
        break;
      }
    if (enter < art0) d.pivot(i, enter);
    // else the row is identically zero; harmless
  }
  // forbid artificials from re-entering by zeroing their columns
  for (size_t i = 0; i < m; ++i)
    for (size_t j = art0; j < nv; ++j) d.tab[i][j] = 0;

  // phase 2
  RatVec p2(nv, Rat(0));
  for (size_t j = 0; j < n; ++j) {
    p2[j] = lp.objective[j];
    p2[n + j] = -lp.objective[j];
  }
  Rat c2 = 0;
  if (!d.pivot_to_optimal(p2, c2)) return {LpStatus::Unbounded, Rat(0), {}};

  RatVec y(nv, Rat(0));
  for (size_t i = 0; i < m; ++i)
    if (d.basis[i] < nv) y[d.basis[i]] = d.rhs[i];
  RatVec x(n);
  for (size_t j = 0; j < n; ++j) x[j] = y[j] - y[n + j];
  Rat val = 0;
  for (size_t j = 0; j < n; ++j) val += lp.objective[j] * x[j];
  return {LpStatus::Optimal, val, x};
}

bool in_cone(const RatVec& q, const std::vector<RatVec>& gens) {
  if (q.empty()) return true;
  size_t dim = q.size();
  // feasibility: G lambda = q, lambda >= 0; encode lambda as the first vars
  LinearProgram lp;
  lp.nvars = gens.size();
  lp.objective.assign(lp.nvars, Rat(0));
  for (size_t i = 0; i < dim; ++i) {
    RatVec row(lp.nvars);
    for (size_t g = 0; g < gens.size(); ++g) row[g] = gens[g][i];
    lp.eq.push_back({row, q[i]});
  }
  for (size_t g = 0; g < gens.size(); ++g) {
    RatVec row(lp.nvars, Rat(0));
    row[g] = -1;
    lp.le.push_back({row, Rat(0)});  // -lambda_g <= 0
  }
  return lp_solve(lp).status == LpStatus::Optimal;
}

bool in_cone(const IntVec& q, const std::vector<IntVec>& gens) {
  RatVec qr(q.size());
  for (size_t i = 0; i < q.size(); ++i) qr[i] = Rat(q[i]);
  std::vector<RatVec> gr;
  gr.reserve(gens.size());
  for (const auto& g : gens) {
    RatVec v(g.size());
    for (size_t i = 0; i < g.size(); ++i) v[i] = Rat(g[i]);
    gr.push_back(std::move(v));
  }
  return in_cone(qr, gr);
}

std::optional<RatVec> interior_point(const OpenPolyhedron& p) {
  // maximize t subject to: strict rows with slack t, t <= 1
  size_t n = p.nvars;
  LinearProgram lp;
  lp.nvars = n + 1;
  lp.objective.assign(n + 1, Rat(0));
  lp.objective[n] = 1;
  auto extend = [&](const RatVec& a, const Rat& tcoef) {
    RatVec row(n + 1, Rat(0));
    for (size_t j = 0; j < n; ++j) row[j] = a[j];
    row[n] = tcoef;
    return row;
  };
  for (const auto& [a, b] : p.eq) lp.eq.push_back({extend(a, Rat(0)), b});
  for (const auto& [a, b] : p.lt) lp.le.push_back({extend(a, Rat(1)), b});
  for (const auto& [a, b] : p.gt) {
    RatVec neg(a.size());
    for (size_t j = 0; j < a.size(); ++j) neg[j] = -a[j];
    lp.le.push_back({extend(neg, Rat(1)), -b});
  }
  for (const auto& [a, b] : p.le) lp.le.push_back({extend(a, Rat(0)), b});
  {
    RatVec row(n + 1, Rat(0));
    row[n] = 1;
    lp.le.push_back({row, Rat(1)});  // bound t
  }
  LpResult r = lp_solve(lp);
  if (r.status != LpStatus::Optimal || r.value <= 0) return std::nullopt;
  RatVec x(n);
  for (size_t j = 0; j < n; ++j) x[j] = r.x[j];
  return x;
}

}  // namespace toricres
