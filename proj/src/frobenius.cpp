#include "toricres/frobenius.hpp"

#include <algorithm>
#include <stdexcept>

#include "toricres/lp.hpp"

namespace toricres {

namespace {

bool beta_unimodular(const StackyFan& f) {
  if (f.rank_L != f.rank_N) return false;
  SmithResult s = smith_normal_form(f.beta);
  if (s.rank != f.rank_N) return false;
  for (size_t i = 0; i < s.rank; ++i)
    if (s.d.at(i, i) != 1) return false;
  return true;
}

std::vector<IntVec> coset_system(size_t dim, const Int& ell) {
  std::vector<IntVec> out;
  IntVec m(dim, Int(0));
  bool done = dim == 0;
  if (dim == 0) return {IntVec{}};
  while (!done) {
    out.push_back(m);
    size_t i = 0;
    for (; i < dim; ++i) {
      m[i] += 1;
      if (m[i] < ell) break;
      m[i] = 0;
    }
    if (i == dim) done = true;
  }
  return out;
}

}  // namespace

FrobDecomposition frob_pushforward(const StackyFan& f, const IntVec& divisor, const Int& ell) {
  if (ell < 1) throw std::invalid_argument("ell must be positive");
  if (!beta_unimodular(f)) throw std::invalid_argument("frobenius requires a smooth variety fan");
  FrobDecomposition out;
  out.ell = ell;
  out.source = pic_canonical_form(divisor, f);
  IntMat br = f.beta_ray_matrix();  // rays in N coordinates
  for (const IntVec& m : coset_system(f.rank_N, ell)) {
    IntVec d(f.nrays());
    for (size_t r = 0; r < f.nrays(); ++r) {
      Int pairing = 0;
      for (size_t i = 0; i < f.rank_N; ++i) pairing += m[i] * br.at(i, r);
      d[r] = floor_div(divisor[r] - pairing, ell);
    }
    out.summands[pic_canonical_form(d, f)] += 1;
  }
  return out;
}

FrobSet frob_set(const StackyFan& f, const IntVec& divisor, size_t max_rounds) {
  // base period: lcm of |det| over all maximal-rank ray subsets (wall vertices
  // of the Bondal arrangement have denominators dividing these)
  IntMat br = f.beta_ray_matrix();
  size_t d = f.rank_N;
  Int period = 1;
  std::vector<size_t> idx(f.nrays());
  for (size_t i = 0; i < f.nrays(); ++i) idx[i] = i;
  std::vector<size_t> comb(d);
  auto rec = [&](auto&& self, size_t start, size_t k) -> void {
    if (k == d) {
      IntMat m(d, d);
      for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) m.at(i, j) = br.at(i, comb[j]);
      SmithResult s = smith_normal_form(m);
      if (s.rank == d) {
        Int det = 1;
        for (size_t i = 0; i < d; ++i) det *= s.d.at(i, i);
        period = lcm(period, det);
      }
      return;
    }
    for (size_t i = start; i < f.nrays(); ++i) {
      comb[k] = i;
      self(self, i + 1, k + 1);
    }
  };
  if (d > 0) rec(rec, 0, 0);

  FrobSet out;
  out.period = period;
  out.rounds = max_rounds;
  std::set<DivisorClass> prev2, prev1;
  for (size_t round = 1; round <= max_rounds; ++round) {
    Int ell = period * Int(round);
    FrobDecomposition dec = frob_pushforward(f, divisor, ell);
    prev2 = prev1;
    prev1 = out.classes;
    for (const auto& [c, mult] : dec.summands) out.classes.insert(c);
  }
  out.stabilized = out.classes == prev1 && prev1 == prev2;
  return out;
}

PicCoords pic_coordinates(const StackyFan& f) {
  // Pic = Z^nrays / rowspace(beta_ray_matrix); free part coordinates from SNF
  IntMat rel = f.beta_ray_matrix().transpose();  // columns span the relation lattice
  SmithResult s = smith_normal_form(rel);
  for (size_t i = 0; i < s.rank; ++i)
    if (s.d.at(i, i) != 1) throw std::invalid_argument("PIC_NOT_FREE");
  PicCoords pc;
  pc.rank = f.nrays() - s.rank;
  pc.proj = IntMat(pc.rank, f.nrays());
  for (size_t i = 0; i < pc.rank; ++i)
    for (size_t j = 0; j < f.nrays(); ++j) pc.proj.at(i, j) = s.u.at(s.rank + i, j);
  return pc;
}

PicCoords pic_coordinates_in_basis(const StackyFan& f, const std::vector<IntVec>& basis_divisors) {
  PicCoords canon = pic_coordinates(f);
  size_t r = canon.rank;
  if (basis_divisors.size() != r) throw std::invalid_argument("wrong basis size");
  IntMat b(r, r);  // canonical coordinates of the chosen basis, as columns
  for (size_t j = 0; j < r; ++j) {
    IntVec col = canon.proj.mul_vec(basis_divisors[j]);
    for (size_t i = 0; i < r; ++i) b.at(i, j) = col[i];
  }
  SmithResult s = smith_normal_form(b);
  for (size_t i = 0; i < s.rank; ++i)
    if (s.d.at(i, i) != 1) throw std::invalid_argument("divisors do not form a Pic basis");
  if (s.rank != r) throw std::invalid_argument("divisors do not form a Pic basis");
  // b^{-1} = v . u (since u b v = id)
  IntMat binv = s.v.mul(s.u);
  PicCoords pc;
  pc.rank = r;
  pc.proj = binv.mul(canon.proj);
  return pc;
}

Zonotope zonotope_vertices(const StackyFan& f, const PicCoords& pc) {
  Zonotope z;
  z.dim = pc.rank;
  for (size_t r = 0; r < f.nrays(); ++r) {
    IntVec d(f.nrays(), Int(0));
    d[r] = -1;
    z.generators.push_back(pc.proj.mul_vec(d));
  }
  size_t n = z.generators.size();
  // facets: normals orthogonal to (dim-1)-subsets of generators
  std::set<IntVec> normals;
  if (z.dim == 0) {
    z.vertices.push_back(IntVec{});
    return z;
  }
  if (z.dim == 1) {
    normals.insert(IntVec{Int(1)});
  } else {
    std::vector<size_t> comb(z.dim - 1);
    auto rec = [&](auto&& self, size_t start, size_t k) -> void {
      if (k == z.dim - 1) {
        RatMat m(z.dim - 1, z.dim);
        for (size_t i = 0; i < z.dim - 1; ++i)
          for (size_t j = 0; j < z.dim; ++j) m.at(i, j) = Rat(z.generators[comb[i]][j]);
        auto ns = nullspace_rat(m);
        if (ns.size() == 1) {
          IntVec nrm = integerize(ns[0]);
          // canonical sign: first nonzero positive
          for (const Int& x : nrm) {
            if (x > 0) break;
            if (x < 0) {
              nrm = scale(Int(-1), nrm);
              break;
            }
          }
          normals.insert(nrm);
        }
        return;
      }
      for (size_t i = start; i < n; ++i) {
        comb[k] = i;
        self(self, i + 1, k + 1);
      }
    };
    rec(rec, 0, 0);
  }
  for (const IntVec& nrm : normals) {
    Int hi = 0, lo = 0;
    for (const IntVec& g : z.generators) {
      Int v = dot(nrm, g);
      if (v > 0) hi += v;
      else lo += v;
    }
    z.facets.push_back({nrm, hi});
    z.facets.push_back({scale(Int(-1), nrm), -lo});
  }
  // vertices: extreme points among the (deduplicated) subset sums
  std::set<IntVec> sums;
  std::vector<IntVec> acc{IntVec(z.dim, Int(0))};
  for (const IntVec& g : z.generators) {
    std::vector<IntVec> next;
    for (const IntVec& a : acc) {
      next.push_back(a);
      next.push_back(add(a, g));
    }
    std::set<IntVec> dedup(next.begin(), next.end());
    acc.assign(dedup.begin(), dedup.end());
  }
  sums.insert(acc.begin(), acc.end());
  std::vector<IntVec> pts(sums.begin(), sums.end());
  for (size_t i = 0; i < pts.size(); ++i) {
    // vertex test: tight on dim linearly independent facets
    std::vector<IntVec> tight;
    for (const auto& fac : z.facets)
      if (dot(fac.normal, pts[i]) == fac.offset) tight.push_back(fac.normal);
    if (tight.empty()) continue;
    RatMat m(tight.size(), z.dim);
    for (size_t a = 0; a < tight.size(); ++a)
      for (size_t b = 0; b < z.dim; ++b) m.at(a, b) = Rat(tight[a][b]);
    if (rank_rat(m) == z.dim) z.vertices.push_back(pts[i]);
  }
  std::sort(z.vertices.begin(), z.vertices.end(),
            [](const IntVec& a, const IntVec& b) { return cmp(a, b) < 0; });
  return z;
}

bool zonotope_contains(const Zonotope& z, const RatVec& p) {
  for (const auto& fac : z.facets)
    if (dot_rat(fac.normal, p) > Rat(fac.offset)) return false;
  return true;
}

bool star_contains(const Zonotope& z, const RatVec& p, const RatVec& x) {
  if (!zonotope_contains(z, p)) throw std::invalid_argument("POINT_OUTSIDE_Z");
  if (!zonotope_contains(z, x)) return false;
  if (x == p) return true;
  // max t with p + t (x - p) in Z must exceed 1
  bool unbounded = true;
  Rat tmax;
  for (const auto& fac : z.facets) {
    Rat dir = dot_rat(fac.normal, x) - dot_rat(fac.normal, p);
    if (dir <= 0) continue;
    Rat t = (Rat(fac.offset) - dot_rat(fac.normal, p)) / dir;
    if (unbounded || t < tmax) {
      tmax = t;
      unbounded = false;
    }
  }
  return unbounded || tmax > 1;
}

std::vector<IntVec> star_lattice_points(const Zonotope& z, const RatVec& p) {
  if (!zonotope_contains(z, p)) throw std::invalid_argument("POINT_OUTSIDE_Z");
  std::vector<IntVec> out;
  if (z.dim == 0) return {IntVec{}};
  IntVec lo(z.dim), hi(z.dim);
  for (size_t j = 0; j < z.dim; ++j) {
    lo[j] = z.vertices[0][j];
    hi[j] = z.vertices[0][j];
    for (const IntVec& v : z.vertices) {
      lo[j] = std::min(lo[j], v[j]);
      hi[j] = std::max(hi[j], v[j]);
    }
  }
  IntVec cur = lo;
  for (;;) {
    RatVec x(z.dim);
    for (size_t j = 0; j < z.dim; ++j) x[j] = Rat(cur[j]);
    if (star_contains(z, p, x)) out.push_back(cur);
    size_t j = 0;
    for (; j < z.dim; ++j) {
      cur[j] += 1;
      if (cur[j] <= hi[j]) break;
      cur[j] = lo[j];
    }
    if (j == z.dim) break;
  }
  return out;
}

bool translated_cone_contains(const Zonotope& z, const RatVec& p, const RatVec& q) {
  if (!zonotope_contains(z, p)) throw std::invalid_argument("POINT_OUTSIDE_Z");
  std::vector<RatVec> gens;
  for (const IntVec& v : z.vertices) {
    RatVec g(z.dim);
    for (size_t j = 0; j < z.dim; ++j) g[j] = p[j] - Rat(v[j]);
    gens.push_back(g);
  }
  RatVec diff(z.dim);
  for (size_t j = 0; j < z.dim; ++j) diff[j] = q[j] - p[j];
  return in_cone(diff, gens);
}

bool is_complete(const StackyFan& f) {
  if (f.rank_L == 0) return true;
  auto maxc = f.maximal_cones();
  if (maxc.empty()) return false;
  for (const auto& c : maxc)
    if (c.size() != f.rank_L) return false;
  // every facet of a maximal cone is shared by exactly two maximal cones
  std::map<ConeKey, size_t> count;
  for (const auto& c : maxc)
    for (size_t drop = 0; drop < c.size(); ++drop) {
      ConeKey face;
      for (size_t i = 0; i < c.size(); ++i)
        if (i != drop) face.push_back(c[i]);
      count[face] += 1;
    }
  for (const auto& [face, n] : count)
    if (n != 2) return false;
  return true;
}

std::vector<size_t> cohomology_dims(const StackyFan& f, const IntVec& divisor) {
  if (f.rank_L == 0) return {1};  // the point: H^0 = k
  if (!is_complete(f)) throw std::invalid_argument("cohomology requires a complete fan");
  IntMat br = f.beta_ray_matrix();
  size_t d = f.rank_N;
  // degree box: hull of all solutions of d independent equations
  // <m, u_rho> = -a_rho, inflated by one
  std::vector<RatVec> corners;
  std::vector<size_t> comb(d);
  auto rec = [&](auto&& self, size_t start, size_t k) -> void {
    if (k == d) {
      RatMat m(d, d);
      RatVec rhs(d);
      for (size_t i = 0; i < d; ++i) {
        for (size_t j = 0; j < d; ++j) m.at(i, j) = Rat(br.at(j, comb[i]));
        rhs[i] = Rat(-divisor[comb[i]]);
      }
      if (rank_rat(m) == d) {
        auto x = solve_rat(m, rhs);
        if (x) corners.push_back(*x);
      }
      return;
    }
    for (size_t i = start; i < f.nrays(); ++i) {
      comb[k] = i;
      self(self, i + 1, k + 1);
    }
  };
  rec(rec, 0, 0);
  if (corners.empty()) throw std::logic_error("no corner degrees found");
  IntVec lo(d), hi(d);
  for (size_t j = 0; j < d; ++j) {
    lo[j] = floor_rat(corners[0][j]) - 1;
    hi[j] = ceil_rat(corners[0][j]) + 1;
    for (const auto& c : corners) {
      lo[j] = std::min(lo[j], Int(floor_rat(c[j]) - 1));
      hi[j] = std::max(hi[j], Int(ceil_rat(c[j]) + 1));
    }
  }

  auto maxc = f.maximal_cones();
  size_t g = maxc.size();
  std::vector<std::vector<bool>> in_cone_rays(g, std::vector<bool>(f.nrays(), false));
  for (size_t i = 0; i < g; ++i)
    for (size_t r : maxc[i]) in_cone_rays[i][r] = true;

  std::vector<size_t> h(d + 1, 0);
  IntVec m = lo;
  for (;;) {
    // feasibility per maximal cone: <m, u_rho> >= -a_rho for rays of the cone
    std::vector<bool> feas_ray(f.nrays());
    for (size_t r = 0; r < f.nrays(); ++r) {
      Int v = 0;
      for (size_t i = 0; i < d; ++i) v += m[i] * br.at(i, r);
      feas_ray[r] = v >= -divisor[r];
    }
    // Cech complex over nonempty subsets I of the cover; the intersection cone
    // has ray set = intersection of the ray sets
    size_t nsub = size_t(1) << g;
    std::vector<char> feas(nsub, 0);
    for (size_t mask = 1; mask < nsub; ++mask) {
      std::vector<bool> common(f.nrays(), true);
      for (size_t i = 0; i < g; ++i)
        if (mask & (size_t(1) << i))
          for (size_t r = 0; r < f.nrays(); ++r) common[r] = common[r] && in_cone_rays[i][r];
      bool ok = true;
      for (size_t r = 0; r < f.nrays() && ok; ++r)
        if (common[r] && !feas_ray[r]) ok = false;
      feas[mask] = ok ? 1 : 0;
    }
    // ranks of the Cech differential degreewise
    std::vector<std::vector<size_t>> by_card(g + 1);
    for (size_t mask = 1; mask < nsub; ++mask) {
      if (!feas[mask]) continue;
      by_card[size_t(__builtin_popcountll(mask))].push_back(mask);
    }
    std::vector<RatMat> cech(g + 1);
    for (size_t p = 1; p < g; ++p) {
      // map C^{p-1} -> C^p: from card p to card p+1
      const auto& rows = by_card[p + 1];
      const auto& cols = by_card[p];
      RatMat mat(rows.size(), cols.size());
      for (size_t a = 0; a < rows.size(); ++a) {
        size_t big = rows[a];
        size_t pos = 0;
        for (size_t i = 0; i < g; ++i) {
          if (!(big & (size_t(1) << i))) continue;
          size_t small = big & ~(size_t(1) << i);
          if (feas[small]) {
            for (size_t b = 0; b < cols.size(); ++b)
              if (cols[b] == small) mat.at(a, b) = (pos % 2 == 0) ? Rat(1) : Rat(-1);
          }
          ++pos;
        }
      }
      cech[p] = mat;
    }
    std::vector<size_t> dims(g);
    for (size_t p = 0; p < g; ++p) dims[p] = by_card[p + 1].size();
    // cohomology of the cochain complex C^0 -> C^1 -> ...
    std::vector<size_t> ranks(g + 1, 0);
    for (size_t p = 1; p < g; ++p)
      if (cech[p].rows() > 0 && cech[p].cols() > 0) ranks[p] = rank_rat(cech[p]);
    for (size_t p = 0; p < g; ++p) {
      size_t rk_out = (p + 1 < g) ? ranks[p + 1] : 0;
      size_t rk_in = ranks[p];
      size_t hp = dims[p] - rk_out - rk_in;
      if (p <= d) h[p] += hp;
      else if (hp != 0) throw std::logic_error("cohomology above the dimension");
    }
    size_t j = 0;
    for (; j < d; ++j) {
      m[j] += 1;
      if (m[j] <= hi[j]) break;
      m[j] = lo[j];
    }
    if (j == d) break;
  }
  return h;
}

bool cohomology_nonvanishing(const StackyFan& f, const IntVec& divisor, IntVec* witness_degree) {
  (void)witness_degree;
  std::vector<size_t> h = cohomology_dims(f, divisor);
  for (size_t v : h)
    if (v > 0) return true;
  return false;
}

std::vector<StackyMorphism> linear_inclusions(const StackyFan& f, size_t max_rank) {
  std::vector<StackyMorphism> out;
  std::set<std::vector<IntVec>> seen;  // canonical lattice bases

  auto consider = [&](const std::vector<size_t>& span_rays) {
    // the saturated lattice spanned by the chosen rays
    IntMat m(span_rays.size(), f.rank_L);
    for (size_t i = 0; i < span_rays.size(); ++i)
      for (size_t j = 0; j < f.rank_L; ++j) m.at(i, j) = f.rays[span_rays[i]][j];
    size_t k = rank_int(m);
    if (k > max_rank) return;
    // saturated basis via double kernel
    std::vector<IntVec> kerb = kernel_saturated_basis(m);
    IntMat kerm(kerb.size(), f.rank_L);
    for (size_t i = 0; i < kerb.size(); ++i)
      for (size_t j = 0; j < f.rank_L; ++j) kerm.at(i, j) = kerb[i][j];
    std::vector<IntVec> basis = kernel_saturated_basis(kerm);
    // canonical key
    IntMat bm(basis.size(), f.rank_L);
    for (size_t i = 0; i < basis.size(); ++i)
      for (size_t j = 0; j < f.rank_L; ++j) bm.at(i, j) = basis[i][j];
    HermiteResult hh = hermite_normal_form(bm);
    std::vector<IntVec> key;
    for (size_t i = 0; i < hh.rank; ++i) key.push_back(hh.h.row(i));
    if (!seen.insert(key).second) return;

    // equations of the span
    std::vector<IntVec> eqs = kerb;
    auto in_span = [&](const IntVec& v) {
      for (const auto& e : eqs)
        if (dot(e, v) != 0) return false;
      return true;
    };

    // Y rays and cones
    std::vector<size_t> yrays;
    for (size_t r = 0; r < f.nrays(); ++r)
      if (in_span(f.rays[r])) yrays.push_back(r);
    std::vector<ConeKey> ycones;
    for (const auto& c : f.cones) {
      bool inside = true;
      for (size_t r : c)
        if (!in_span(f.rays[r])) inside = false;
      if (inside) ycones.push_back(c);
    }

    // immersion condition: the span must meet every cone in a face
    for (const auto& c : f.cones) {
      size_t subsets = size_t(1) << c.size();
      for (size_t mask = 1; mask < subsets; ++mask) {
        ConeKey face;
        for (size_t b = 0; b < c.size(); ++b)
          if (mask & (size_t(1) << b)) face.push_back(c[b]);
        bool face_in = true;
        for (size_t r : face)
          if (!in_span(f.rays[r])) face_in = false;
        if (face_in) continue;
        // relint(face) must avoid the span
        OpenPolyhedron p;
        p.nvars = face.size();
        for (const auto& e : eqs) {
          RatVec row(face.size());
          for (size_t i = 0; i < face.size(); ++i) row[i] = Rat(dot(e, f.rays[face[i]]));
          p.eq.push_back({row, Rat(0)});
        }
        for (size_t i = 0; i < face.size(); ++i) {
          RatVec row(face.size(), Rat(0));
          row[i] = 1;
          p.gt.push_back({row, Rat(0)});
        }
        if (interior_point(p)) return;  // span slices a cone interior
      }
    }

    // build the Y fan on the sublattice
    size_t dimY = basis.size();
    IntMat bmat(f.rank_L, dimY);
    for (size_t j = 0; j < dimY; ++j)
      for (size_t i = 0; i < f.rank_L; ++i) bmat.at(i, j) = basis[j][i];
    std::vector<IntVec> yray_coords;
    std::vector<size_t> yindex(f.nrays(), size_t(-1));
    for (size_t i = 0; i < yrays.size(); ++i) {
      auto coords = solve_int(bmat, f.rays[yrays[i]]);
      if (!coords) return;  // not in the saturated lattice (cannot happen)
      yindex[yrays[i]] = i;
      yray_coords.push_back(*coords);
    }
    std::vector<ConeKey> ycones_local;
    for (const auto& c : ycones) {
      ConeKey k2;
      for (size_t r : c) k2.push_back(yindex[r]);
      std::sort(k2.begin(), k2.end());
      ycones_local.push_back(k2);
    }
    StackyFan yfan = make_fan(dimY, dimY, IntMat::identity(dimY), yray_coords, ycones_local);
    if (!is_complete(yfan)) return;  // convex (complete) support required

    StackyMorphism mor;
    mor.source = yfan;
    mor.target = f;
    mor.Phi = bmat;
    // N-side: the same matrix composed through beta (variety case: beta = id)
    mor.phi = f.beta.mul(bmat);
    out.push_back(std::move(mor));
  };

  // all ray subsets (distinct spans are deduplicated inside)
  size_t nsub = size_t(1) << f.nrays();
  consider({});  // the identity point
  for (size_t mask = 1; mask < nsub; ++mask) {
    std::vector<size_t> rays;
    for (size_t r = 0; r < f.nrays(); ++r)
      if (mask & (size_t(1) << r)) rays.push_back(r);
    consider(rays);
  }
  std::stable_sort(out.begin(), out.end(), [](const StackyMorphism& a, const StackyMorphism& b) {
    return a.source.rank_N < b.source.rank_N;
  });
  return out;
}

IntVec pullback_divisor_linear(const StackyMorphism& incl, const IntVec& divisor) {
  // rays of Y are rays of X inside the span; forget the rest
  IntVec out(incl.source.nrays());
  for (size_t i = 0; i < incl.source.nrays(); ++i) {
    IntVec img = incl.Phi.mul_vec(incl.source.rays[i]);
    size_t found = incl.target.nrays();
    for (size_t r = 0; r < incl.target.nrays(); ++r)
      if (incl.target.rays[r] == img) {
        found = r;
        break;
      }
    if (found == incl.target.nrays()) throw std::logic_error("linear inclusion ray mismatch");
    out[i] = divisor[found];
  }
  return out;
}

GenerationReport generation_report(const StackyFan& f, const IntVec& divisor,
                                   bool verify_multiplicity, const Int& ell) {
  if (!is_complete(f)) throw std::invalid_argument("generation report requires a complete fan");
  GenerationReport rep;
  rep.divisor = divisor;
  rep.unobstructed = true;
  for (const StackyMorphism& incl : linear_inclusions(f)) {
    GenerationEntry e;
    e.dim_y = incl.source.rank_N;
    for (size_t i = 0; i < incl.source.nrays(); ++i) {
      IntVec img = incl.Phi.mul_vec(incl.source.rays[i]);
      for (size_t r = 0; r < f.nrays(); ++r)
        if (f.rays[r] == img) e.rays.push_back(r);
    }
    std::sort(e.rays.begin(), e.rays.end());
    IntVec pulled = pullback_divisor_linear(incl, divisor);
    std::vector<size_t> h = cohomology_dims(incl.source, pulled);
    size_t total = 0;
    for (size_t v : h) total += v;
    e.nonzero_homs = total > 0;
    if (verify_multiplicity) {
      // dim Hom(O_Y, F_ell* O(D)) = ell^k dim Hom(O_Y, O(D))
      size_t k = f.rank_N - incl.source.rank_N;
      FrobDecomposition dec = frob_pushforward(f, divisor, ell);
      Int lhs = 0;
      for (const auto& [cls, mult] : dec.summands) {
        IntVec pe = pullback_divisor_linear(incl, cls.coeffs);
        std::vector<size_t> hh = cohomology_dims(incl.source, pe);
        size_t tot = 0;
        for (size_t v : hh) tot += v;
        lhs += mult * Int(tot);
      }
      Int factor = 1;
      for (size_t i = 0; i < k; ++i) factor *= ell;
      e.multiplicity_identity_checked = true;
      e.multiplicity_identity_holds = lhs == factor * Int(total);
    }
    if (!e.nonzero_homs) rep.unobstructed = false;
    rep.inclusions.push_back(std::move(e));
  }
  return rep;
}

}  // namespace toricres
