#include "toricres/fan.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "toricres/lp.hpp"

namespace toricres {

namespace {

RatVec to_rat(const IntVec& v) {
  RatVec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
  return r;
}

// true iff {x : e.x = 0 for e in eqs, g.x >= 0 for g in ges} is contained in
// the half-space / hyperplane given by (a, sense); sense: 0 -> a.x = 0, 1 -> a.x >= 0
bool hcone_in_constraint(const std::vector<IntVec>& eqs, const std::vector<IntVec>& ges,
                         const IntVec& a, int sense, size_t dim) {
  auto violates = [&](const IntVec& dir) {
    // feasibility of {constraints, dir.x <= -1}
    LinearProgram lp;
    lp.nvars = dim;
    lp.objective.assign(dim, Rat(0));
    for (const auto& e : eqs) lp.eq.push_back({to_rat(e), Rat(0)});
    for (const auto& g : ges) {
      RatVec neg(dim);
      for (size_t i = 0; i < dim; ++i) neg[i] = -Rat(g[i]);
      lp.le.push_back({neg, Rat(0)});
    }
    lp.le.push_back({to_rat(dir), Rat(-1)});
    return lp_solve(lp).status == LpStatus::Optimal;
  };
  IntVec neg_a(a.size());
  for (size_t i = 0; i < a.size(); ++i) neg_a[i] = -a[i];
  if (sense == 1) return !violates(a);  // no point with a.x <= -1
  return !violates(a) && !violates(neg_a);
}

bool hcone_subset(const std::vector<IntVec>& eqs, const std::vector<IntVec>& ges,
                  const ConeHRep& c, size_t dim) {
  for (const auto& e : c.equations)
    if (!hcone_in_constraint(eqs, ges, e, 0, dim)) return false;
  for (const auto& n : c.facet_normals)
    if (!hcone_in_constraint(eqs, ges, n, 1, dim)) return false;
  return true;
}

std::vector<IntVec> apply_rows(const IntMat& map, const std::vector<IntVec>& rows) {
  // rows are functionals on the target; pull back along map: r -> r * map
  std::vector<IntVec> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    IntVec v(map.cols(), Int(0));
    for (size_t j = 0; j < map.cols(); ++j)
      for (size_t i = 0; i < map.rows(); ++i) v[j] += r[i] * map.at(i, j);
    out.push_back(std::move(v));
  }
  return out;
}

bool unimodular(const IntMat& m) {
  if (m.rows() != m.cols()) return false;
  SmithResult s = smith_normal_form(m);
  if (s.rank != m.rows()) return false;
  for (size_t i = 0; i < s.rank; ++i)
    if (s.d.at(i, i) != 1) return false;
  return true;
}

bool injective_torsion_free_coker(const IntMat& m) {
  SmithResult s = smith_normal_form(m);
  if (s.rank != m.cols()) return false;
  for (size_t i = 0; i < s.rank; ++i)
    if (s.d.at(i, i) != 1) return false;
  return true;
}

bool injective_finite_coker(const IntMat& m) {
  if (m.rows() != m.cols()) return false;
  return rank_int(m) == m.rows();
}

}  // namespace

ConeHRep cone_hrep(const std::vector<IntVec>& gens, size_t ambient_dim) {
  ConeHRep out;
  if (gens.empty()) {
    for (size_t i = 0; i < ambient_dim; ++i) {
      IntVec e(ambient_dim, Int(0));
      e[i] = 1;
      out.equations.push_back(std::move(e));
    }
    return out;
  }
  RatMat m(gens.size(), ambient_dim);
  for (size_t i = 0; i < gens.size(); ++i)
    for (size_t j = 0; j < ambient_dim; ++j) m.at(i, j) = Rat(gens[i][j]);
  for (const RatVec& v : nullspace_rat(m)) out.equations.push_back(integerize(v));
  for (size_t i = 0; i < gens.size(); ++i) {
    RatMat rest(gens.size() - 1, ambient_dim);
    size_t r = 0;
    for (size_t k = 0; k < gens.size(); ++k) {
      if (k == i) continue;
      for (size_t j = 0; j < ambient_dim; ++j) rest.at(r, j) = Rat(gens[k][j]);
      ++r;
    }
    IntVec normal;
    for (const RatVec& v : nullspace_rat(rest)) {
      IntVec cand = integerize(v);
      Int pairing = dot(cand, gens[i]);
      if (pairing != 0) {
        normal = pairing > 0 ? cand : scale(Int(-1), cand);
        break;
      }
    }
    if (normal.empty()) throw std::invalid_argument("cone generators not independent");
    out.facet_normals.push_back(std::move(normal));
  }
  return out;
}

bool cone_contains(const ConeHRep& c, const IntVec& x) {
  for (const auto& e : c.equations)
    if (dot(e, x) != 0) return false;
  for (const auto& n : c.facet_normals)
    if (dot(n, x) < 0) return false;
  return true;
}

bool cone_contains(const ConeHRep& c, const RatVec& x) {
  for (const auto& e : c.equations)
    if (dot_rat(e, x) != 0) return false;
  for (const auto& n : c.facet_normals)
    if (dot_rat(n, x) < 0) return false;
  return true;
}

IntMat StackyFan::beta_ray_matrix() const {
  IntMat m(rank_N, nrays());
  for (size_t r = 0; r < nrays(); ++r) {
    IntVec img = beta.mul_vec(rays[r]);
    for (size_t i = 0; i < rank_N; ++i) m.at(i, r) = img[i];
  }
  return m;
}

const HermiteResult& StackyFan::pic_relations() const {
  if (!pic_cache_) pic_cache_ = hermite_normal_form(beta_ray_matrix());
  return *pic_cache_;
}

std::vector<ConeKey> StackyFan::maximal_cones() const {
  std::vector<ConeKey> out;
  for (const auto& c : cones) {
    bool maximal = true;
    for (const auto& d : cones) {
      if (d.size() <= c.size()) continue;
      if (std::includes(d.begin(), d.end(), c.begin(), c.end())) {
        maximal = false;
        break;
      }
    }
    if (maximal) out.push_back(c);
  }
  return out;
}

std::vector<IntVec> StackyFan::cone_gens(const ConeKey& c) const {
  std::vector<IntVec> g;
  g.reserve(c.size());
  for (size_t i : c) g.push_back(rays[i]);
  return g;
}

ConeHRep StackyFan::cone_h(const ConeKey& c) const { return cone_hrep(cone_gens(c), rank_L); }

bool StackyFan::has_cone(const ConeKey& c) const {
  return std::find(cones.begin(), cones.end(), c) != cones.end();
}

StackyFan trivial_fan() {
  StackyFan f;
  f.rank_L = 0;
  f.rank_N = 0;
  f.beta = IntMat(0, 0);
  f.cones = {{}};
  return f;
}

StackyFan make_fan(size_t rank_L, size_t rank_N, IntMat beta, std::vector<IntVec> rays,
                   std::vector<ConeKey> cones) {
  StackyFan f;
  f.rank_L = rank_L;
  f.rank_N = rank_N;
  f.beta = std::move(beta);
  f.rays = std::move(rays);
  for (auto& c : cones) std::sort(c.begin(), c.end());
  std::sort(cones.begin(), cones.end());
  cones.erase(std::unique(cones.begin(), cones.end()), cones.end());
  f.cones = std::move(cones);
  return f;
}

ValidationReport validate_stacky_fan(StackyFan& f) {
  ValidationReport rep;
  if (f.beta.rows() != f.rank_N || f.beta.cols() != f.rank_L)
    rep.fail("beta has wrong shape");
  for (size_t r = 0; r < f.nrays(); ++r) {
    if (f.rays[r].size() != f.rank_L) {
      rep.fail("ray " + std::to_string(r) + " has wrong dimension");
      continue;
    }
    if (is_zero(f.rays[r])) rep.fail("ray " + std::to_string(r) + " is zero");
    else if (content(f.rays[r]) != 1)
      rep.fail("ray " + std::to_string(r) + " is not primitive");
  }
  for (size_t r = 0; r < f.nrays(); ++r)
    for (size_t s = r + 1; s < f.nrays(); ++s)
      if (f.rays[r] == f.rays[s]) rep.fail("duplicate ray " + std::to_string(s));
  if (!rep.valid) return rep;

  for (const auto& c : f.cones) {
    for (size_t i : c)
      if (i >= f.nrays()) {
        rep.fail("cone references missing ray");
        return rep;
      }
    if (!c.empty()) {
      RatMat m(c.size(), f.rank_L);
      for (size_t i = 0; i < c.size(); ++i)
        for (size_t j = 0; j < f.rank_L; ++j) m.at(i, j) = Rat(f.rays[c[i]][j]);
      if (rank_rat(m) != c.size())
        rep.fail("cone has linearly dependent rays (non-simplicial input rejected)");
    }
  }
  if (!rep.valid) return rep;

  // face closure: complete with a note instead of rejecting
  std::set<ConeKey> closed(f.cones.begin(), f.cones.end());
  bool completed = false;
  for (const auto& c : f.cones) {
    size_t subsets = size_t(1) << c.size();
    for (size_t mask = 0; mask < subsets; ++mask) {
      ConeKey face;
      for (size_t b = 0; b < c.size(); ++b)
        if (mask & (size_t(1) << b)) face.push_back(c[b]);
      if (closed.insert(face).second) completed = true;
    }
  }
  if (completed) {
    rep.notes.push_back("face closure completed at load");
    f.cones.assign(closed.begin(), closed.end());
    std::sort(f.cones.begin(), f.cones.end());
  }

  // every ray used by some cone must itself be a cone; unused rays are allowed
  // but participate in divisors, so require each ray to be a 1-cone
  for (size_t r = 0; r < f.nrays(); ++r)
    if (!f.has_cone({r})) rep.fail("ray " + std::to_string(r) + " is not a cone of the fan");

  // pairwise compatibility of maximal cones: intersection must be the common face
  auto maxc = f.maximal_cones();
  for (size_t a = 0; a < maxc.size() && rep.valid; ++a)
    for (size_t b = a + 1; b < maxc.size() && rep.valid; ++b) {
      ConeKey common;
      std::set_intersection(maxc[a].begin(), maxc[a].end(), maxc[b].begin(), maxc[b].end(),
                            std::back_inserter(common));
      ConeHRep ha = f.cone_h(maxc[a]);
      ConeHRep hb = f.cone_h(maxc[b]);
      ConeHRep hc = f.cone_h(common);
      std::vector<IntVec> eqs = ha.equations;
      eqs.insert(eqs.end(), hb.equations.begin(), hb.equations.end());
      std::vector<IntVec> ges = ha.facet_normals;
      ges.insert(ges.end(), hb.facet_normals.begin(), hb.facet_normals.end());
      if (!hcone_subset(eqs, ges, hc, f.rank_L))
        rep.fail("cones intersect in a non-face");
    }

  if (rank_int(f.beta) != f.rank_N) rep.fail("coker(beta) is infinite");
  return rep;
}

IntVec divisor_of_support(const SupportFunction& f) {
  IntVec d(f.values.size());
  for (size_t i = 0; i < f.values.size(); ++i) d[i] = -f.values[i];
  return d;
}

DivisorClass pic_canonical_form(const IntVec& divisor, const StackyFan& f) {
  return DivisorClass{reduce_mod_row_lattice(divisor, f.pic_relations())};
}

bool delta_beta_contains(const StackyFan& f, const SupportFunction& F, const IntVec& m) {
  IntMat br = f.beta_ray_matrix();
  for (size_t r = 0; r < f.nrays(); ++r) {
    Int v = 0;
    for (size_t i = 0; i < f.rank_N; ++i) v += m[i] * br.at(i, r);
    if (v < F.values[r]) return false;
  }
  return true;
}

MorphismError validate_morphism(const StackyMorphism& m) {
  IntMat left = m.target.beta.mul(m.Phi);
  IntMat right = m.phi.mul(m.source.beta);
  if (!(left == right)) return MorphismError::IncompatibleDiagram;
  auto maxc = m.target.cones;
  for (const auto& c : m.source.cones) {
    std::vector<IntVec> imgs;
    for (size_t i : c) imgs.push_back(m.Phi.mul_vec(m.source.rays[i]));
    bool mapped = false;
    for (const auto& t : maxc) {
      ConeHRep h = m.target.cone_h(t);
      bool all = true;
      for (const auto& y : imgs)
        if (!cone_contains(h, y)) {
          all = false;
          break;
        }
      if (all) {
        mapped = true;
        break;
      }
    }
    if (!mapped) return MorphismError::ConeNotMapped;
  }
  return MorphismError::None;
}

std::optional<std::vector<std::pair<size_t, Int>>> quotient_ray_map(const StackyMorphism& m) {
  std::vector<std::pair<size_t, Int>> out;
  std::vector<bool> hit(m.target.nrays(), false);
  for (size_t r = 0; r < m.source.nrays(); ++r) {
    IntVec img = m.Phi.mul_vec(m.source.rays[r]);
    if (is_zero(img)) return std::nullopt;
    IntVec prim = primitive_part(img);
    Int k = 0;
    size_t j = m.target.nrays();
    for (size_t t = 0; t < m.target.nrays(); ++t)
      if (m.target.rays[t] == prim) {
        j = t;
        break;
      }
    if (j == m.target.nrays()) return std::nullopt;
    for (size_t i = 0; i < img.size(); ++i)
      if (m.target.rays[j][i] != 0) {
        k = img[i] / m.target.rays[j][i];
        break;
      }
    if (k <= 0 || hit[j]) return std::nullopt;
    hit[j] = true;
    out.push_back({j, k});
  }
  for (bool h : hit)
    if (!h) return std::nullopt;
  return out;
}

namespace {

// do the cone sets correspond bijectively under the ray map?
bool cones_correspond(const StackyMorphism& m, const std::vector<std::pair<size_t, Int>>& raymap) {
  std::set<ConeKey> srcimg;
  for (const auto& c : m.source.cones) {
    ConeKey img;
    for (size_t i : c) img.push_back(raymap[i].first);
    std::sort(img.begin(), img.end());
    srcimg.insert(img);
  }
  std::set<ConeKey> tgt(m.target.cones.begin(), m.target.cones.end());
  return srcimg == tgt;
}

// characters of G_beta: coker(beta^T) has no torsion
bool character_group_free(const StackyFan& f) {
  CokernelDecomposition c = cokernel_decomposition(f.beta.transpose(), false);
  return c.torsion.empty();
}

bool quotient_splits(const StackyMorphism& m) {
  if (character_group_free(m.source)) return true;  // free quotient of the character sequence
  if (!(m.Phi == IntMat::identity(m.Phi.rows())) || m.Phi.rows() != m.Phi.cols()) return false;
  // retraction solve: C = coker(phi^T: M_tgt -> M_src) includes into
  // G^_tgt = coker(beta_tgt^T) via m -> beta_src^T m.  The sequence splits iff
  // a retraction exists, i.e. for each invariant factor d with generator c the
  // congruence y . R = 0, y . c_j = delta_ij (mod d) is solvable.
  IntMat phit = m.phi.transpose();
  SmithResult s = smith_normal_form(phit);
  size_t n = phit.rows();
  SmithResult ui = smith_normal_form(s.u);
  IntMat uinv = ui.v.mul(ui.u);
  std::vector<std::pair<IntVec, Int>> gens;  // (lift in M_src, order)
  for (size_t i = 0; i < s.rank; ++i)
    if (s.d.at(i, i) > 1) {
      IntVec y(n, Int(0));
      y[i] = 1;
      gens.push_back({uinv.mul_vec(y), s.d.at(i, i)});
    }
  IntMat bsrcT = m.source.beta.transpose();  // M_src -> K
  IntMat btgtT = m.target.beta.transpose();  // M_tgt -> K
  size_t kdim = bsrcT.rows();
  for (size_t g = 0; g < gens.size(); ++g) {
    const Int& d = gens[g].second;
    // unknown y in Z^kdim: y . btgtT_col = 0 mod d for all columns, y . c_j = delta mod d
    size_t ncond = btgtT.cols() + gens.size();
    IntMat sys(ncond, kdim + ncond);
    IntVec rhs(ncond, Int(0));
    for (size_t j = 0; j < btgtT.cols(); ++j) {
      for (size_t i = 0; i < kdim; ++i) sys.at(j, i) = btgtT.at(i, j);
      sys.at(j, kdim + j) = d;
    }
    for (size_t h = 0; h < gens.size(); ++h) {
      size_t row = btgtT.cols() + h;
      IntVec img = bsrcT.mul_vec(gens[h].first);
      for (size_t i = 0; i < kdim; ++i) sys.at(row, i) = img[i];
      sys.at(row, kdim + row) = d;
      rhs[row] = (h == g) ? Int(1) : Int(0);
    }
    if (!solve_int(sys.transpose(), rhs)) return false;
  }
  return true;
}

}  // namespace

Classification classify_stacky_morphism(const StackyMorphism& m) {
  MorphismError err = validate_morphism(m);
  if (err == MorphismError::IncompatibleDiagram)
    throw std::invalid_argument("INCOMPATIBLE_DIAGRAM");
  if (err == MorphismError::ConeNotMapped)
    throw std::invalid_argument("INCOMPATIBLE_DIAGRAM: source cone not mapped into target cone");
  Classification out;

  bool phi_inj_tf = injective_torsion_free_coker(m.phi);
  bool Phi_inj_tf = injective_torsion_free_coker(m.Phi);

  if (phi_inj_tf && Phi_inj_tf) {
    // inclusion: every source cone is the preimage of some target cone
    bool incl = true;
    std::vector<ConeHRep> tgt_h;
    for (const auto& t : m.target.cones) tgt_h.push_back(m.target.cone_h(t));
    for (const auto& c : m.source.cones) {
      bool found = false;
      ConeHRep hc = m.source.cone_h(c);
      for (size_t t = 0; t < m.target.cones.size() && !found; ++t) {
        // preimage of target cone t under Phi, as H-constraints on L_src
        std::vector<IntVec> eqs = apply_rows(m.Phi, tgt_h[t].equations);
        std::vector<IntVec> ges = apply_rows(m.Phi, tgt_h[t].facet_normals);
        // cone(c) subset of preimage?
        bool c_in_pre = true;
        for (size_t i : c) {
          IntVec y = m.Phi.mul_vec(m.source.rays[i]);
          if (!cone_contains(tgt_h[t], y)) {
            c_in_pre = false;
            break;
          }
        }
        if (!c_in_pre) continue;
        if (hcone_subset(eqs, ges, hc, m.source.rank_L)) found = true;
      }
      if (!found) {
        incl = false;
        break;
      }
    }
    out.inclusion = incl;
    if (incl) {
      // immersion: the preimage of every target cone lies in the source fan
      bool imm = true;
      for (size_t t = 0; t < m.target.cones.size() && imm; ++t) {
        std::vector<IntVec> eqs = apply_rows(m.Phi, tgt_h[t].equations);
        std::vector<IntVec> ges = apply_rows(m.Phi, tgt_h[t].facet_normals);
        ConeKey cand;
        for (size_t r = 0; r < m.source.nrays(); ++r) {
          IntVec y = m.Phi.mul_vec(m.source.rays[r]);
          if (cone_contains(tgt_h[t], y)) cand.push_back(r);
        }
        if (!m.source.has_cone(cand)) {
          imm = false;
          break;
        }
        ConeHRep hcand = m.source.cone_h(cand);
        if (!hcone_subset(eqs, ges, hcand, m.source.rank_L)) imm = false;
      }
      out.immersion = imm;
    }
  }

  auto raymap = quotient_ray_map(m);
  bool cone_bij = raymap && cones_correspond(m, *raymap);

  // an open inclusion is an inclusion with both maps isomorphisms
  out.open_inclusion = out.inclusion && unimodular(m.Phi) && unimodular(m.phi);

  if (unimodular(m.Phi) && cone_bij && m.phi.rows() == m.phi.cols() &&
      rank_int(m.phi) == m.phi.rows() && !unimodular(m.phi))
    out.change_of_group_finite_cokernel = true;

  bool Phi_fin = injective_finite_coker(m.Phi);
  bool phi_fin = injective_finite_coker(m.phi);
  if (cone_bij && Phi_fin && phi_fin && !(unimodular(m.Phi) && unimodular(m.phi)))
    out.finite_quotient = quotient_splits(m);

  // stabilization equivalence: phi iso and Phi split (either direction) with
  // the fans matching across the split
  if (unimodular(m.phi)) {
    if (raymap && cone_bij && injective_torsion_free_coker(m.Phi) &&
        m.Phi.rows() >= m.Phi.cols()) {
      bool scaled = false;
      for (auto& [j, k] : *raymap)
        if (k != 1) scaled = true;
      if (!scaled && m.Phi.rows() > m.Phi.cols()) out.stabilization_equivalence = true;
    }
    if (raymap && cone_bij && m.Phi.rows() < m.Phi.cols() &&
        rank_int(m.Phi) == m.Phi.rows()) {
      // surjective with split kernel; rays must map bijectively without scaling
      bool scaled = false;
      for (auto& [j, k] : *raymap)
        if (k != 1) scaled = true;
      CokernelDecomposition c = cokernel_decomposition(m.Phi, false);
      if (!scaled && c.free_rank == 0 && c.torsion.empty()) out.stabilization_equivalence = true;
    }
  }
  return out;
}

StackyMorphism identity_morphism(const StackyFan& f) {
  return {f, f, IntMat::identity(f.rank_L), IntMat::identity(f.rank_N)};
}

StackyMorphism identity_point_morphism(const StackyFan& f) {
  return {trivial_fan(), f, IntMat(f.rank_L, 0), IntMat(f.rank_N, 0)};
}

StackyMorphism frobenius_factor_morphism(const StackyFan& f, const Int& ell) {
  IntMat L = IntMat::identity(f.rank_L);
  for (size_t i = 0; i < f.rank_L; ++i) L.at(i, i) = ell;
  IntMat N = IntMat::identity(f.rank_N);
  for (size_t i = 0; i < f.rank_N; ++i) N.at(i, i) = ell;
  return {f, f, L, N};
}

bool smoothly_covered(const StackyFan& f) { return smooth_stacky_chart_cover(f).has_value(); }

std::optional<std::vector<StackyMorphism>> smooth_stacky_chart_cover(const StackyFan& f,
                                                                     ChartCoverError* err) {
  if (rank_int(f.beta_ray_matrix()) != f.rank_N) {
    if (err) *err = {{}, "beta-images of the rays do not span N"};
    return std::nullopt;
  }
  std::vector<StackyMorphism> charts;
  for (const auto& sigma : f.maximal_cones()) {
    if (!sigma.empty()) {
      // rays of sigma must be a basis of the saturation of their span
      IntMat g = IntMat::from_cols(f.cone_gens(sigma));
      SmithResult s = smith_normal_form(g);
      bool ok = s.rank == sigma.size();
      for (size_t i = 0; i < s.rank && ok; ++i)
        if (s.d.at(i, i) != 1) ok = false;
      // beta restricted to the span must be injective
      if (ok) {
        IntMat bg = f.beta.mul(g);
        if (rank_int(bg) != sigma.size()) ok = false;
      }
      if (!ok) {
        if (err) *err = {sigma, "maximal cone is not a stabilized smooth stacky chart"};
        return std::nullopt;
      }
    }
    // chart fan: the subfan of cones subordinate to sigma, on the rays of sigma
    std::vector<size_t> ray_of(f.nrays(), size_t(-1));
    std::vector<IntVec> crays;
    for (size_t i = 0; i < sigma.size(); ++i) {
      ray_of[sigma[i]] = i;
      crays.push_back(f.rays[sigma[i]]);
    }
    std::vector<ConeKey> ccones;
    for (const auto& c : f.cones) {
      if (!std::includes(sigma.begin(), sigma.end(), c.begin(), c.end())) continue;
      ConeKey k;
      for (size_t i : c) k.push_back(ray_of[i]);
      std::sort(k.begin(), k.end());
      ccones.push_back(k);
    }
    StackyFan chart = make_fan(f.rank_L, f.rank_N, f.beta, crays, ccones);
    charts.push_back({chart, f, IntMat::identity(f.rank_L), IntMat::identity(f.rank_N)});
  }
  return charts;
}

std::optional<SupportFunction> pullback_support(const StackyMorphism& m,
                                                const SupportFunction& F) {
  SupportFunction out;
  out.values.resize(m.source.nrays());
  for (size_t r = 0; r < m.source.nrays(); ++r) {
    IntVec y = m.Phi.mul_vec(m.source.rays[r]);
    if (is_zero(y)) {
      out.values[r] = 0;
      continue;
    }
    bool found = false;
    for (const auto& t : m.target.maximal_cones()) {
      ConeHRep h = m.target.cone_h(t);
      if (!cone_contains(h, y)) continue;
      // solve y = sum lambda_i u_i over the (independent) generators of t
      auto gens = m.target.cone_gens(t);
      RatMat a(m.target.rank_L, gens.size());
      for (size_t j = 0; j < gens.size(); ++j)
        for (size_t i = 0; i < m.target.rank_L; ++i) a.at(i, j) = Rat(gens[j][i]);
      RatVec b(m.target.rank_L);
      for (size_t i = 0; i < m.target.rank_L; ++i) b[i] = Rat(y[i]);
      auto lam = solve_rat(a, b);
      if (!lam) continue;
      Rat val = 0;
      for (size_t j = 0; j < gens.size(); ++j) val += (*lam)[j] * Rat(F.values[t[j]]);
      if (!is_integer(val)) throw std::logic_error("non-integral support pullback");
      out.values[r] = val.get_num();
      found = true;
      break;
    }
    if (!found) return std::nullopt;  // RAY_IMAGE_OUTSIDE_SUPPORT
  }
  return out;
}

std::optional<std::vector<QuotientSummand>> pushforward_support_finite_quotient(
    const StackyMorphism& m, const SupportFunction& F) {
  Classification cls = classify_stacky_morphism(m);
  if (!cls.finite_quotient) return std::nullopt;  // NOT_FINITE_QUOTIENT
  auto raymap = quotient_ray_map(m);
  IntMat phit = m.phi.transpose();  // M_tgt -> M_src
  CokernelDecomposition coker = cokernel_decomposition(phit, true);
  if (!coker.representatives_available) return std::nullopt;
  IntMat bsrc = m.source.beta_ray_matrix();
  std::vector<QuotientSummand> out;
  for (const IntVec& rep : coker.representatives) {
    SupportFunction g;
    g.values.assign(m.target.nrays(), Int(0));
    for (size_t r = 0; r < m.source.nrays(); ++r) {
      Int shift = 0;
      for (size_t i = 0; i < m.source.rank_N; ++i) shift += rep[i] * bsrc.at(i, r);
      Int val = F.values[r] - shift;
      auto [j, k] = (*raymap)[r];
      g.values[j] = ceil_div(val, k);
    }
    out.push_back({rep, std::move(g)});
  }
  return out;
}

StackyFan product_stacky_fan(const StackyFan& a, const StackyFan& b) {
  StackyFan f;
  f.rank_L = a.rank_L + b.rank_L;
  f.rank_N = a.rank_N + b.rank_N;
  f.beta = IntMat(f.rank_N, f.rank_L);
  for (size_t i = 0; i < a.rank_N; ++i)
    for (size_t j = 0; j < a.rank_L; ++j) f.beta.at(i, j) = a.beta.at(i, j);
  for (size_t i = 0; i < b.rank_N; ++i)
    for (size_t j = 0; j < b.rank_L; ++j) f.beta.at(a.rank_N + i, a.rank_L + j) = b.beta.at(i, j);
  for (const auto& r : a.rays) {
    IntVec v(f.rank_L, Int(0));
    for (size_t j = 0; j < a.rank_L; ++j) v[j] = r[j];
    f.rays.push_back(v);
  }
  for (const auto& r : b.rays) {
    IntVec v(f.rank_L, Int(0));
    for (size_t j = 0; j < b.rank_L; ++j) v[a.rank_L + j] = r[j];
    f.rays.push_back(v);
  }
  for (const auto& ca : a.cones)
    for (const auto& cb : b.cones) {
      ConeKey c = ca;
      for (size_t i : cb) c.push_back(a.nrays() + i);
      std::sort(c.begin(), c.end());
      f.cones.push_back(c);
    }
  std::sort(f.cones.begin(), f.cones.end());
  return f;
}

StackyMorphism product_morphism(const StackyMorphism& a, const StackyMorphism& b) {
  StackyMorphism m;
  m.source = product_stacky_fan(a.source, b.source);
  m.target = product_stacky_fan(a.target, b.target);
  m.Phi = IntMat(m.target.rank_L, m.source.rank_L);
  for (size_t i = 0; i < a.target.rank_L; ++i)
    for (size_t j = 0; j < a.source.rank_L; ++j) m.Phi.at(i, j) = a.Phi.at(i, j);
  for (size_t i = 0; i < b.target.rank_L; ++i)
    for (size_t j = 0; j < b.source.rank_L; ++j)
      m.Phi.at(a.target.rank_L + i, a.source.rank_L + j) = b.Phi.at(i, j);
  m.phi = IntMat(m.target.rank_N, m.source.rank_N);
  for (size_t i = 0; i < a.target.rank_N; ++i)
    for (size_t j = 0; j < a.source.rank_N; ++j) m.phi.at(i, j) = a.phi.at(i, j);
  for (size_t i = 0; i < b.target.rank_N; ++i)
    for (size_t j = 0; j < b.source.rank_N; ++j)
      m.phi.at(a.target.rank_N + i, a.source.rank_N + j) = b.phi.at(i, j);
  return m;
}

StackyMorphism diagonal_morphism(const StackyFan& f) {
  StackyMorphism m;
  m.source = f;
  m.target = product_stacky_fan(f, f);
  m.Phi = IntMat(2 * f.rank_L, f.rank_L);
  for (size_t i = 0; i < f.rank_L; ++i) {
    m.Phi.at(i, i) = 1;
    m.Phi.at(f.rank_L + i, i) = 1;
  }
  m.phi = IntMat(2 * f.rank_N, f.rank_N);
  for (size_t i = 0; i < f.rank_N; ++i) {
    m.phi.at(i, i) = 1;
    m.phi.at(f.rank_N + i, i) = 1;
  }
  return m;
}

}  // namespace toricres
