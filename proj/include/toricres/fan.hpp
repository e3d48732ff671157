#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "toricres/matrix.hpp"

namespace toricres {

// H-representation of a simplicial cone: x lies in the cone iff every
// equation vanishes on x and every facet normal is non-negative on x.
struct ConeHRep {
  std::vector<IntVec> equations;
  std::vector<IntVec> facet_normals;  // facet_normals[i] vanishes on all generators but the i-th
};

ConeHRep cone_hrep(const std::vector<IntVec>& gens, size_t ambient_dim);
bool cone_contains(const ConeHRep& c, const IntVec& x);
bool cone_contains(const ConeHRep& c, const RatVec& x);

using ConeKey = std::vector<size_t>;  // sorted ray indices

struct StackyFan {
  size_t rank_L = 0;
  size_t rank_N = 0;
  IntMat beta;                 // rank_N x rank_L
  std::vector<IntVec> rays;    // primitive vectors in L
  std::vector<ConeKey> cones;  // sorted ray-index sets; face-closed after validation

  size_t nrays() const { return rays.size(); }
  // beta applied to the rays, as a rank_N x nrays matrix
  IntMat beta_ray_matrix() const;
  // relation lattice for linear equivalence: rows of beta_ray_matrix
  const HermiteResult& pic_relations() const;
  std::vector<ConeKey> maximal_cones() const;
  ConeHRep cone_h(const ConeKey& c) const;
  std::vector<IntVec> cone_gens(const ConeKey& c) const;
  bool has_cone(const ConeKey& c) const;

  bool operator==(const StackyFan& o) const {
    return rank_L == o.rank_L && rank_N == o.rank_N && beta == o.beta && rays == o.rays &&
           cones == o.cones;
  }

 private:
  mutable std::optional<HermiteResult> pic_cache_;
};

// the stacky fan of the point e (zero lattices, one empty cone)
StackyFan trivial_fan();

StackyFan make_fan(size_t rank_L, size_t rank_N, IntMat beta, std::vector<IntVec> rays,
                   std::vector<ConeKey> cones);

struct ValidationReport {
  bool valid = true;
  std::vector<std::string> violations;
  std::vector<std::string> notes;  // e.g. face closure completed at load
  void fail(std::string msg) {
    valid = false;
    violations.push_back(std::move(msg));
  }
};

// Checks ray primitivity, simpliciality, face closure (completing it with a
// note rather than failing), pairwise cone compatibility, finiteness of
// coker(beta).  Mutates the fan only by completing faces.
ValidationReport validate_stacky_fan(StackyFan& f);

// -- support functions and divisor classes -----------------------------------

// values F(u_rho) indexed by the rays of an ambient fan
struct SupportFunction {
  IntVec values;
};

// D_F = sum over rays of -F(u_rho) D_rho
IntVec divisor_of_support(const SupportFunction& f);

struct DivisorClass {
  IntVec coeffs;  // canonical representative (Hermite-reduced)
  bool operator==(const DivisorClass& o) const { return coeffs == o.coeffs; }
  bool operator<(const DivisorClass& o) const { return cmp(coeffs, o.coeffs) < 0; }
};

DivisorClass pic_canonical_form(const IntVec& divisor, const StackyFan& f);

// true iff <beta^* m, u_rho> >= F(u_rho) for all rays
bool delta_beta_contains(const StackyFan& f, const SupportFunction& F, const IntVec& m);

// -- morphisms ----------------------------------------------------------------

struct StackyMorphism {
  StackyFan source;
  StackyFan target;
  IntMat Phi;  // L_source -> L_target
  IntMat phi;  // N_source -> N_target
};

enum class MorphismError { None, IncompatibleDiagram, ConeNotMapped };

struct Classification {
  bool inclusion = false;
  bool immersion = false;
  bool open_inclusion = false;
  bool change_of_group_finite_cokernel = false;
  bool finite_quotient = false;
  bool stabilization_equivalence = false;
};

// diagram commutes and every source cone maps into some target cone
MorphismError validate_morphism(const StackyMorphism& m);

Classification classify_stacky_morphism(const StackyMorphism& m);

StackyMorphism identity_morphism(const StackyFan& f);
StackyMorphism identity_point_morphism(const StackyFan& f);           // e -> X
StackyMorphism frobenius_factor_morphism(const StackyFan& f, const Int& ell);  // Phi = phi = ell*id

struct ChartCoverError {
  ConeKey offending_cone;
  std::string message;
};

// one open inclusion (subfan, same lattices) per maximal cone; requires every
// maximal cone to be a stabilized smooth stacky coordinate fan and the
// beta-images of the rays to span N_R
std::optional<std::vector<StackyMorphism>> smooth_stacky_chart_cover(const StackyFan& f,
                                                                     ChartCoverError* err = nullptr);

bool smoothly_covered(const StackyFan& f);

// (Phi^* F)(u'_rho) = F(Phi u'_rho); nullopt when some ray image leaves |Sigma|
std::optional<SupportFunction> pullback_support(const StackyMorphism& m, const SupportFunction& F);

// Pushforward along a (generalized) finite quotient: one summand per coset
// representative m of coker(phi^T: M_tgt -> M_src), with support
// F'(u_j) = ceil((F - beta_src^* m)(u_rho) / k_rho) where Phi(u_rho) = k_rho u_j.
struct QuotientSummand {
  IntVec rep;             // coset representative in M_source
  SupportFunction support;  // on the target fan
};

std::optional<std::vector<QuotientSummand>> pushforward_support_finite_quotient(
    const StackyMorphism& m, const SupportFunction& F);

StackyFan product_stacky_fan(const StackyFan& a, const StackyFan& b);
StackyMorphism product_morphism(const StackyMorphism& a, const StackyMorphism& b);
StackyMorphism diagonal_morphism(const StackyFan& f);  // X -> X x X

// ray scaling data of a generalized finite quotient: result[rho] = (target ray, k)
std::optional<std::vector<std::pair<size_t, Int>>> quotient_ray_map(const StackyMorphism& m);

}  // namespace toricres
