#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "toricres/fan.hpp"
#include "toricres/morse.hpp"
#include "toricres/poly.hpp"
#include "toricres/strat.hpp"

namespace toricres {

struct LineBundleComplex {
  StackyFan fan;
  std::vector<std::vector<DivisorClass>> terms;      // by homological degree
  std::vector<std::vector<IntVec>> term_supports;    // lifted support values per summand
  std::vector<PolyMat> diff;                         // diff[k]: C_k -> C_{k-1}
  size_t nvars() const { return fan.nrays(); }
  size_t rank(size_t k) const { return k < terms.size() ? terms[k].size() : 0; }
  size_t length() const { return terms.empty() ? 0 : terms.size() - 1; }
};

struct AugmentedComplex {
  LineBundleComplex cx;
  size_t alpha = 0;  // index of the O-summand of C_0 receiving the unit
  StackyMorphism phi;
  std::optional<ExitPathQuiver> quiver;
};

// C_k = sum over dim-k strata of O(bF(sigma)); errors propagated from the
// stratification (NOT_IMMERSION, NOT_SMOOTHLY_COVERED, CODIM_LIMIT)
AugmentedComplex build_resolution(const StackyMorphism& phi, size_t codim_bound = 4);
AugmentedComplex diagonal_resolution(const StackyFan& f, size_t codim_bound = 4);

LineBundleComplex complex_of_quiver(const ExitPathQuiver& q);

// graded tensor product over the product fan, with Koszul signs
LineBundleComplex tensor_resolutions(const LineBundleComplex& a, const LineBundleComplex& b);

bool check_d_squared(const LineBundleComplex& c);

// every differential entry must be homogeneous: source class = target class +
// class of the entry's exponent divisor
bool check_homogeneity(const LineBundleComplex& c);

// --- comparison up to summand permutation and diagonal +-1 units -------------

struct ComplexIso {
  std::vector<std::vector<size_t>> perm;  // perm[k][i] = index in b of summand i of a
  std::vector<std::vector<int>> unit;     // unit[k][i] in {+1, -1}
};

std::optional<ComplexIso> find_iso_up_to_units(const LineBundleComplex& a,
                                               const LineBundleComplex& b);

// --- restriction to charts ----------------------------------------------------

struct RestrictionResult {
  StackyFan chart_fan;
  LineBundleComplex restricted;
  LineBundleComplex reduced;
  size_t reduced_alpha = 0;
  // chain data relating restricted to reduced, with exact identities
  std::vector<PolyMat> p, inc, h;
};

// removes the stars of the listed rays; the restricted complex pulls the
// bundles back, the reduced complex iterates rho-positive matchings
RestrictionResult restrict_to_chart(const AugmentedComplex& c, const std::vector<size_t>& rays);

// --- pushforward along finite quotients ---------------------------------------

struct PushforwardSummand {
  IntVec q_rep;  // character representative in M_Y
  LineBundleComplex complex;
  std::vector<std::vector<std::pair<size_t, IntVec>>> provenance;  // per degree: (source summand, coset rep)
};

std::vector<PushforwardSummand> pushforward_finite_quotient_complex(const AugmentedComplex& c,
                                                                    const StackyMorphism& pi);

// --- torus quotients and codimension-two extension ----------------------------

// true iff the quiver and exponent data of phi and phi/T coincide under the
// canonical identification; T given by a saturated sublattice N_G of N_X
bool pullback_torus_quotient_check(const StackyMorphism& phi, const std::vector<IntVec>& n_g);

// the quotient data: X/T and Y/T fans with the induced immersion
StackyMorphism torus_quotient_morphism(const StackyMorphism& phi, const std::vector<IntVec>& n_g);

// reinterpret a complex on [X/T] as a complex on X (identical Cox data)
AugmentedComplex pullback_torus_quotient_complex(const AugmentedComplex& c,
                                                 const StackyMorphism& phi_upstairs);

// extend along an open inclusion with complement of equivariant codimension
// two: supports extended by zero on the new rays
AugmentedComplex iflat_extend_complex(const AugmentedComplex& c, const StackyFan& big_fan);

// --- verification -------------------------------------------------------------

struct FiberReport {
  bool ok = true;
  size_t trials_run = 0;
  std::vector<std::string> failures;
};

// per chart: specialize off-chart variables to 1 and evaluate at random
// rational points; off Y the complex must be exact, on Y dim H_0 must be 1
FiberReport fiber_exactness_check(const AugmentedComplex& c, size_t trials, uint64_t seed);

// reduced chart complex vs the Koszul complex of the chart's local model,
// built independently as a tensor of two-term complexes (pushed through the
// chart's finite quotient when the chart is stacky)
bool koszul_compare(const RestrictionResult& r, const AugmentedComplex& original);

}  // namespace toricres
