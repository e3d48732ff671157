#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "toricres/fan.hpp"

namespace toricres {

// The real torus T^phi = ker(M_X,R/M_X -> M_Y,R/M_Y) of an immersion,
// with coordinates from a saturated basis of ker(phi^T).
struct ExitTorus {
  StackyMorphism phi;
  size_t codim = 0;                     // c
  std::vector<IntVec> basis;            // c vectors in M_X
  std::vector<IntVec> ray_functionals;  // per target ray, length-c row a_rho
  std::vector<size_t> families;         // rays with nonzero functional
  std::vector<size_t> inactive_rays;    // beta(u_rho) in the image of phi
};

// errors: NOT_IMMERSION, TORSION_COKERNEL (as invalid_argument codes)
ExitTorus exit_torus(const StackyMorphism& phi);

struct Stratum {
  size_t id = 0;
  size_t dim = 0;
  RatVec sample;             // interior point of the canonical lift, in R^c
  std::vector<size_t> active;  // ray ids whose hyperplane contains the stratum
  IntVec family_values;      // F(u_rho) of the canonical lift, per family (ordered as torus.families)
  SupportFunction support;   // full ray-indexed values (0 on inactive rays)
  DivisorClass bundle;
};

struct ExitEdge {
  size_t src = 0;
  size_t dst = 0;
  IntVec exponent;         // ray-indexed, componentwise >= 0
  int sign = 1;
  IntVec dst_translation;  // z in Z^c positioning the target lift
  std::vector<size_t> newly_active;  // act(dst) \ act(src), ray ids
};

struct ExitPathQuiver {
  ExitTorus torus;
  std::vector<Stratum> strata;
  std::vector<ExitEdge> edges;
  size_t identity_stratum = 0;
};

// cells of the periodic arrangement {a_rho . w in Z} restricted to the listed
// families; deterministic order (dim desc, then lexicographic sample);
// throws CODIM_LIMIT when c exceeds codim_bound
std::vector<Stratum> enumerate_strata(const ExitTorus& t, size_t codim_bound = 4);
std::vector<Stratum> enumerate_strata_families(const ExitTorus& t,
                                               const std::vector<size_t>& use_families,
                                               size_t codim_bound = 4);

ExitPathQuiver exit_path_quiver(const ExitTorus& t, std::vector<Stratum> strata);
ExitPathQuiver build_quiver(const StackyMorphism& phi, size_t codim_bound = 4);
ExitPathQuiver build_quiver_families(const ExitTorus& t, const std::vector<size_t>& use_families,
                                     size_t codim_bound = 4);

// F(u_rho) = ceil(<m, beta(u_rho)>) for a rational point m of M_R
SupportFunction bondal_support(const StackyFan& f, const RatVec& m);

// classes of bF over the strata of the Bondal arrangement (identity-point stratification)
std::set<DivisorClass> thomsen_collection(const StackyFan& f);

}  // namespace toricres
