#pragma once

#include <optional>
#include <vector>

#include "toricres/fan.hpp"
#include "toricres/poly.hpp"
#include "toricres/strat.hpp"

namespace toricres {

// level-graded quiver: every edge drops the level by exactly one
struct MorseQuiver {
  struct Edge {
    size_t src = 0;
    size_t dst = 0;
    int sign = 1;
  };
  std::vector<int> level;
  std::vector<Edge> edges;
};

// sheaf data: an object label per vertex and a monomial value per edge
struct QuiverSheaf {
  std::vector<DivisorClass> objects;
  std::vector<Poly> values;  // per edge, sign excluded
  size_t nvars = 0;
};

using Matching = std::vector<size_t>;  // matched edge indices

MorseQuiver quiver_of(const ExitPathQuiver& q);
QuiverSheaf sheaf_of(const ExitPathQuiver& q);

// partial matching on vertices + no directed cycles after reversing matched edges
bool validate_acyclic_matching(const MorseQuiver& q, const Matching& m);

// all alternating paths src -> ... -> dst beginning and ending with unmatched
// edges; returned as sequences of edge indices
std::vector<std::vector<size_t>> gradient_flow_lines(const MorseQuiver& q, const Matching& m,
                                                     size_t src, size_t dst);

// a complex of graded free pieces assembled from a quiver sheaf:
// C_k = sum of objects at level k, d entries summed over signed edge values
struct ComplexMatrices {
  std::vector<std::vector<size_t>> gens;  // vertex ids per level (level = index)
  std::vector<PolyMat> d;                 // d[k]: C_k -> C_{k-1}; d[0] has zero columns
  size_t nvars = 0;
};

ComplexMatrices sheaf_complex(const MorseQuiver& q, const QuiverSheaf& f);

bool check_d_squared(const ComplexMatrices& c);

// matched edges onto the wall of rho whose source lies directly below in the
// u_rho direction within one cell of the coarsened arrangement; errors:
// RAY_INACTIVE when rho carries no wall
Matching rho_positive_matching(const ExitPathQuiver& q, size_t rho);

struct MorseReductionResult {
  std::vector<size_t> critical;      // original vertex ids, in complex order
  MorseQuiver reduced_quiver;        // vertices reindexed over `critical`
  QuiverSheaf reduced_sheaf;         // flow-line composite values; signs folded into quiver
  ComplexMatrices original;
  ComplexMatrices reduced;           // from sequential elimination
  ComplexMatrices reduced_flowline;  // from the flow-line formula, for cross-checking
  std::vector<PolyMat> p;            // projection per level: C_k -> reduced_k
  std::vector<PolyMat> inc;          // inclusion per level
  std::vector<PolyMat> h;            // homotopy per level: C_k -> C_{k+1}
};

// errors: MATCHING_NOT_RESPECTING when a matched edge value is not a unit,
// invalid_argument when the matching is not an acyclic partial matching
MorseReductionResult morse_reduce(const MorseQuiver& q, const QuiverSheaf& f, const Matching& m);

}  // namespace toricres
