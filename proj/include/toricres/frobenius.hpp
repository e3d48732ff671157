#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "toricres/fan.hpp"

namespace toricres {

struct FrobDecomposition {
  Int ell;
  DivisorClass source;
  std::map<DivisorClass, Int> summands;  // class -> multiplicity
  Int total_multiplicity() const {
    Int t = 0;
    for (const auto& [c, m] : summands) t += m;
    return t;
  }
};

// Frobenius pushforward of O(D) by the floor formula, enumerating a coset
// system of M/ell M; requires a smooth fan presented with unimodular beta
FrobDecomposition frob_pushforward(const StackyFan& f, const IntVec& divisor, const Int& ell);

struct FrobSet {
  std::set<DivisorClass> classes;
  Int period;        // base multiple L for the saturation ladder
  size_t rounds;     // how many multiples were scanned
  bool stabilized;   // the last two rounds added nothing
};

FrobSet frob_set(const StackyFan& f, const IntVec& divisor, size_t max_rounds = 4);

struct PicCoords {
  IntMat proj;  // rank x nrays; sends a divisor vector to basis coordinates
  size_t rank = 0;
};

// canonical free basis of Pic; throws PIC_NOT_FREE when torsion is present
PicCoords pic_coordinates(const StackyFan& f);
// coordinates with respect to chosen divisor classes forming a basis
PicCoords pic_coordinates_in_basis(const StackyFan& f, const std::vector<IntVec>& basis_divisors);

struct Zonotope {
  size_t dim = 0;
  std::vector<IntVec> generators;  // images of -D_rho
  std::vector<IntVec> vertices;    // minimal vertex set (integral for integral generators)
  struct Facet {
    IntVec normal;
    Int offset;  // normal . x <= offset
  };
  std::vector<Facet> facets;
};

Zonotope zonotope_vertices(const StackyFan& f, const PicCoords& pc);

bool zonotope_contains(const Zonotope& z, const RatVec& p);
// open star of p in Z: union over l >= 1 of p + (l-1)/l (Z - p)
bool star_contains(const Zonotope& z, const RatVec& p, const RatVec& x);
// lattice points of the star; throws POINT_OUTSIDE_Z when p is outside
std::vector<IntVec> star_lattice_points(const Zonotope& z, const RatVec& p);
// q in p + cone(p - Z), by exact LP
bool translated_cone_contains(const Zonotope& z, const RatVec& p, const RatVec& q);

// h^i(X, O(D)) over the rationals, degreewise Cech cohomology on the cover by
// maximal cones; requires a complete smooth fan
std::vector<size_t> cohomology_dims(const StackyFan& f, const IntVec& divisor);
bool cohomology_nonvanishing(const StackyFan& f, const IntVec& divisor,
                             IntVec* witness_degree = nullptr);

bool is_complete(const StackyFan& f);

// all linear inclusions Y -> X spanned by ray subsets (with convex, complete
// support in their span), including the identity and the identity point
std::vector<StackyMorphism> linear_inclusions(const StackyFan& f, size_t max_rank = SIZE_MAX);

// restriction of a divisor along a linear inclusion (forget missing rays)
IntVec pullback_divisor_linear(const StackyMorphism& incl, const IntVec& divisor);

struct GenerationEntry {
  std::vector<size_t> rays;  // ray indices of X spanning Y
  size_t dim_y = 0;
  bool nonzero_homs = false;
  bool multiplicity_identity_checked = false;
  bool multiplicity_identity_holds = false;
};

struct GenerationReport {
  IntVec divisor;
  std::vector<GenerationEntry> inclusions;
  bool unobstructed = false;
  int characteristic_note = 0;  // annotation only
};

GenerationReport generation_report(const StackyFan& f, const IntVec& divisor,
                                   bool verify_multiplicity = true, const Int& ell = 2);

}  // namespace toricres
