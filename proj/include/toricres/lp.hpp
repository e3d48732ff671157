#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "toricres/matrix.hpp"

namespace toricres {

// maximize objective . x subject to a . x <= b rows and a . x == b rows; x free
struct LinearProgram {
  size_t nvars = 0;
  std::vector<std::pair<RatVec, Rat>> le;
  std::vector<std::pair<RatVec, Rat>> eq;
  RatVec objective;
};

enum class LpStatus { Infeasible, Unbounded, Optimal };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rat value;
  RatVec x;
};

// Two-phase simplex with Bland's rule over exact rationals. Deterministic.
LpResult lp_solve(const LinearProgram& lp);

// true iff q lies in the cone spanned by gens (non-negative combinations)
bool in_cone(const RatVec& q, const std::vector<RatVec>& gens);
bool in_cone(const IntVec& q, const std::vector<IntVec>& gens);

// A relatively-open polyhedron {x : eq_a.x = eq_b, lt_a.x < lt_b, gt_a.x > gt_b}
// intersected with an optional bounding box.  interior_point returns a
// deterministic rational point strictly satisfying every strict constraint,
// or nullopt when the set is empty.
struct OpenPolyhedron {
  size_t nvars = 0;
  std::vector<std::pair<RatVec, Rat>> eq;
  std::vector<std::pair<RatVec, Rat>> lt;
  std::vector<std::pair<RatVec, Rat>> gt;
  std::vector<std::pair<RatVec, Rat>> le;  // weak constraints (box etc.)
};

std::optional<RatVec> interior_point(const OpenPolyhedron& p);

}  // namespace toricres
