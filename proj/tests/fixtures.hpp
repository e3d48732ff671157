#pragma once

#include "toricres/fan.hpp"

namespace toricres::fixtures {

// P^1 with rays +1, -1
inline StackyFan p1() {
  return make_fan(1, 1, IntMat::identity(1), {{Int(1)}, {Int(-1)}}, {{}, {0}, {1}});
}

// P^n with rays e_1..e_n and -e_1-..-e_n; maximal cones drop one ray each
inline StackyFan pn(size_t n) {
  std::vector<IntVec> rays;
  for (size_t i = 0; i < n; ++i) {
    IntVec e(n, Int(0));
    e[i] = 1;
    rays.push_back(e);
  }
  rays.push_back(IntVec(n, Int(-1)));
  std::vector<ConeKey> cones;
  for (size_t drop = 0; drop <= n; ++drop) {
    ConeKey c;
    for (size_t i = 0; i <= n; ++i)
      if (i != drop) c.push_back(i);
    cones.push_back(c);
  }
  StackyFan f = make_fan(n, n, IntMat::identity(n), rays, cones);
  validate_stacky_fan(f);  // completes faces
  return f;
}

inline StackyFan p2() { return pn(2); }

// A^n coordinate fan
inline StackyFan an(size_t n) {
  std::vector<IntVec> rays;
  for (size_t i = 0; i < n; ++i) {
    IntVec e(n, Int(0));
    e[i] = 1;
    rays.push_back(e);
  }
  ConeKey top;
  for (size_t i = 0; i < n; ++i) top.push_back(i);
  StackyFan f = make_fan(n, n, IntMat::identity(n), rays, {top});
  validate_stacky_fan(f);
  return f;
}

// Hirzebruch surface F_b: rays (1,0), (0,1), (-1,b), (0,-1)
inline StackyFan hirzebruch(long b) {
  StackyFan f = make_fan(2, 2, IntMat::identity(2),
                         {{Int(1), Int(0)}, {Int(0), Int(1)}, {Int(-1), Int(b)}, {Int(0), Int(-1)}},
                         {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  validate_stacky_fan(f);
  return f;
}

// blow-up of P^2 at two torus-fixed points:
// rays (1,0), (1,1), (0,1), (-1,0), (-1,-1)
inline StackyFan double_blowup() {
  StackyFan f = make_fan(
      2, 2, IntMat::identity(2),
      {{Int(1), Int(0)}, {Int(1), Int(1)}, {Int(0), Int(1)}, {Int(-1), Int(0)}, {Int(-1), Int(-1)}},
      {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
  validate_stacky_fan(f);
  return f;
}

// the orbifold line [A^1/(Z/2Z)]: beta = (2)
inline StackyFan orbifold_line() {
  IntMat beta(1, 1);
  beta.at(0, 0) = 2;
  return make_fan(1, 1, beta, {{Int(1)}}, {{}, {0}});
}

// non-separated line: fan of A^2 minus the origin with beta = (1 1)
inline StackyFan nonseparated_line() {
  IntMat beta(1, 2);
  beta.at(0, 0) = 1;
  beta.at(0, 1) = 1;
  return make_fan(2, 1, beta, {{Int(1), Int(0)}, {Int(0), Int(1)}}, {{}, {0}, {1}});
}

// P(1,2) as a stack: fan of A^2 minus the origin with beta = (2 -1)
inline StackyFan weighted_p12() {
  IntMat beta(1, 2);
  beta.at(0, 0) = 2;
  beta.at(0, 1) = -1;
  return make_fan(2, 1, beta, {{Int(1), Int(0)}, {Int(0), Int(1)}}, {{}, {0}, {1}});
}

// A^2 minus the origin as a variety
inline StackyFan a2_minus_origin() {
  return make_fan(2, 2, IntMat::identity(2), {{Int(1), Int(0)}, {Int(0), Int(1)}},
                  {{}, {0}, {1}});
}

// the morphism A^1 -> [A^1/(Z/2Z)]
inline StackyMorphism orbifold_quotient() {
  StackyFan a1 = an(1);
  StackyFan orb = orbifold_line();
  IntMat phi(1, 1);
  phi.at(0, 0) = 2;
  return {a1, orb, IntMat::identity(1), phi};
}

// the immersed subtorus of A^2 \ {0} (or A^2) with cocharacter (a, b)
inline StackyMorphism subtorus_in(const StackyFan& target, long a, long b) {
  StackyFan src = make_fan(1, 1, IntMat::identity(1), {}, {{}});
  IntMat big_phi(2, 1);
  big_phi.at(0, 0) = a;
  big_phi.at(1, 0) = b;
  return {src, target, big_phi, big_phi};
}

}  // namespace toricres::fixtures
