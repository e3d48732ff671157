#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "toricres/frobenius.hpp"
#include "toricres/strat.hpp"

using namespace toricres;
using namespace toricres::fixtures;

namespace {

DivisorClass cls(const StackyFan& f, std::vector<long> d) {
  IntVec v(d.size());
  for (size_t i = 0; i < d.size(); ++i) v[i] = d[i];
  return pic_canonical_form(v, f);
}

}  // namespace

TEST_CASE("frobenius pushforward by the floor formula") {
  StackyFan f = p1();
  {
    FrobDecomposition d = frob_pushforward(f, {Int(0), Int(0)}, 2);
    CHECK(d.total_multiplicity() == 2);
    REQUIRE(d.summands.size() == 2);
    CHECK(d.summands.at(cls(f, {0, 0})) == 1);
    CHECK(d.summands.at(cls(f, {-1, 0})) == 1);
  }
  {
    // ell = 1 is the identity
    FrobDecomposition d = frob_pushforward(f, {Int(3), Int(0)}, 1);
    REQUIRE(d.summands.size() == 1);
    CHECK(d.summands.at(cls(f, {3, 0})) == 1);
  }
  {
    // F_4, D = D_1 + D_2, ell = 2: O(-D_1) is not a summand
    StackyFan h = hirzebruch(4);
    FrobDecomposition d = frob_pushforward(h, {Int(1), Int(1), Int(0), Int(0)}, 2);
    CHECK(d.total_multiplicity() == 4);
    CHECK(d.summands.count(cls(h, {-1, 0, 0, 0})) == 0);
  }
}

TEST_CASE("multiplicity conservation on random triples") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> dd(-4, 4);
  std::vector<StackyFan> fans{p1(), p2(), pn(3), hirzebruch(1), hirzebruch(3), double_blowup(),
                              product_stacky_fan(p1(), p1())};
  for (int iter = 0; iter < 30; ++iter) {
    const StackyFan& f = fans[iter % fans.size()];
    IntVec div(f.nrays());
    for (auto& x : div) x = dd(rng);
    Int ell = 1 + long(rng() % 4);
    FrobDecomposition d = frob_pushforward(f, div, ell);
    Int expect = 1;
    for (size_t i = 0; i < f.rank_N; ++i) expect *= ell;
    CHECK(d.total_multiplicity() == expect);
  }
}

TEST_CASE("frob set saturation") {
  {
    FrobSet s = frob_set(p2(), {Int(0), Int(0), Int(0)}, 6);
    CHECK(s.stabilized);
    CHECK(s.classes == thomsen_collection(p2()));
  }
  {
    FrobSet s = frob_set(hirzebruch(1), IntVec(4, Int(0)), 6);
    CHECK(s.stabilized);
    CHECK(s.classes == thomsen_collection(hirzebruch(1)));
  }
  {
    // O(-3) on P^2 excludes O
    FrobSet s = frob_set(p2(), {Int(-3), Int(0), Int(0)});
    CHECK(s.classes.count(cls(p2(), {0, 0, 0})) == 0);
    CHECK(s.classes.count(cls(p2(), {-1, 0, 0})) == 1);
  }
  {
    // O(-1) on P^1 excludes O
    FrobSet s = frob_set(p1(), {Int(-1), Int(0)});
    CHECK(s.classes.count(cls(p1(), {0, 0})) == 0);
    CHECK(s.classes.count(cls(p1(), {-1, 0})) == 1);
  }
}

TEST_CASE("zonotopes") {
  {
    // P^2: interval [-3, 0]
    StackyFan f = p2();
    Zonotope z = zonotope_vertices(f, pic_coordinates(f));
    REQUIRE(z.dim == 1);
    REQUIRE(z.vertices.size() == 2);
    IntVec lo = z.vertices[0], hi = z.vertices[1];
    CHECK(((lo == IntVec{Int(-3)} && hi == IntVec{Int(0)}) ||
           (lo == IntVec{Int(0)} && hi == IntVec{Int(-3)})));
  }
  {
    // F_b vertices in the (D_1, D_2) basis
    for (long b : {1L, 2L, 4L}) {
      StackyFan h = hirzebruch(b);
      std::vector<IntVec> basis{{Int(1), Int(0), Int(0), Int(0)}, {Int(0), Int(1), Int(0), Int(0)}};
      Zonotope z = zonotope_vertices(h, pic_coordinates_in_basis(h, basis));
      std::set<IntVec> vs(z.vertices.begin(), z.vertices.end());
      std::set<IntVec> expect{{Int(0), Int(0)},      {Int(-2), Int(0)},
                              {Int(0), Int(-1)},     {Int(-b), Int(-2)},
                              {Int(-b - 2), Int(-1)}, {Int(-b - 2), Int(-2)}};
      CHECK(vs == expect);
    }
    // b = 0 has only four vertices
    StackyFan h0 = hirzebruch(0);
    std::vector<IntVec> basis{{Int(1), Int(0), Int(0), Int(0)}, {Int(0), Int(1), Int(0), Int(0)}};
    Zonotope z0 = zonotope_vertices(h0, pic_coordinates_in_basis(h0, basis));
    CHECK(z0.vertices.size() == 4);
  }
}

TEST_CASE("star membership and lattice points") {
  StackyFan f = p2();
  Zonotope z = zonotope_vertices(f, pic_coordinates(f));
  // identify the coordinate sign: the image of -D_0
  IntVec g = z.generators[0];
  long sgn = g[0] > 0 ? 1 : -1;  // g is the image of -D_rho
  auto coord = [&](long k) { return RatVec{Rat(sgn * -k)}; };  // class of O(k)
  // interior point: star is the open interval
  CHECK(star_contains(z, coord(-1), coord(-2)));
  CHECK(star_contains(z, coord(-1), coord(-1)));
  CHECK(!star_contains(z, coord(-1), coord(0)));
  CHECK(!star_contains(z, coord(-1), coord(-3)));
  CHECK(star_lattice_points(z, coord(-1)).size() == 2);
  // at the vertex 0 the star is the half-open interval (-3, 0]
  CHECK(star_contains(z, coord(0), coord(0)));
  CHECK(star_contains(z, coord(0), coord(-2)));
  CHECK(!star_contains(z, coord(0), coord(-3)));
  CHECK(star_lattice_points(z, coord(0)).size() == 3);
  CHECK_THROWS_WITH((void)star_lattice_points(z, coord(1)), "POINT_OUTSIDE_Z");
}

TEST_CASE("translated cones") {
  StackyFan f = p2();
  Zonotope z = zonotope_vertices(f, pic_coordinates(f));
  IntVec g = z.generators[0];
  long sgn = g[0] > 0 ? 1 : -1;
  auto coord = [&](long k) { return RatVec{Rat(sgn * -k)}; };
  // C_0 = [0, inf), C_{-3} = (-inf, -3], C_{-1} = R
  CHECK(translated_cone_contains(z, coord(0), coord(5)));
  CHECK(!translated_cone_contains(z, coord(0), coord(-1)));
  CHECK(translated_cone_contains(z, coord(-3), coord(-7)));
  CHECK(!translated_cone_contains(z, coord(-3), coord(-2)));
  CHECK(translated_cone_contains(z, coord(-1), coord(100)));
  CHECK(translated_cone_contains(z, coord(-1), coord(-100)));
  CHECK(translated_cone_contains(z, coord(0), coord(0)));
}

TEST_CASE("frobenius containment in the scaled zonotope") {
  // every summand class lies in ((ell-1)/ell) Z + (1/ell)[D]
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> dd(-3, 3);
  for (const StackyFan& f : {p2(), hirzebruch(2)}) {
    PicCoords pc = pic_coordinates(f);
    Zonotope z = zonotope_vertices(f, pc);
    for (int iter = 0; iter < 8; ++iter) {
      IntVec div(f.nrays());
      for (auto& x : div) x = dd(rng);
      Int ell = 2 + long(rng() % 3);
      IntVec dcoord = pc.proj.mul_vec(div);
      FrobDecomposition dec = frob_pushforward(f, div, ell);
      for (const auto& [c, mult] : dec.summands) {
        IntVec e = pc.proj.mul_vec(c.coeffs);
        // check ell*E - [D] lies in (ell-1) Z
        for (const auto& fac : z.facets) {
          Int val = 0;
          for (size_t i = 0; i < z.dim; ++i) val += fac.normal[i] * (ell * e[i] - dcoord[i]);
          CHECK(val <= (ell - 1) * fac.offset);
        }
      }
    }
  }
}

TEST_CASE("cube stability: frob_set equals the star for cube divisors") {
  for (const StackyFan& f : {p2(), hirzebruch(1)}) {
    PicCoords pc = pic_coordinates(f);
    Zonotope z = zonotope_vertices(f, pc);
    size_t n = f.nrays();
    for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
      IntVec div(n, Int(0));
      for (size_t r = 0; r < n; ++r)
        if (mask & (size_t(1) << r)) div[r] = -1;
      FrobSet s = frob_set(f, div);
      IntVec dc = pc.proj.mul_vec(div);
      RatVec p(z.dim);
      for (size_t i = 0; i < z.dim; ++i) p[i] = Rat(dc[i]);
      std::set<IntVec> star;
      for (const IntVec& pt : star_lattice_points(z, p)) star.insert(pt);
      std::set<IntVec> frob;
      for (const DivisorClass& c : s.classes) frob.insert(pc.proj.mul_vec(c.coeffs));
      CHECK(frob == star);
    }
  }
}

TEST_CASE("vertex criterion") {
  // O(sum_A -D_rho) in frob_set(D) iff D is linearly equivalent to the BH form
  StackyFan f = p2();
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<long> dd(-4, 2);
  for (int iter = 0; iter < 12; ++iter) {
    IntVec div(f.nrays());
    for (auto& x : div) x = dd(rng);
    FrobSet s = frob_set(f, div, 8);  // horizon ell <= 8 sees shifts r <= 7
    for (size_t mask = 0; mask < 8; ++mask) {
      IntVec e(f.nrays(), Int(0));
      for (size_t r = 0; r < 3; ++r)
        if (mask & (size_t(1) << r)) e[r] = -1;
      bool in_frob = s.classes.count(pic_canonical_form(e, f)) == 1;
      // brute-force search for the BH form: D ~ E + sum_{rho not in A} r D_rho
      //                                            - sum_{rho in A} r D_rho, r >= 0
      bool bh = false;
      for (long r0 = 0; r0 <= 7 && !bh; ++r0)
        for (long r1 = 0; r1 <= 7 && !bh; ++r1)
          for (long r2 = 0; r2 <= 7 && !bh; ++r2) {
            IntVec cand = e;
            long rr[3] = {r0, r1, r2};
            for (size_t r = 0; r < 3; ++r)
              cand[r] += (mask & (size_t(1) << r)) ? -rr[r] : rr[r];
            if (pic_canonical_form(cand, f) == pic_canonical_form(div, f)) bh = true;
          }
      CHECK(in_frob == bh);
    }
  }
}

TEST_CASE("cohomology oracle") {
  CHECK(!cohomology_nonvanishing(p1(), {Int(-1), Int(0)}));
  CHECK(cohomology_nonvanishing(p1(), {Int(-2), Int(0)}));
  CHECK(cohomology_nonvanishing(p1(), {Int(0), Int(0)}));
  CHECK(cohomology_nonvanishing(p2(), {Int(-3), Int(0), Int(0)}));
  CHECK(!cohomology_nonvanishing(p2(), {Int(-1), Int(0), Int(0)}));
  CHECK(!cohomology_nonvanishing(p2(), {Int(-2), Int(0), Int(0)}));
  {
    std::vector<size_t> h = cohomology_dims(p2(), {Int(-3), Int(0), Int(0)});
    CHECK(h == std::vector<size_t>{0, 0, 1});  // Serre dual of O
    h = cohomology_dims(p2(), {Int(2), Int(0), Int(0)});
    CHECK(h == std::vector<size_t>{6, 0, 0});
    h = cohomology_dims(p1(), {Int(3), Int(0)});
    CHECK(h == std::vector<size_t>{4, 0});
    h = cohomology_dims(product_stacky_fan(p1(), p1()), {Int(-2), Int(0), Int(1), Int(0)});
    CHECK(h == std::vector<size_t>{0, 2, 0});  // H^1(O(-2)) x H^0(O(1))
  }
}

TEST_CASE("linear inclusions") {
  {
    auto incl = linear_inclusions(p2());
    CHECK(incl.size() == 2);  // only the identity point and the identity
    CHECK(incl.front().source.rank_N == 0);
    CHECK(incl.back().source.rank_N == 2);
  }
  {
    auto incl = linear_inclusions(hirzebruch(2));
    REQUIRE(incl.size() == 3);  // point, one P^1, identity
    CHECK(incl[1].source.rank_N == 1);
    CHECK(is_complete(incl[1].source));
    // the P^1 sits on the u_1 = 0 line (rays (0,1) and (0,-1))
    IntVec img = incl[1].Phi.mul_vec(incl[1].source.rays[0]);
    CHECK(img[0] == 0);
  }
  {
    auto incl = linear_inclusions(double_blowup());
    REQUIRE(incl.size() == 4);  // point, two P^1s, identity
    CHECK(incl[1].source.rank_N == 1);
    CHECK(incl[2].source.rank_N == 1);
  }
  {
    // F_0 = P^1 x P^1 has both axis inclusions
    auto incl = linear_inclusions(hirzebruch(0));
    CHECK(incl.size() == 4);
  }
}

TEST_CASE("generation reports") {
  {
    // P^2: obstructed exactly for k in (-3, 0)
    for (long k = -5; k <= 2; ++k) {
      GenerationReport r = generation_report(p2(), {Int(k), Int(0), Int(0)}, false);
      bool expect = !(k > -3 && k < 0);
      CHECK(r.unobstructed == expect);
    }
  }
  {
    // double blow-up: the class (-1, 1, -1) in basis (D_1, D_2, E_1) is
    // obstructed by both P^1 inclusions despite nonvanishing cohomology;
    // rays: D_1 = ray0 (1,0), D_2 = ray2 (0,1), E_1 = ray1 (1,1)
    StackyFan x = double_blowup();
    IntVec div(5, Int(0));
    div[0] = -1;
    div[2] = 1;
    div[1] = -1;
    GenerationReport r = generation_report(x, div, false);
    CHECK(!r.unobstructed);
    size_t obstructing = 0;
    bool identity_ok = false;
    for (const auto& e : r.inclusions) {
      if (e.dim_y == 1 && !e.nonzero_homs) ++obstructing;
      if (e.dim_y == 2) identity_ok = e.nonzero_homs;
    }
    CHECK(obstructing == 2);
    CHECK(identity_ok);  // cohomology of O(D) itself does not vanish
  }
  {
    // Hirzebruch F_1: multiplicity identity for ell = 2 on every inclusion
    GenerationReport r = generation_report(hirzebruch(1), {Int(1), Int(0), Int(0), Int(0)}, true, 2);
    for (const auto& e : r.inclusions) {
      CHECK(e.multiplicity_identity_checked);
      CHECK(e.multiplicity_identity_holds);
    }
  }
}

TEST_CASE("hirzebruch generation table matches the figure") {
  // blue dots and red diamonds of the F_1 picture, in the (D_1, D_2) basis
  StackyFan h = hirzebruch(1);
  auto classify = [&](long a, long b) {
    IntVec div(4, Int(0));
    div[0] = a;
    div[1] = b;
    return generation_report(h, div, false).unobstructed;
  };
  // interior-of-zonotope classes are obstructed
  CHECK(!classify(-1, 0));
  CHECK(!classify(-1, -1));
  CHECK(!classify(-2, -1));
  CHECK(!classify(-3, -1));
  CHECK(!classify(0, -1));
  CHECK(!classify(-2, -2));
  // vertices with nonvanishing cohomology and exterior classes generate
  CHECK(classify(0, 0));
  CHECK(classify(-2, 0));
  CHECK(classify(-3, -2));
  CHECK(classify(-1, -2));
  CHECK(classify(1, 1));
  CHECK(classify(1, 0));
  CHECK(classify(1, -2));
  CHECK(classify(0, -2));
  CHECK(classify(-4, -3));
  CHECK(classify(-4, 0));
  CHECK(classify(-4, 1));
  CHECK(classify(0, 1));
  // red diamonds outside the zonotope
  CHECK(!classify(1, -1));
  CHECK(!classify(-4, -1));
}
