#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "toricres/morse.hpp"

using namespace toricres;
using namespace toricres::fixtures;

namespace {

// exact chain-map and homotopy identities for a reduction
void check_reduction_identities(const MorseReductionResult& r) {
  size_t degs = r.original.gens.size();
  // d~ . p = p . d and d . i = i . d~
  for (size_t k = 1; k < degs; ++k) {
    CHECK(r.p[k - 1].mul(r.original.d[k]) == r.reduced.d[k].mul(r.p[k]));
    CHECK(r.original.d[k].mul(r.inc[k]) == r.inc[k - 1].mul(r.reduced.d[k]));
  }
  // p . i = id
  for (size_t k = 0; k < degs; ++k) {
    PolyMat pi = r.p[k].mul(r.inc[k]);
    CHECK(pi == PolyMat::identity(pi.rows(), r.original.nvars));
  }
  // i . p - id = d H + H d
  for (size_t k = 0; k < degs; ++k) {
    PolyMat ip = r.inc[k].mul(r.p[k]);
    PolyMat idm = PolyMat::identity(ip.rows(), r.original.nvars);
    PolyMat rhs(ip.rows(), ip.cols());
    if (k + 1 < degs) rhs = rhs + r.original.d[k + 1].mul(r.h[k]);
    if (k >= 1) rhs = rhs + r.h[k - 1].mul(r.original.d[k]);
    CHECK(ip - idm == rhs);
  }
  // reduced differential squares to zero and matches the flow-line formula
  CHECK(check_d_squared(r.reduced));
  for (size_t k = 0; k < r.reduced.d.size(); ++k) CHECK(r.reduced.d[k] == r.reduced_flowline.d[k]);
}

// all unit-valued edges eligible for a matching
std::vector<size_t> unit_edges(const MorseQuiver& q, const QuiverSheaf& f) {
  std::vector<size_t> out;
  for (size_t e = 0; e < q.edges.size(); ++e)
    if (f.values[e].is_unit()) out.push_back(e);
  return out;
}

Matching random_valid_matching(const MorseQuiver& q, const QuiverSheaf& f, std::mt19937_64& rng) {
  std::vector<size_t> cand = unit_edges(q, f);
  std::shuffle(cand.begin(), cand.end(), rng);
  Matching m;
  for (size_t e : cand) {
    m.push_back(e);
    if (!validate_acyclic_matching(q, m)) m.pop_back();
  }
  return m;
}

}  // namespace

TEST_CASE("acyclic matching validation") {
  ExitPathQuiver q = build_quiver(identity_point_morphism(p2()));
  MorseQuiver mq = quiver_of(q);
  CHECK(validate_acyclic_matching(mq, {}));
  // pairing two edges at one vertex is not a matching
  size_t v = q.edges[0].src;
  std::vector<size_t> two;
  for (size_t e = 0; e < q.edges.size() && two.size() < 2; ++e)
    if (q.edges[e].src == v) two.push_back(e);
  REQUIRE(two.size() == 2);
  CHECK(!validate_acyclic_matching(mq, two));
}

TEST_CASE("sheaf complex assembly and d-squared") {
  for (const auto& m :
       {identity_point_morphism(p2()), identity_point_morphism(hirzebruch(2)),
        diagonal_morphism(p1()), identity_point_morphism(weighted_p12())}) {
    ExitPathQuiver q = build_quiver(m);
    ComplexMatrices c = sheaf_complex(quiver_of(q), sheaf_of(q));
    CHECK(check_d_squared(c));
  }
  // two vertices, one edge, constant sheaf
  MorseQuiver q2;
  q2.level = {1, 0};
  q2.edges.push_back({0, 1, -1});
  QuiverSheaf f2;
  f2.nvars = 1;
  f2.objects = {DivisorClass{{Int(0)}}, DivisorClass{{Int(0)}}};
  f2.values = {Poly::constant(Rat(1), 1)};
  ComplexMatrices c2 = sheaf_complex(q2, f2);
  REQUIRE(c2.d.size() == 2);
  CHECK(c2.d[1].at(0, 0) == Poly::constant(Rat(-1), 1));
}

TEST_CASE("rho-positive matching on the P^2 stratification") {
  ExitPathQuiver q = build_quiver(identity_point_morphism(p2()));
  MorseQuiver mq = quiver_of(q);
  QuiverSheaf sh = sheaf_of(q);
  // removing the third ray leaves a single matched pair (triangle, diagonal edge)
  Matching m = rho_positive_matching(q, 2);
  REQUIRE(m.size() == 1);
  CHECK(validate_acyclic_matching(mq, m));
  CHECK(q.strata[q.edges[m[0]].src].dim == 2);
  CHECK(q.strata[q.edges[m[0]].dst].dim == 1);
  // the matched edge is a unit
  CHECK(is_zero(q.edges[m[0]].exponent));

  // on P^1 both rays share the same wall: no matched edges
  ExitPathQuiver q1 = build_quiver(identity_point_morphism(p1()));
  CHECK(rho_positive_matching(q1, 0).empty());
  CHECK(rho_positive_matching(q1, 1).empty());

  // inactive ray errors
  ExitPathQuiver qd = build_quiver(diagonal_morphism(p1()));
  CHECK_THROWS_WITH((void)rho_positive_matching(qd, 99), "RAY_INACTIVE");
}

TEST_CASE("gradient flow lines") {
  ExitPathQuiver q = build_quiver(identity_point_morphism(p2()));
  MorseQuiver mq = quiver_of(q);
  // with the empty matching, flow lines are exactly the original edges
  for (size_t a = 0; a < q.strata.size(); ++a)
    for (size_t b = 0; b < q.strata.size(); ++b) {
      auto lines = gradient_flow_lines(mq, {}, a, b);
      size_t direct = 0;
      for (const ExitEdge& e : q.edges)
        if (e.src == a && e.dst == b) ++direct;
      CHECK(lines.size() == direct);
      for (const auto& l : lines) CHECK(l.size() == 1);
    }
  // with the rho-matching, composite lines of length three appear
  Matching m = rho_positive_matching(q, 2);
  size_t composite = 0;
  for (size_t a = 0; a < q.strata.size(); ++a)
    for (size_t b = 0; b < q.strata.size(); ++b)
      for (const auto& l : gradient_flow_lines(mq, m, a, b))
        if (l.size() == 3) ++composite;
  CHECK(composite > 0);
}

TEST_CASE("morse reduction with the empty matching is the identity") {
  ExitPathQuiver q = build_quiver(identity_point_morphism(p2()));
  MorseReductionResult r = morse_reduce(quiver_of(q), sheaf_of(q), {});
  CHECK(r.critical.size() == q.strata.size());
  for (size_t k = 0; k < r.original.d.size(); ++k) CHECK(r.original.d[k] == r.reduced.d[k]);
  for (size_t k = 0; k < r.h.size(); ++k) CHECK(r.h[k].is_zero());
  check_reduction_identities(r);
}

TEST_CASE("morse reduction identities on rho matchings") {
  for (const auto& mor : {identity_point_morphism(p2()), identity_point_morphism(hirzebruch(1)),
                          identity_point_morphism(weighted_p12())}) {
    ExitPathQuiver q = build_quiver(mor);
    for (size_t rho : q.torus.families) {
      Matching m = rho_positive_matching(q, rho);
      if (m.empty()) continue;
      MorseReductionResult r = morse_reduce(quiver_of(q), sheaf_of(q), m);
      check_reduction_identities(r);
      CHECK(r.critical.size() == q.strata.size() - 2 * m.size());
    }
  }
}

TEST_CASE("matching not respecting the sheaf is rejected") {
  ExitPathQuiver q = build_quiver(identity_point_morphism(p2()));
  // find a non-unit edge and try to match it
  for (size_t e = 0; e < q.edges.size(); ++e) {
    if (is_zero(q.edges[e].exponent)) continue;
    Matching m{e};
    if (!validate_acyclic_matching(quiver_of(q), m)) continue;
    CHECK_THROWS_WITH((void)morse_reduce(quiver_of(q), sheaf_of(q), m),
                      "MATCHING_NOT_RESPECTING");
    break;
  }
}

TEST_CASE("homology ranks agree under random matchings") {
  // random 2-d arrangements with random valid matchings; specialize the
  // variables at a random rational point and compare homology ranks
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<long> draw(1, 997);
  std::vector<StackyFan> fans{p2(), hirzebruch(1), hirzebruch(2), double_blowup(),
                              product_stacky_fan(p1(), p1())};
  size_t done = 0;
  for (size_t iter = 0; done < 30; ++iter) {
    const StackyFan& f = fans[iter % fans.size()];
    ExitPathQuiver q = build_quiver(identity_point_morphism(f));
    MorseQuiver mq = quiver_of(q);
    QuiverSheaf sh = sheaf_of(q);
    Matching m = random_valid_matching(mq, sh, rng);
    MorseReductionResult r = morse_reduce(mq, sh, m);
    RatVec pt(f.nrays());
    for (auto& v : pt) {
      v = Rat(Int(draw(rng)), Int(draw(rng)));
      v.canonicalize();
    }
    std::vector<RatMat> e0, e1;
    std::vector<size_t> d0, d1;
    for (size_t k = 0; k < r.original.d.size(); ++k) {
      e0.push_back(r.original.d[k].eval(pt));
      d0.push_back(r.original.gens[k].size());
      e1.push_back(r.reduced.d[k].eval(pt));
      d1.push_back(r.reduced.gens[k].size());
    }
    CHECK(homology_dims(e0, d0) == homology_dims(e1, d1));
    ++done;
  }
}
