#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "fixtures.hpp"
#include "toricres.h"
#include "toricres/json_io.hpp"
#include "toricres/render.hpp"

using namespace toricres;
using namespace toricres::fixtures;

namespace {

struct Owned {
  char* s = nullptr;
  ~Owned() { trs_string_free(s); }
};

}  // namespace

TEST_CASE("fan json round trip") {
  for (const StackyFan& f : {p2(), weighted_p12(), hirzebruch(3)}) {
    std::string text = fan_to_json(f);
    StackyFan g = fan_from_json(text);
    CHECK(g == f);
    CHECK(fan_to_json(g) == text);  // byte-identical re-emission
  }
}

TEST_CASE("big integers serialize as decimal strings") {
  StackyFan f = p1();
  f.beta.at(0, 0) = Int("123456789123456789123456789");
  std::string text = fan_to_json(f);
  CHECK(text.find("\"123456789123456789123456789\"") != std::string::npos);
  StackyFan g = fan_from_json(text);
  CHECK(g.beta.at(0, 0) == f.beta.at(0, 0));
}

TEST_CASE("complex json round trip") {
  AugmentedComplex c = build_resolution(identity_point_morphism(p2()));
  std::string text = complex_to_json(c, "p2.json", "(identity point)");
  AugmentedComplex d = complex_from_json(text, p2());
  CHECK(d.alpha == c.alpha);
  REQUIRE(d.cx.terms.size() == c.cx.terms.size());
  for (size_t k = 0; k < c.cx.terms.size(); ++k) {
    CHECK(d.cx.terms[k].size() == c.cx.terms[k].size());
    for (size_t i = 0; i < c.cx.terms[k].size(); ++i) {
      CHECK(d.cx.terms[k][i] == c.cx.terms[k][i]);
      CHECK(d.cx.term_supports[k][i] == c.cx.term_supports[k][i]);
    }
  }
  for (size_t k = 1; k < c.cx.diff.size(); ++k) CHECK(d.cx.diff[k] == c.cx.diff[k]);
  CHECK(complex_to_json(d, "p2.json", "(identity point)") == text);
}

TEST_CASE("morphism json round trip") {
  StackyMorphism q = orbifold_quotient();
  std::string text = morphism_to_json("a1.json", "orb.json", q.Phi, q.phi);
  MorphismFile mf = morphism_from_json(text);
  CHECK(mf.source_path == "a1.json");
  CHECK(mf.target_path == "orb.json");
  CHECK(mf.Phi == q.Phi);
  CHECK(mf.phi == q.phi);
}

TEST_CASE("svg rendering") {
  {
    ExitPathQuiver q = build_quiver(identity_point_morphism(p2()));
    std::string svg = render_svg(q);
    CHECK(svg.find("<svg") == 0);
    // six labeled cells
    size_t labels = 0;
    for (size_t at = svg.find("<text"); at != std::string::npos; at = svg.find("<text", at + 1))
      ++labels;
    CHECK(labels == 6);
    // deterministic
    CHECK(render_svg(q) == svg);
    RenderOptions bare;
    bare.cell_labels = false;
    bare.hairs = false;
    std::string plain = render_svg(q, bare);
    CHECK(plain.find("<text") == std::string::npos);
  }
  {
    // interval rendering with endpoint identification marks
    ExitPathQuiver q = build_quiver(identity_point_morphism(p1()));
    std::string svg = render_svg(q);
    CHECK(svg.find("stroke-dasharray") != std::string::npos);
  }
  {
    // doubled hairs on the product diagonal
    ExitPathQuiver q = build_quiver(diagonal_morphism(p2()));
    std::string svg = render_svg(q);
    CHECK(svg.find("<svg") == 0);
    ExitPathQuiver q3 = build_quiver(identity_point_morphism(pn(3)));
    CHECK_THROWS_WITH((void)render_svg(q3), "DIM_TOO_HIGH");
  }
}

TEST_CASE("c api surface") {
  std::string p2_text = fan_to_json(p2());
  trs_fan* fan = nullptr;
  REQUIRE(trs_fan_parse(p2_text.c_str(), &fan) == TRS_OK);
  int valid = 0;
  {
    Owned rep;
    REQUIRE(trs_fan_validate(fan, &rep.s, &valid) == TRS_OK);
    CHECK(valid == 1);
    CHECK(std::string(rep.s).find("\"valid\": true") != std::string::npos);
  }
  {
    Owned th;
    REQUIRE(trs_fan_thomsen(fan, &th.s) == TRS_OK);
    CHECK(std::string(th.s).find("\"count\": 3") != std::string::npos);
  }
  trs_morphism* pt = nullptr;
  REQUIRE(trs_point_morphism(fan, &pt) == TRS_OK);
  trs_quiver* q = nullptr;
  REQUIRE(trs_stratify(pt, 4, &q) == TRS_OK);
  {
    Owned sj, svg;
    REQUIRE(trs_quiver_to_json(q, &sj.s) == TRS_OK);
    CHECK(std::string(sj.s).find("\"strata\"") != std::string::npos);
    REQUIRE(trs_quiver_render_svg(q, 1, 1, &svg.s) == TRS_OK);
    CHECK(std::string(svg.s).find("<svg") == 0);
  }
  trs_complex* c = nullptr;
  REQUIRE(trs_resolve(pt, 4, &c) == TRS_OK);
  Owned cj;
  REQUIRE(trs_complex_to_json(c, "p2.json", "(identity point)", &cj.s) == TRS_OK);
  {
    Owned fp, pp;
    REQUIRE(trs_complex_refs(cj.s, &fp.s, &pp.s) == TRS_OK);
    CHECK(std::string(fp.s) == "p2.json");
    CHECK(std::string(pp.s) == "(identity point)");
  }
  {
    // parse back and verify through the C surface
    trs_complex* c2 = nullptr;
    REQUIRE(trs_complex_parse(cj.s, fan, pt, &c2) == TRS_OK);
    Owned rep;
    int ok = 0;
    REQUIRE(trs_verify(c2, 10, 0, 1, &rep.s, &ok) == TRS_OK);
    CHECK(ok == 1);
    trs_complex_free(c2);
  }
  {
    // restriction through the C surface
    size_t rays[1] = {2};
    trs_complex *restr = nullptr, *red = nullptr;
    Owned chart;
    REQUIRE(trs_restrict(c, rays, 1, &restr, &red, &chart.s) == TRS_OK);
    CHECK(std::string(chart.s).find("\"rays\"") != std::string::npos);
    trs_complex_free(restr);
    trs_complex_free(red);
  }
  {
    Owned fj;
    REQUIRE(trs_frobenius_pushforward(fan, "[0,0,0]", 2, &fj.s) == TRS_OK);
    CHECK(std::string(fj.s).find("\"total\": 4") != std::string::npos);
    Owned fs;
    REQUIRE(trs_frobenius_set(fan, "[0,0,0]", 4, &fs.s) == TRS_OK);
    Owned gr;
    REQUIRE(trs_generation_report(fan, "[-1,0,0]", 0, 0, &gr.s) == TRS_OK);
    CHECK(std::string(gr.s).find("\"unobstructed\": false") != std::string::npos);
  }
  {
    // error paths surface through status codes and trs_last_error
    trs_fan* bad = nullptr;
    CHECK(trs_fan_parse("{", &bad) != TRS_OK);
    CHECK(std::string(trs_last_error()).size() > 0);
  }
  trs_complex_free(c);
  trs_quiver_free(q);
  trs_morphism_free(pt);
  trs_fan_free(fan);
}

TEST_CASE("c api orbifold pushforward") {
  std::string a1_text = fan_to_json(an(1));
  std::string orb_text = fan_to_json(orbifold_line());
  trs_fan *a1 = nullptr, *orb = nullptr;
  REQUIRE(trs_fan_parse(a1_text.c_str(), &a1) == TRS_OK);
  REQUIRE(trs_fan_parse(orb_text.c_str(), &orb) == TRS_OK);
  std::string mor = morphism_to_json("a1.json", "orb.json", IntMat::identity(1), IntMat{{2}});
  trs_morphism* pi = nullptr;
  REQUIRE(trs_morphism_parse(mor.c_str(), a1, orb, &pi) == TRS_OK);
  trs_morphism* pt = nullptr;
  REQUIRE(trs_point_morphism(a1, &pt) == TRS_OK);
  trs_complex* c = nullptr;
  REQUIRE(trs_resolve(pt, 4, &c) == TRS_OK);
  Owned out;
  REQUIRE(trs_pushforward(c, pi, &out.s) == TRS_OK);
  CHECK(std::string(out.s).find("\"q\"") != std::string::npos);
  trs_complex_free(c);
  trs_morphism_free(pt);
  trs_morphism_free(pi);
  trs_fan_free(orb);
  trs_fan_free(a1);
}
