#include "toricres.h"

#include <json.hpp>
#include <cstring>
#include <string>

#include "toricres/complex.hpp"
#include "toricres/frobenius.hpp"
#include "toricres/json_io.hpp"
#include "toricres/render.hpp"

using namespace toricres;

struct trs_fan {
  StackyFan fan;
};
struct trs_morphism {
  StackyMorphism m;
};
struct trs_quiver {
  ExitPathQuiver q;
};
struct trs_complex {
  AugmentedComplex c;
};

namespace {

thread_local std::string g_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename F>
trs_status guarded(F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    g_error = e.what();
    return TRS_ERR_INPUT;
  } catch (const std::exception& e) {
    g_error = e.what();
    return TRS_ERR_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char* trs_last_error(void) { return g_error.c_str(); }

void trs_string_free(char* s) { std::free(s); }
void trs_fan_free(trs_fan* f) { delete f; }
void trs_morphism_free(trs_morphism* m) { delete m; }
void trs_quiver_free(trs_quiver* q) { delete q; }
void trs_complex_free(trs_complex* c) { delete c; }

trs_status trs_fan_parse(const char* json, trs_fan** out) {
  return guarded([&] {
    *out = new trs_fan{fan_from_json(json)};
    return TRS_OK;
  });
}

trs_status trs_fan_to_json(const trs_fan* f, char** out) {
  return guarded([&] {
    *out = dup_string(fan_to_json(f->fan));
    return TRS_OK;
  });
}

trs_status trs_fan_validate(trs_fan* f, char** report_json, int* valid) {
  return guarded([&] {
    ValidationReport r = validate_stacky_fan(f->fan);
    if (report_json) *report_json = dup_string(validation_to_json(r));
    if (valid) *valid = r.valid ? 1 : 0;
    return TRS_OK;
  });
}

trs_status trs_fan_thomsen(const trs_fan* f, char** classes_json) {
  return guarded([&] {
    nlohmann::json out;
    auto classes = thomsen_collection(f->fan);
    nlohmann::json arr = nlohmann::json::array();
    for (const DivisorClass& c : classes) {
      nlohmann::json v = nlohmann::json::array();
      for (const Int& x : c.coeffs) v.push_back(x.get_si());
      arr.push_back(v);
    }
    out["classes"] = arr;
    out["count"] = classes.size();
    *classes_json = dup_string(out.dump(2) + "\n");
    return TRS_OK;
  });
}

trs_status trs_fan_product(const trs_fan* a, const trs_fan* b, trs_fan** out) {
  return guarded([&] {
    *out = new trs_fan{product_stacky_fan(a->fan, b->fan)};
    return TRS_OK;
  });
}

trs_status trs_morphism_parse(const char* json, const trs_fan* source, const trs_fan* target,
                              trs_morphism** out) {
  return guarded([&] {
    MorphismFile mf = morphism_from_json(json);
    StackyMorphism m{source->fan, target->fan, mf.Phi, mf.phi};
    if (validate_morphism(m) != MorphismError::None)
      throw std::invalid_argument("INCOMPATIBLE_DIAGRAM");
    *out = new trs_morphism{std::move(m)};
    return TRS_OK;
  });
}

trs_status trs_point_morphism(const trs_fan* target, trs_morphism** out) {
  return guarded([&] {
    *out = new trs_morphism{identity_point_morphism(target->fan)};
    return TRS_OK;
  });
}

trs_status trs_diagonal_morphism(const trs_fan* f, trs_morphism** out) {
  return guarded([&] {
    *out = new trs_morphism{diagonal_morphism(f->fan)};
    return TRS_OK;
  });
}

trs_status trs_frobenius_morphism(const trs_fan* f, int64_t ell, trs_morphism** out) {
  return guarded([&] {
    *out = new trs_morphism{frobenius_factor_morphism(f->fan, Int((long)ell))};
    return TRS_OK;
  });
}

trs_status trs_morphism_target_json(const trs_morphism* m, char** fan_json) {
  return guarded([&] {
    *fan_json = dup_string(fan_to_json(m->m.target));
    return TRS_OK;
  });
}

trs_status trs_stratify(const trs_morphism* m, size_t codim_bound, trs_quiver** out) {
  return guarded([&] {
    *out = new trs_quiver{build_quiver(m->m, codim_bound)};
    return TRS_OK;
  });
}

trs_status trs_quiver_to_json(const trs_quiver* q, char** out) {
  return guarded([&] {
    *out = dup_string(quiver_to_json(q->q));
    return TRS_OK;
  });
}

trs_status trs_quiver_render_svg(const trs_quiver* q, int cell_labels, int hairs, char** svg) {
  return guarded([&] {
    RenderOptions opt;
    opt.cell_labels = cell_labels != 0;
    opt.hairs = hairs != 0;
    *svg = dup_string(render_svg(q->q, opt));
    return TRS_OK;
  });
}

trs_status trs_resolve(const trs_morphism* m, size_t codim_bound, trs_complex** out) {
  return guarded([&] {
    *out = new trs_complex{build_resolution(m->m, codim_bound)};
    return TRS_OK;
  });
}

trs_status trs_diagonal_resolution(const trs_fan* f, size_t codim_bound, trs_complex** out) {
  return guarded([&] {
    *out = new trs_complex{diagonal_resolution(f->fan, codim_bound)};
    return TRS_OK;
  });
}

trs_status trs_complex_to_json(const trs_complex* c, const char* fan_path, const char* phi_path,
                               char** out) {
  return guarded([&] {
    *out = dup_string(complex_to_json(c->c, fan_path ? fan_path : "", phi_path ? phi_path : ""));
    return TRS_OK;
  });
}

trs_status trs_complex_parse(const char* json, const trs_fan* fan, const trs_morphism* phi,
                             trs_complex** out) {
  return guarded([&] {
    AugmentedComplex c = complex_from_json(json, fan->fan);
    if (phi) c.phi = phi->m;
    *out = new trs_complex{std::move(c)};
    return TRS_OK;
  });
}

trs_status trs_complex_refs(const char* complex_json, char** fan_path, char** phi_path) {
  return guarded([&] {
    nlohmann::json j = nlohmann::json::parse(complex_json);
    if (fan_path) *fan_path = dup_string(j.at("fan").get<std::string>());
    if (phi_path) *phi_path = dup_string(j.at("phi").get<std::string>());
    return TRS_OK;
  });
}

namespace {

void require_morphism(const AugmentedComplex& c) {
  if (c.phi.target.rank_L == 0 && c.phi.target.nrays() == 0 && c.cx.fan.nrays() != 0)
    throw std::invalid_argument("complex carries no morphism data; parse it with a morphism");
}

}  // namespace

trs_status trs_restrict(const trs_complex* c, const size_t* rays, size_t nrays,
                        trs_complex** restricted, trs_complex** reduced, char** chart_fan_json) {
  return guarded([&] {
    AugmentedComplex base = c->c;
    require_morphism(base);
    if (!base.quiver) base = build_resolution(base.phi);
    RestrictionResult r = restrict_to_chart(base, std::vector<size_t>(rays, rays + nrays));
    if (restricted) {
      AugmentedComplex rc;
      rc.cx = r.restricted;
      rc.alpha = c->c.alpha;
      rc.phi = c->c.phi;
      *restricted = new trs_complex{std::move(rc)};
    }
    if (reduced) {
      AugmentedComplex rc;
      rc.cx = r.reduced;
      rc.alpha = r.reduced_alpha;
      rc.phi = c->c.phi;
      *reduced = new trs_complex{std::move(rc)};
    }
    if (chart_fan_json) *chart_fan_json = dup_string(fan_to_json(r.chart_fan));
    return TRS_OK;
  });
}

trs_status trs_pushforward(const trs_complex* c, const trs_morphism* quotient,
                           char** summands_json) {
  return guarded([&] {
    AugmentedComplex base = c->c;
    require_morphism(base);
    if (!base.quiver) base = build_resolution(base.phi);
    auto parts = pushforward_finite_quotient_complex(base, quotient->m);
    nlohmann::json out = nlohmann::json::array();
    for (const auto& p : parts) {
      nlohmann::json jp;
      nlohmann::json q = nlohmann::json::array();
      for (const Int& x : p.q_rep) q.push_back(x.get_si());
      jp["q"] = q;
      AugmentedComplex wrap;
      wrap.cx = p.complex;
      wrap.phi = quotient->m;
      jp["complex"] = nlohmann::json::parse(complex_to_json(wrap, "", ""));
      out.push_back(jp);
    }
    *summands_json = dup_string(out.dump(2) + "\n");
    return TRS_OK;
  });
}

trs_status trs_verify(const trs_complex* c, size_t trials, uint64_t seed, int check_koszul,
                      char** report_json, int* ok) {
  return guarded([&] {
    nlohmann::json out;
    bool all_ok = true;
    require_morphism(c->c);
    bool d2 = check_d_squared(c->c.cx);
    bool hom = check_homogeneity(c->c.cx);
    out["d_squared"] = d2;
    out["homogeneous"] = hom;
    all_ok = all_ok && d2 && hom;
    AugmentedComplex base = c->c;
    if (!base.quiver) {
      // rebuild the quiver-backed resolution and require agreement
      AugmentedComplex rebuilt = build_resolution(base.phi);
      bool matches = find_iso_up_to_units(base.cx, rebuilt.cx).has_value();
      out["matches_rebuilt"] = matches;
      all_ok = all_ok && matches;
      base = std::move(rebuilt);
    }
    FiberReport fr = fiber_exactness_check(base, trials, seed);
    out["fiber"] = nlohmann::json::parse(fiber_to_json(fr, seed));
    all_ok = all_ok && fr.ok;
    if (check_koszul) {
      nlohmann::json kj = nlohmann::json::array();
      for (const auto& sigma : base.phi.target.maximal_cones()) {
        std::vector<size_t> removed;
        for (size_t r = 0; r < base.phi.target.nrays(); ++r)
          if (std::find(sigma.begin(), sigma.end(), r) == sigma.end()) removed.push_back(r);
        RestrictionResult rr = restrict_to_chart(base, removed);
        bool kk = koszul_compare(rr, base);
        kj.push_back(kk);
        all_ok = all_ok && kk;
      }
      out["koszul_charts"] = kj;
    }
    out["ok"] = all_ok;
    if (report_json) *report_json = dup_string(out.dump(2) + "\n");
    if (ok) *ok = all_ok ? 1 : 0;
    return TRS_OK;
  });
}

trs_status trs_frobenius_pushforward(const trs_fan* f, const char* divisor_json, int64_t ell,
                                     char** out) {
  return guarded([&] {
    nlohmann::json dj = nlohmann::json::parse(divisor_json);
    IntVec div;
    for (const auto& x : dj) div.push_back(Int(x.get<long>()));
    if (div.size() == 1 && f->fan.nrays() > 1)
      div.assign(f->fan.nrays(), div[0]);  // scalar shorthand
    FrobDecomposition d = frob_pushforward(f->fan, div, Int((long)ell));
    *out = dup_string(frob_to_json(f->fan, d));
    return TRS_OK;
  });
}

trs_status trs_frobenius_set(const trs_fan* f, const char* divisor_json, size_t rounds,
                             char** out) {
  return guarded([&] {
    nlohmann::json dj = nlohmann::json::parse(divisor_json);
    IntVec div;
    for (const auto& x : dj) div.push_back(Int(x.get<long>()));
    if (div.size() == 1 && f->fan.nrays() > 1) div.assign(f->fan.nrays(), div[0]);
    FrobSet s = frob_set(f->fan, div, rounds ? rounds : 4);
    *out = dup_string(frobset_to_json(f->fan, s));
    return TRS_OK;
  });
}

trs_status trs_generation_report(const trs_fan* f, const char* divisor_json, int characteristic,
                                 int verify_multiplicity, char** out) {
  return guarded([&] {
    nlohmann::json dj = nlohmann::json::parse(divisor_json);
    IntVec div;
    for (const auto& x : dj) div.push_back(Int(x.get<long>()));
    if (div.size() == 1 && f->fan.nrays() > 1) div.assign(f->fan.nrays(), div[0]);
    GenerationReport r = generation_report(f->fan, div, verify_multiplicity != 0);
    r.characteristic_note = characteristic;
    PicCoords pc = pic_coordinates(f->fan);
    Zonotope z = zonotope_vertices(f->fan, pc);
    *out = dup_string(generation_to_json(r, &z));
    return TRS_OK;
  });
}

}  // extern "C"
