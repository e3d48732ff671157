#include "toricres/json_io.hpp"

#include <json.hpp>
#include <stdexcept>

namespace toricres {

using nlohmann::json;

namespace {

const Int kJsonMax("9007199254740991");  // 2^53 - 1

json int_to_json(const Int& x) {
  if (x <= kJsonMax && x >= -kJsonMax) return json(x.get_si());
  return json(x.get_str());
}

Int int_from_json(const json& j) {
  if (j.is_number_integer()) return Int(j.get<long>());
  if (j.is_string()) return Int(j.get<std::string>());
  throw std::invalid_argument("expected an integer or decimal string");
}

json rat_to_json(const Rat& x) {
  if (x.get_den() == 1) return int_to_json(x.get_num());
  return json(x.get_str());
}

Rat rat_from_json(const json& j) {
  if (j.is_number_integer()) return Rat(j.get<long>());
  if (j.is_string()) {
    Rat r(j.get<std::string>());
    r.canonicalize();
    return r;
  }
  throw std::invalid_argument("expected a rational");
}

json vec_to_json(const IntVec& v) {
  json out = json::array();
  for (const Int& x : v) out.push_back(int_to_json(x));
  return out;
}

IntVec vec_from_json(const json& j) {
  IntVec out;
  for (const auto& x : j) out.push_back(int_from_json(x));
  return out;
}

json mat_to_json(const IntMat& m) {
  json out = json::array();
  for (size_t i = 0; i < m.rows(); ++i) out.push_back(vec_to_json(m.row(i)));
  return out;
}

IntMat mat_from_json(const json& j, size_t expect_cols = size_t(-1)) {
  std::vector<IntVec> rows;
  for (const auto& r : j) rows.push_back(vec_from_json(r));
  if (rows.empty()) return IntMat(0, expect_cols == size_t(-1) ? 0 : expect_cols);
  return IntMat::from_rows(rows);
}

json poly_to_json(const Poly& p) {
  json out = json::array();
  for (const Monomial& t : p.terms())
    out.push_back(json::array({rat_to_json(t.coeff), vec_to_json(t.exp)}));
  return out;
}

Poly poly_from_json(const json& j) {
  Poly p;
  for (const auto& t : j) p.add_term({rat_from_json(t.at(0)), vec_from_json(t.at(1))});
  return p;
}

}  // namespace

std::string fan_to_json(const StackyFan& f) {
  json out;
  out["rank_L"] = f.rank_L;
  out["rank_N"] = f.rank_N;
  out["beta"] = mat_to_json(f.beta);
  out["rays"] = json::array();
  for (const IntVec& r : f.rays) out["rays"].push_back(vec_to_json(r));
  out["cones"] = json::array();
  for (const ConeKey& c : f.cones) out["cones"].push_back(c);
  return out.dump(2) + "\n";
}

StackyFan fan_from_json(const std::string& text) {
  json j = json::parse(text);
  size_t rank_L = j.at("rank_L").get<size_t>();
  size_t rank_N = j.at("rank_N").get<size_t>();
  IntMat beta = mat_from_json(j.at("beta"), rank_L);
  if (beta.rows() == 0) beta = IntMat(rank_N, rank_L);
  std::vector<IntVec> rays;
  for (const auto& r : j.at("rays")) rays.push_back(vec_from_json(r));
  std::vector<ConeKey> cones;
  for (const auto& c : j.at("cones")) cones.push_back(c.get<ConeKey>());
  return make_fan(rank_L, rank_N, beta, rays, cones);
}

std::string morphism_to_json(const std::string& source_path, const std::string& target_path,
                             const IntMat& Phi, const IntMat& phi) {
  json out;
  out["source"] = source_path;
  out["target"] = target_path;
  out["Phi"] = mat_to_json(Phi);
  out["phi"] = mat_to_json(phi);
  return out.dump(2) + "\n";
}

MorphismFile morphism_from_json(const std::string& text) {
  json j = json::parse(text);
  MorphismFile out;
  out.source_path = j.at("source").get<std::string>();
  out.target_path = j.at("target").get<std::string>();
  out.Phi = mat_from_json(j.at("Phi"));
  out.phi = mat_from_json(j.at("phi"));
  return out;
}

std::string complex_to_json(const AugmentedComplex& c, const std::string& fan_path,
                            const std::string& phi_path) {
  json out;
  out["fan"] = fan_path;
  out["phi"] = phi_path;
  out["alpha"] = c.alpha;
  json terms;
  json supports;
  for (size_t k = 0; k < c.cx.terms.size(); ++k) {
    json lvl = json::array();
    json slvl = json::array();
    for (size_t i = 0; i < c.cx.terms[k].size(); ++i) {
      lvl.push_back(vec_to_json(c.cx.terms[k][i].coeffs));
      slvl.push_back(vec_to_json(c.cx.term_supports[k][i]));
    }
    terms[std::to_string(k)] = lvl;
    supports[std::to_string(k)] = slvl;
  }
  out["terms"] = terms;
  out["supports"] = supports;
  json diff;
  for (size_t k = 1; k < c.cx.diff.size(); ++k) {
    json entries = json::array();
    for (size_t i = 0; i < c.cx.diff[k].rows(); ++i)
      for (size_t j2 = 0; j2 < c.cx.diff[k].cols(); ++j2) {
        if (c.cx.diff[k].at(i, j2).is_zero()) continue;
        entries.push_back(json::array({i, j2, poly_to_json(c.cx.diff[k].at(i, j2))}));
      }
    diff[std::to_string(k)] = entries;
  }
  out["differential"] = diff;
  return out.dump(2) + "\n";
}

AugmentedComplex complex_from_json(const std::string& text, const StackyFan& fan) {
  json j = json::parse(text);
  AugmentedComplex out;
  out.cx.fan = fan;
  out.alpha = j.at("alpha").get<size_t>();
  size_t degs = j.at("terms").size();
  out.cx.terms.assign(degs, {});
  out.cx.term_supports.assign(degs, {});
  for (size_t k = 0; k < degs; ++k) {
    const json& lvl = j.at("terms").at(std::to_string(k));
    for (const auto& t : lvl) out.cx.terms[k].push_back(DivisorClass{vec_from_json(t)});
    if (j.contains("supports")) {
      for (const auto& s : j.at("supports").at(std::to_string(k)))
        out.cx.term_supports[k].push_back(vec_from_json(s));
    } else {
      for (const auto& t : out.cx.terms[k])
        out.cx.term_supports[k].push_back(scale(Int(-1), t.coeffs));
    }
  }
  out.cx.diff.resize(degs);
  out.cx.diff[0] = PolyMat(0, out.cx.terms[0].size());
  for (size_t k = 1; k < degs; ++k) {
    out.cx.diff[k] = PolyMat(out.cx.terms[k - 1].size(), out.cx.terms[k].size());
    const json& entries = j.at("differential").at(std::to_string(k));
    for (const auto& e : entries)
      out.cx.diff[k].at(e.at(0).get<size_t>(), e.at(1).get<size_t>()) = poly_from_json(e.at(2));
  }
  return out;
}

std::string quiver_to_json(const ExitPathQuiver& q) {
  json out;
  json strata = json::array();
  for (const Stratum& s : q.strata) {
    json js;
    js["id"] = s.id;
    js["dim"] = s.dim;
    json sample = json::array();
    for (const Rat& x : s.sample) sample.push_back(rat_to_json(x));
    js["sample"] = sample;
    js["active"] = s.active;
    js["support"] = vec_to_json(s.support.values);
    js["bundle"] = vec_to_json(s.bundle.coeffs);
    strata.push_back(js);
  }
  out["strata"] = strata;
  json edges = json::array();
  for (const ExitEdge& e : q.edges) {
    json je;
    je["src"] = e.src;
    je["dst"] = e.dst;
    je["exponent"] = vec_to_json(e.exponent);
    je["sign"] = e.sign;
    je["translation"] = vec_to_json(e.dst_translation);
    edges.push_back(je);
  }
  out["edges"] = edges;
  out["identity_stratum"] = q.identity_stratum;
  return out.dump(2) + "\n";
}

std::string validation_to_json(const ValidationReport& r) {
  json out;
  out["valid"] = r.valid;
  out["violations"] = r.violations;
  out["notes"] = r.notes;
  return out.dump(2) + "\n";
}

std::string frob_to_json(const StackyFan& f, const FrobDecomposition& d) {
  (void)f;
  json out;
  out["ell"] = int_to_json(d.ell);
  out["source"] = vec_to_json(d.source.coeffs);
  json summands = json::array();
  for (const auto& [c, mult] : d.summands)
    summands.push_back(
        json{{"class", vec_to_json(c.coeffs)}, {"multiplicity", int_to_json(mult)}});
  out["summands"] = summands;
  out["total"] = int_to_json(d.total_multiplicity());
  return out.dump(2) + "\n";
}

std::string frobset_to_json(const StackyFan& f, const FrobSet& s) {
  (void)f;
  json out;
  json classes = json::array();
  for (const DivisorClass& c : s.classes) classes.push_back(vec_to_json(c.coeffs));
  out["classes"] = classes;
  out["period"] = int_to_json(s.period);
  out["rounds"] = s.rounds;
  out["stabilized"] = s.stabilized;
  return out.dump(2) + "\n";
}

std::string generation_to_json(const GenerationReport& r, const Zonotope* z) {
  json out;
  out["divisor"] = vec_to_json(r.divisor);
  out["unobstructed"] = r.unobstructed;
  json inclusions = json::array();
  for (const auto& e : r.inclusions) {
    json je;
    je["rays"] = e.rays;
    je["dim"] = e.dim_y;
    je["nonzero_homs"] = e.nonzero_homs;
    if (e.multiplicity_identity_checked)
      je["multiplicity_identity"] = e.multiplicity_identity_holds;
    inclusions.push_back(je);
  }
  out["inclusions"] = inclusions;
  if (z) {
    json vs = json::array();
    for (const IntVec& v : z->vertices) vs.push_back(vec_to_json(v));
    out["zonotope_vertices"] = vs;
    json fs = json::array();
    for (const auto& fac : z->facets)
      fs.push_back(json{{"normal", vec_to_json(fac.normal)}, {"offset", int_to_json(fac.offset)}});
    out["zonotope_facets"] = fs;
  }
  if (r.characteristic_note > 0) {
    out["characteristic"] = r.characteristic_note;
    out["characteristic_note"] =
        "annotation only: at ell = p^k the pushforward agrees with absolute Frobenius";
  }
  return out.dump(2) + "\n";
}

std::string fiber_to_json(const FiberReport& r, uint64_t seed) {
  json out;
  out["seed"] = seed;
  out["ok"] = r.ok;
  out["trials"] = r.trials_run;
  out["failures"] = r.failures;
  return out.dump(2) + "\n";
}

}  // namespace toricres
