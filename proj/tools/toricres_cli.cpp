// Command-line front end for the toricres shared library.  Talks to the
// library exclusively through the C interface in toricres.h.
#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "toricres.h"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitVerify = 1;
constexpr int kExitInput = 2;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& msg) { throw CliError{code, msg}; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(kExitInput, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// write-then-rename so outputs appear atomically
void write_file(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    return;
  }
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(kExitInput, "cannot write " + tmp);
    out << data;
  }
  fs::rename(tmp, path);
}

struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { trs_string_free(s); }
  std::string str() const { return s ? s : ""; }
};

void check(trs_status st) {
  if (st == TRS_OK) return;
  fail(st == TRS_ERR_INPUT ? kExitInput : kExitVerify, trs_last_error());
}

using FanPtr = std::unique_ptr<trs_fan, decltype(&trs_fan_free)>;
using MorPtr = std::unique_ptr<trs_morphism, decltype(&trs_morphism_free)>;
using QuiverPtr = std::unique_ptr<trs_quiver, decltype(&trs_quiver_free)>;
using ComplexPtr = std::unique_ptr<trs_complex, decltype(&trs_complex_free)>;

FanPtr load_fan(const std::string& path) {
  trs_fan* f = nullptr;
  check(trs_fan_parse(read_file(path).c_str(), &f));
  int valid = 0;
  OwnedString rep;
  check(trs_fan_validate(f, &rep.s, &valid));
  if (!valid) {
    trs_fan_free(f);
    fail(kExitInput, "invalid fan " + path + ": " + rep.str());
  }
  return FanPtr(f, trs_fan_free);
}

std::string resolve_ref(const std::string& base_file, const std::string& ref) {
  fs::path p(ref);
  if (p.is_absolute()) return ref;
  return (fs::path(base_file).parent_path() / p).string();
}

// morphism file loader; handles both fans referenced by the file
struct LoadedMorphism {
  FanPtr source{nullptr, trs_fan_free};
  FanPtr target{nullptr, trs_fan_free};
  MorPtr m{nullptr, trs_morphism_free};
};

LoadedMorphism load_morphism(const std::string& path) {
  std::string text = read_file(path);
  // the C library re-parses the matrices; the fan references are resolved here
  OwnedString fan_path, phi_path;
  // reuse the complex-ref helper shape: morphism files have source/target keys,
  // extracted with a tiny scan to stay within the C surface
  auto extract = [&](const std::string& key) -> std::string {
    std::string needle = "\"" + key + "\"";
    size_t at = text.find(needle);
    if (at == std::string::npos) fail(kExitInput, "morphism file missing " + key);
    size_t colon = text.find(':', at);
    size_t q1 = text.find('"', colon + 1);
    size_t q2 = text.find('"', q1 + 1);
    return text.substr(q1 + 1, q2 - q1 - 1);
  };
  LoadedMorphism out;
  out.source = load_fan(resolve_ref(path, extract("source")));
  out.target = load_fan(resolve_ref(path, extract("target")));
  trs_morphism* m = nullptr;
  check(trs_morphism_parse(text.c_str(), out.source.get(), out.target.get(), &m));
  out.m = MorPtr(m, trs_morphism_free);
  return out;
}

// the phi reference recorded in a complex file: a morphism path or one of the
// built-in tags written by `resolve`/`diagonal`
struct LoadedPhi {
  FanPtr factor{nullptr, trs_fan_free};
  LoadedMorphism lm;
  MorPtr m{nullptr, trs_morphism_free};
};

LoadedPhi load_phi_reference(const std::string& complex_path, const std::string& pr,
                             const FanPtr& fan) {
  LoadedPhi out;
  if (pr == "(identity point)") {
    trs_morphism* m = nullptr;
    check(trs_point_morphism(fan.get(), &m));
    out.m = MorPtr(m, trs_morphism_free);
  } else if (pr.rfind("(diagonal) ", 0) == 0) {
    out.factor = load_fan(resolve_ref(complex_path, pr.substr(11)));
    trs_morphism* m = nullptr;
    check(trs_diagonal_morphism(out.factor.get(), &m));
    out.m = MorPtr(m, trs_morphism_free);
  } else {
    out.lm = load_morphism(resolve_ref(complex_path, pr));
    out.m = std::move(out.lm.m);
  }
  return out;
}

std::string divisor_to_json(const std::string& spec) {
  std::string out = "[";
  std::stringstream ss(spec);
  std::string item;
  bool first = true;
  while (std::getline(ss, item, ',')) {
    if (!first) out += ",";
    out += item;
    first = false;
  }
  return out + "]";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"line-bundle resolutions and Frobenius decompositions of toric stacks"};
  app.require_subcommand(1);

  std::string fan_path, sub_path, complex_path, quotient_path, out_path, svg_path;
  std::string divisor = "0";
  std::string rays_arg;
  std::uint64_t seed = 0;
  std::size_t trials = 100;
  std::size_t codim_bound = 4;
  std::size_t rounds = 4;
  long ell = 2;
  int characteristic = 0;
  bool no_labels = false, no_hairs = false, koszul = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "output file (default: stdout)");
  };

  auto* validate = app.add_subcommand("validate", "validate a fan file");
  validate->add_option("--fan", fan_path)->required();
  add_common(validate);

  auto* thomsen = app.add_subcommand("thomsen", "Thomsen collection of a fan");
  thomsen->add_option("--fan", fan_path)->required();
  add_common(thomsen);

  auto* stratify = app.add_subcommand("stratify", "exit-path stratification");
  stratify->add_option("--fan", fan_path)->required();
  stratify->add_option("--sub", sub_path, "substack morphism file (default: identity point)");
  stratify->add_option("--codim-bound", codim_bound);
  stratify->add_option("--svg", svg_path, "also render the stratification");
  add_common(stratify);

  auto* resolve = app.add_subcommand("resolve", "resolution of a toric substack");
  resolve->add_option("--fan", fan_path)->required();
  resolve->add_option("--sub", sub_path, "substack morphism file (default: identity point)");
  resolve->add_option("--codim-bound", codim_bound);
  add_common(resolve);

  auto* diagonal = app.add_subcommand("diagonal", "resolution of the diagonal");
  diagonal->add_option("--fan", fan_path)->required();
  diagonal->add_option("--codim-bound", codim_bound);
  add_common(diagonal);

  auto* restrict_cmd = app.add_subcommand("restrict", "restrict a complex to a chart");
  restrict_cmd->add_option("--complex", complex_path)->required();
  restrict_cmd->add_option("--rays", rays_arg, "comma-separated ray indices to remove")
      ->required();
  add_common(restrict_cmd);

  auto* pushforward = app.add_subcommand("pushforward", "pushforward along a finite quotient");
  pushforward->add_option("--complex", complex_path)->required();
  pushforward->add_option("--quotient", quotient_path, "finite quotient morphism file")
      ->required();
  add_common(pushforward);

  auto* verify = app.add_subcommand("verify", "verify a complex file");
  verify->add_option("--complex", complex_path)->required();
  verify->add_option("--trials", trials);
  verify->add_option("--seed", seed);
  verify->add_flag("--koszul", koszul, "include per-chart Koszul comparisons");
  add_common(verify);

  auto* frobenius = app.add_subcommand("frobenius", "Frobenius pushforward decomposition");
  frobenius->add_option("--fan", fan_path)->required();
  frobenius->add_option("--divisor", divisor, "comma-separated ray coefficients");
  frobenius->add_option("--ell", ell);
  add_common(frobenius);

  auto* frobset = app.add_subcommand("frobset", "saturated union of Frobenius summands");
  frobset->add_option("--fan", fan_path)->required();
  frobset->add_option("--divisor", divisor);
  frobset->add_option("--rounds", rounds);
  add_common(frobset);

  auto* genreport = app.add_subcommand("genreport", "generation-obstruction report");
  genreport->add_option("--fan", fan_path)->required();
  genreport->add_option("--divisor", divisor);
  genreport->add_option("--characteristic", characteristic,
                        "annotate the report; computation stays characteristic zero");
  add_common(genreport);

  auto* render = app.add_subcommand("render", "render a stratification as SVG");
  render->add_option("--fan", fan_path)->required();
  render->add_option("--sub", sub_path);
  render->add_option("--codim-bound", codim_bound);
  render->add_option("--svg", svg_path)->required();
  render->add_flag("--no-labels", no_labels);
  render->add_flag("--no-hairs", no_hairs);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      trs_fan* f = nullptr;
      check(trs_fan_parse(read_file(fan_path).c_str(), &f));
      FanPtr fan(f, trs_fan_free);
      int ok = 0;
      OwnedString rep;
      check(trs_fan_validate(fan.get(), &rep.s, &ok));
      write_file(out_path, rep.str());
      if (!ok) {
        std::cerr << "validate: fan has violations\n";
        return kExitVerify;
      }
    } else if (thomsen->parsed()) {
      FanPtr fan = load_fan(fan_path);
      OwnedString out;
      check(trs_fan_thomsen(fan.get(), &out.s));
      write_file(out_path, out.str());
    } else if (stratify->parsed() || render->parsed()) {
      FanPtr fan = load_fan(fan_path);
      MorPtr mor(nullptr, trs_morphism_free);
      LoadedMorphism lm;
      if (sub_path.empty()) {
        trs_morphism* m = nullptr;
        check(trs_point_morphism(fan.get(), &m));
        mor = MorPtr(m, trs_morphism_free);
      } else {
        lm = load_morphism(sub_path);
        mor = std::move(lm.m);
      }
      trs_quiver* q = nullptr;
      check(trs_stratify(mor.get(), codim_bound, &q));
      QuiverPtr quiver(q, trs_quiver_free);
      if (stratify->parsed()) {
        OwnedString out;
        check(trs_quiver_to_json(quiver.get(), &out.s));
        write_file(out_path, out.str());
      }
      if (!svg_path.empty()) {
        OwnedString svg;
        check(trs_quiver_render_svg(quiver.get(), no_labels ? 0 : 1, no_hairs ? 0 : 1, &svg.s));
        write_file(svg_path, svg.str());
      }
    } else if (resolve->parsed() || diagonal->parsed()) {
      FanPtr fan = load_fan(fan_path);
      trs_complex* c = nullptr;
      std::string phi_ref = sub_path.empty() ? "(identity point)" : sub_path;
      if (diagonal->parsed()) {
        check(trs_diagonal_resolution(fan.get(), codim_bound, &c));
        phi_ref = "(diagonal)";
      } else if (sub_path.empty()) {
        trs_morphism* m = nullptr;
        check(trs_point_morphism(fan.get(), &m));
        MorPtr mor(m, trs_morphism_free);
        check(trs_resolve(mor.get(), codim_bound, &c));
      } else {
        LoadedMorphism lm = load_morphism(sub_path);
        check(trs_resolve(lm.m.get(), codim_bound, &c));
      }
      ComplexPtr cx(c, trs_complex_free);
      std::string fan_ref = fan_path;
      if (diagonal->parsed()) {
        // the complex lives on the product fan; emit it next to the output
        OwnedString pf;
        trs_morphism* dm = nullptr;
        check(trs_diagonal_morphism(fan.get(), &dm));
        MorPtr dmp(dm, trs_morphism_free);
        check(trs_morphism_target_json(dmp.get(), &pf.s));
        fan_ref = out_path.empty() ? fan_path + ".product.json" : out_path + ".fan.json";
        write_file(fan_ref, pf.str());
        phi_ref = "(diagonal) " + fan_path;
      }
      OwnedString out;
      check(trs_complex_to_json(cx.get(), fan_ref.c_str(), phi_ref.c_str(), &out.s));
      write_file(out_path, out.str());
    } else if (restrict_cmd->parsed()) {
      std::string text = read_file(complex_path);
      OwnedString fan_ref, phi_ref;
      check(trs_complex_refs(text.c_str(), &fan_ref.s, &phi_ref.s));
      FanPtr fan = load_fan(resolve_ref(complex_path, fan_ref.str()));
      LoadedPhi phi = load_phi_reference(complex_path, phi_ref.str(), fan);
      trs_complex* c = nullptr;
      check(trs_complex_parse(text.c_str(), fan.get(), phi.m.get(), &c));
      ComplexPtr cx(c, trs_complex_free);
      std::vector<size_t> rays;
      std::stringstream ss(rays_arg);
      std::string item;
      while (std::getline(ss, item, ',')) rays.push_back(std::stoul(item));
      trs_complex *restricted = nullptr, *reduced = nullptr;
      OwnedString chart;
      check(trs_restrict(cx.get(), rays.data(), rays.size(), &restricted, &reduced, &chart.s));
      ComplexPtr rp(restricted, trs_complex_free), dp(reduced, trs_complex_free);
      std::string base = out_path.empty() ? complex_path : out_path;
      write_file(base + ".chart.json", chart.str());
      OwnedString rj, dj;
      check(trs_complex_to_json(rp.get(), (base + ".chart.json").c_str(), "(restricted)", &rj.s));
      check(trs_complex_to_json(dp.get(), (base + ".chart.json").c_str(), "(reduced)", &dj.s));
      write_file(base + ".restricted.json", rj.str());
      write_file(base + ".reduced.json", dj.str());
    } else if (pushforward->parsed()) {
      std::string text = read_file(complex_path);
      OwnedString fan_ref, phi_ref;
      check(trs_complex_refs(text.c_str(), &fan_ref.s, &phi_ref.s));
      FanPtr fan = load_fan(resolve_ref(complex_path, fan_ref.str()));
      LoadedPhi phi = load_phi_reference(complex_path, phi_ref.str(), fan);
      trs_complex* c = nullptr;
      check(trs_complex_parse(text.c_str(), fan.get(), phi.m.get(), &c));
      ComplexPtr cx(c, trs_complex_free);
      LoadedMorphism pi = load_morphism(quotient_path);
      OwnedString out;
      check(trs_pushforward(cx.get(), pi.m.get(), &out.s));
      write_file(out_path, out.str());
    } else if (verify->parsed()) {
      std::string text = read_file(complex_path);
      OwnedString fan_ref, phi_ref;
      check(trs_complex_refs(text.c_str(), &fan_ref.s, &phi_ref.s));
      FanPtr fan = load_fan(resolve_ref(complex_path, fan_ref.str()));
      trs_complex* c = nullptr;
      LoadedPhi phi = load_phi_reference(complex_path, phi_ref.str(), fan);
      check(trs_complex_parse(text.c_str(), fan.get(), phi.m.get(), &c));
      ComplexPtr cx(c, trs_complex_free);
      OwnedString rep;
      int ok = 0;
      check(trs_verify(cx.get(), trials, seed, koszul ? 1 : 0, &rep.s, &ok));
      write_file(out_path, rep.str());
      if (!ok) {
        std::cerr << "verify: checks failed\n";
        return kExitVerify;
      }
    } else if (frobenius->parsed()) {
      FanPtr fan = load_fan(fan_path);
      OwnedString out;
      check(trs_frobenius_pushforward(fan.get(), divisor_to_json(divisor).c_str(), ell, &out.s));
      write_file(out_path, out.str());
    } else if (frobset->parsed()) {
      FanPtr fan = load_fan(fan_path);
      OwnedString out;
      check(trs_frobenius_set(fan.get(), divisor_to_json(divisor).c_str(), rounds, &out.s));
      write_file(out_path, out.str());
    } else if (genreport->parsed()) {
      FanPtr fan = load_fan(fan_path);
      OwnedString out;
      check(trs_generation_report(fan.get(), divisor_to_json(divisor).c_str(), characteristic, 1,
                                  &out.s));
      write_file(out_path, out.str());
    }
  } catch (const CliError& e) {
    std::cerr << app.get_name() << ": " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << app.get_name() << ": " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}
