#pragma once

#include <string>

#include "toricres/complex.hpp"
#include "toricres/fan.hpp"
#include "toricres/frobenius.hpp"
#include "toricres/strat.hpp"

namespace toricres {

// JSON formats: keys in sorted order; integers as decimal strings when the
// magnitude exceeds 2^53 - 1; rationals as "p/q" strings unless integral.

std::string fan_to_json(const StackyFan& f);
StackyFan fan_from_json(const std::string& text);

// morphism files reference two fan files; the fans are supplied by the caller
std::string morphism_to_json(const std::string& source_path, const std::string& target_path,
                             const IntMat& Phi, const IntMat& phi);
struct MorphismFile {
  std::string source_path;
  std::string target_path;
  IntMat Phi;
  IntMat phi;
};
MorphismFile morphism_from_json(const std::string& text);

std::string complex_to_json(const AugmentedComplex& c, const std::string& fan_path,
                            const std::string& phi_path);
AugmentedComplex complex_from_json(const std::string& text, const StackyFan& fan);

std::string quiver_to_json(const ExitPathQuiver& q);

std::string validation_to_json(const ValidationReport& r);
std::string frob_to_json(const StackyFan& f, const FrobDecomposition& d);
std::string frobset_to_json(const StackyFan& f, const FrobSet& s);
std::string generation_to_json(const GenerationReport& r, const Zonotope* z);
std::string fiber_to_json(const FiberReport& r, uint64_t seed);

}  // namespace toricres
