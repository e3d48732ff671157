#pragma once

#include <map>
#include <vector>

#include "toricres/matrix.hpp"

namespace toricres {

// a signed sum of Cox monomials: coeff * x^exp with exp indexed by rays
struct Monomial {
  Rat coeff;
  IntVec exp;
};

class Poly {
 public:
  Poly() = default;
  explicit Poly(Monomial m) { add_term(std::move(m)); }
  static Poly constant(const Rat& c, size_t nvars) {
    Poly p;
    if (c != 0) p.terms_.push_back({c, IntVec(nvars, Int(0))});
    return p;
  }

  void add_term(Monomial m);
  const std::vector<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // a single term +-1 * x^0
  bool is_unit() const {
    return terms_.size() == 1 && is_zero(terms_[0].exp) &&
           (terms_[0].coeff == 1 || terms_[0].coeff == -1);
  }
  Rat unit_value() const { return terms_[0].coeff; }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator-() const;
  Poly scaled(const Rat& c) const;
  bool operator==(const Poly& o) const;

  Rat eval(const RatVec& point) const;

  // re-index the exponent vectors (drop / permute / embed variables);
  // map[i] = target index of variable i, or SIZE_MAX to drop (specialize to 1)
  Poly reindex(const std::vector<size_t>& map, size_t new_nvars) const;

 private:
  std::vector<Monomial> terms_;  // sorted by exponent, no zero coefficients
  static bool is_zero(const IntVec& v) {
    for (const Int& x : v)
      if (x != 0) return false;
    return true;
  }
};

// dense matrix of polynomial entries (small sizes; zero entries empty)
class PolyMat {
 public:
  PolyMat() : rows_(0), cols_(0) {}
  PolyMat(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static PolyMat identity(size_t n, size_t nvars);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  Poly& at(size_t i, size_t j) { return data_[i * cols_ + j]; }
  const Poly& at(size_t i, size_t j) const { return data_[i * cols_ + j]; }

  PolyMat mul(const PolyMat& o) const;
  PolyMat operator+(const PolyMat& o) const;
  PolyMat operator-(const PolyMat& o) const;
  bool is_zero() const;
  bool operator==(const PolyMat& o) const;
  RatMat eval(const RatVec& point) const;
  PolyMat reindex(const std::vector<size_t>& map, size_t new_nvars) const;

 private:
  size_t rows_, cols_;
  std::vector<Poly> data_;
};

// homology dimensions of a finite complex of Q-vector spaces; d[k]: C_k -> C_{k-1}
std::vector<size_t> homology_dims(const std::vector<RatMat>& differentials,
                                  const std::vector<size_t>& dims);

}  // namespace toricres
