#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

#include "toricres/ints.hpp"

namespace toricres {

// Dense integer matrix with arbitrary-precision entries.  Row-major.
class IntMat {
 public:
  IntMat() : rows_(0), cols_(0) {}
  IntMat(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Int(0)) {}
  IntMat(std::initializer_list<std::initializer_list<long>> init);

  static IntMat identity(size_t n);
  static IntMat zero(size_t rows, size_t cols) { return IntMat(rows, cols); }
  static IntMat from_rows(const std::vector<IntVec>& rows);
  static IntMat from_cols(const std::vector<IntVec>& cols);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  Int& at(size_t i, size_t j) { return data_[i * cols_ + j]; }
  const Int& at(size_t i, size_t j) const { return data_[i * cols_ + j]; }

  IntVec row(size_t i) const;
  IntVec col(size_t j) const;
  std::vector<IntVec> row_list() const;
  std::vector<IntVec> col_list() const;

  IntMat transpose() const;
  IntMat mul(const IntMat& other) const;
  IntVec mul_vec(const IntVec& v) const;

  bool operator==(const IntMat& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
  }

  void swap_rows(size_t i, size_t j);
  void swap_cols(size_t i, size_t j);

 private:
  size_t rows_, cols_;
  std::vector<Int> data_;
};

struct SmithResult {
  IntMat u;  // unimodular, rows x rows
  IntMat d;  // diagonal with d_i | d_{i+1}, same shape as input
  IntMat v;  // unimodular, cols x cols
  size_t rank = 0;
};

// U * A * V = D
SmithResult smith_normal_form(const IntMat& a);

struct HermiteResult {
  IntMat h;                   // row-style HNF of the input (same shape)
  std::vector<size_t> pivot;  // pivot column per nonzero row
  size_t rank = 0;
};

// Row-style Hermite normal form: pivots positive, strictly increasing
// pivot columns, entries above a pivot reduced into [0, pivot).
HermiteResult hermite_normal_form(const IntMat& a);

// Basis of ker(A) as a saturated sublattice of Z^cols; empty when A injective.
std::vector<IntVec> kernel_saturated_basis(const IntMat& a);

size_t rank_int(const IntMat& a);

struct CokernelDecomposition {
  size_t free_rank = 0;
  std::vector<Int> torsion;             // invariant factors > 1, divisibility chain
  std::vector<IntVec> representatives;  // one lift per class when the cokernel is finite
  bool representatives_available = false;
};

// coker(A: Z^cols -> Z^rows); representatives enumerated only for finite cokernels
// (and only when enumerate = true).
CokernelDecomposition cokernel_decomposition(const IntMat& a, bool enumerate = true);

// Reduce v modulo the lattice generated by the rows of `lattice_rows`
// (Hermite reduction with leftmost pivots).  Idempotent and constant on cosets.
IntVec reduce_mod_row_lattice(const IntVec& v, const HermiteResult& hnf);

// Solve A x = b over Z.  Returns nullopt when no integer solution exists.
std::optional<IntVec> solve_int(const IntMat& a, const IntVec& b);

// --- rational linear algebra -------------------------------------------------

class RatMat {
 public:
  RatMat() : rows_(0), cols_(0) {}
  RatMat(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Rat(0)) {}
  static RatMat from_int(const IntMat& a);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  Rat& at(size_t i, size_t j) { return data_[i * cols_ + j]; }
  const Rat& at(size_t i, size_t j) const { return data_[i * cols_ + j]; }

  RatMat mul(const RatMat& other) const;

 private:
  size_t rows_, cols_;
  std::vector<Rat> data_;
};

size_t rank_rat(RatMat a);

// Solve A x = b over Q; nullopt when inconsistent.  A need not be square.
std::optional<RatVec> solve_rat(RatMat a, RatVec b);

// Basis of the rational null space {x : A x = 0}, from the reduced row echelon
// form with free variables ordered by column index.  Deterministic.
std::vector<RatVec> nullspace_rat(RatMat a);

// Clear denominators of a rational vector to a primitive integer vector.
IntVec integerize(const RatVec& v);

}  // namespace toricres
