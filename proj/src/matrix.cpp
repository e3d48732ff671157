#include "toricres/matrix.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace toricres {

IntMat::IntMat(std::initializer_list<std::initializer_list<long>> init) {
  rows_ = init.size();
  cols_ = rows_ ? init.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : init) {
    if (r.size() != cols_) throw std::invalid_argument("ragged initializer");
    for (long x : r) data_.emplace_back(x);
  }
}

IntMat IntMat::identity(size_t n) {
  IntMat m(n, n);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMat IntMat::from_rows(const std::vector<IntVec>& rows) {
  size_t r = rows.size();
  size_t c = r ? rows[0].size() : 0;
  IntMat m(r, c);
  for (size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw std::invalid_argument("ragged rows");
    for (size_t j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

IntMat IntMat::from_cols(const std::vector<IntVec>& cols) {
  size_t c = cols.size();
  size_t r = c ? cols[0].size() : 0;
  IntMat m(r, c);
  for (size_t j = 0; j < c; ++j) {
    if (cols[j].size() != r) throw std::invalid_argument("ragged cols");
    for (size_t i = 0; i < r; ++i) m.at(i, j) = cols[j][i];
  }
  return m;
}

IntVec IntMat::row(size_t i) const {
  IntVec v(cols_);
  for (size_t j = 0; j < cols_; ++j) v[j] = at(i, j);
  return v;
}

IntVec IntMat::col(size_t j) const {
  IntVec v(rows_);
  for (size_t i = 0; i < rows_; ++i) v[i] = at(i, j);
  return v;
}

std::vector<IntVec> IntMat::row_list() const {
  std::vector<IntVec> out;
  out.reserve(rows_);
  for (size_t i = 0; i < rows_; ++i) out.push_back(row(i));
  return out;
}

std::vector<IntVec> IntMat::col_list() const {
  std::vector<IntVec> out;
  out.reserve(cols_);
  for (size_t j = 0; j < cols_; ++j) out.push_back(col(j));
  return out;
}

IntMat IntMat::transpose() const {
  IntMat t(cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

IntMat IntMat::mul(const IntMat& other) const {
  if (cols_ != other.rows_) throw std::invalid_argument("shape mismatch in mul");
  IntMat r(rows_, other.cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t k = 0; k < cols_; ++k) {
      const Int& a = at(i, k);
      if (a == 0) continue;
      for (size_t j = 0; j < other.cols_; ++j) r.at(i, j) += a * other.at(k, j);
    }
  return r;
}

IntVec IntMat::mul_vec(const IntVec& v) const {
  if (cols_ != v.size()) throw std::invalid_argument("shape mismatch in mul_vec");
  IntVec r(rows_, Int(0));
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) r[i] += at(i, j) * v[j];
  return r;
}

void IntMat::swap_rows(size_t i, size_t j) {
  if (i == j) return;
  for (size_t k = 0; k < cols_; ++k) std::swap(at(i, k), at(j, k));
}

void IntMat::swap_cols(size_t i, size_t j) {
  if (i == j) return;
  for (size_t k = 0; k < rows_; ++k) std::swap(at(k, i), at(k, j));
}

namespace {

// a = p*a + q*b, b = r*a + s*b applied to rows i, j (used for both A and U)
void row_combine(IntMat& m, size_t i, size_t j, const Int& p, const Int& q, const Int& r,
                 const Int& s) {
  for (size_t k = 0; k < m.cols(); ++k) {
    Int mi = m.at(i, k), mj = m.at(j, k);
    m.at(i, k) = p * mi + q * mj;
    m.at(j, k) = r * mi + s * mj;
  }
}

void col_combine(IntMat& m, size_t i, size_t j, const Int& p, const Int& q, const Int& r,
                 const Int& s) {
  for (size_t k = 0; k < m.rows(); ++k) {
    Int mi = m.at(k, i), mj = m.at(k, j);
    m.at(k, i) = p * mi + q * mj;
    m.at(k, j) = r * mi + s * mj;
  }
}

Int gcdext(const Int& a, const Int& b, Int& x, Int& y) {
  Int g;
  mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

}  // namespace

SmithResult smith_normal_form(const IntMat& a) {
  SmithResult res;
  res.d = a;
  res.u = IntMat::identity(a.rows());
  res.v = IntMat::identity(a.cols());
  IntMat& d = res.d;
  IntMat& u = res.u;
  IntMat& v = res.v;
  size_t m = a.rows(), n = a.cols();
  size_t t = 0;

  while (t < m && t < n) {
    // find a nonzero pivot at or after (t, t)
    size_t pi = m, pj = n;
    for (size_t i = t; i < m && pi == m; ++i)
      for (size_t j = t; j < n; ++j)
        if (d.at(i, j) != 0) {
          pi = i;
          pj = j;
          break;
        }
    if (pi == m) break;  // all remaining entries zero
    d.swap_rows(t, pi);
    u.swap_rows(t, pi);
    d.swap_cols(t, pj);
    v.swap_cols(t, pj);

    bool dirty = true;
    while (dirty) {
      dirty = false;
      // clear column t; plain quotient steps keep the pivot row fixed when the
      // entry is divisible, which guarantees termination
      for (size_t i = t + 1; i < m; ++i) {
        if (d.at(i, t) == 0) continue;
        if (d.at(i, t) % d.at(t, t) == 0) {
          Int q = d.at(i, t) / d.at(t, t);
          row_combine(d, t, i, Int(1), Int(0), -q, Int(1));
          row_combine(u, t, i, Int(1), Int(0), -q, Int(1));
        } else {
          Int x, y;
          Int g = gcdext(d.at(t, t), d.at(i, t), x, y);
          Int p = d.at(t, t) / g, q = d.at(i, t) / g;
          row_combine(d, t, i, x, y, -q, p);
          row_combine(u, t, i, x, y, -q, p);
        }
      }
      // clear row t
      for (size_t j = t + 1; j < n; ++j) {
        if (d.at(t, j) == 0) continue;
        if (d.at(t, j) % d.at(t, t) == 0) {
          Int q = d.at(t, j) / d.at(t, t);
          col_combine(d, t, j, Int(1), Int(0), -q, Int(1));
          col_combine(v, t, j, Int(1), Int(0), -q, Int(1));
        } else {
          Int x, y;
          Int g = gcdext(d.at(t, t), d.at(t, j), x, y);
          Int p = d.at(t, t) / g, q = d.at(t, j) / g;
          col_combine(d, t, j, x, y, -q, p);
          col_combine(v, t, j, x, y, -q, p);
          // the gcd step may reintroduce entries in column t
          for (size_t i = t + 1; i < m; ++i)
            if (d.at(i, t) != 0) dirty = true;
        }
      }
    }
    // enforce divisibility d_t | d.at(i,j) for the remaining block
    bool redo = false;
    for (size_t i = t + 1; i < m && !redo; ++i)
      for (size_t j = t + 1; j < n && !redo; ++j)
        if (d.at(i, j) % d.at(t, t) != 0) {
          // add row i to row t and restart elimination at t
          row_combine(d, t, i, Int(1), Int(1), Int(0), Int(1));
          row_combine(u, t, i, Int(1), Int(1), Int(0), Int(1));
          redo = true;
        }
    if (redo) continue;
    if (d.at(t, t) < 0) {
      for (size_t j = 0; j < n; ++j) d.at(t, j) = -d.at(t, j);
      for (size_t j = 0; j < u.cols(); ++j) u.at(t, j) = -u.at(t, j);
    }
    ++t;
  }
  res.rank = t;
  return res;
}

HermiteResult hermite_normal_form(const IntMat& a) {
  HermiteResult res;
  res.h = a;
  IntMat& h = res.h;
  size_t m = h.rows(), n = h.cols();
  size_t r = 0;
  for (size_t j = 0; j < n && r < m; ++j) {
    // gcd the column below r into row r
    size_t nz = m;
    for (size_t i = r; i < m; ++i)
      if (h.at(i, j) != 0) {
        nz = i;
        break;
      }
    if (nz == m) continue;
    h.swap_rows(r, nz);
    for (size_t i = r + 1; i < m; ++i) {
      if (h.at(i, j) == 0) continue;
      Int x, y;
      Int g = gcdext(h.at(r, j), h.at(i, j), x, y);
      Int p = h.at(r, j) / g, q = h.at(i, j) / g;
      row_combine(h, r, i, x, y, -q, p);
    }
    if (h.at(r, j) < 0)
      for (size_t k = 0; k < n; ++k) h.at(r, k) = -h.at(r, k);
    // reduce the rows above
    for (size_t i = 0; i < r; ++i) {
      Int q = floor_div(h.at(i, j), h.at(r, j));
      if (q == 0) continue;
      for (size_t k = 0; k < n; ++k) h.at(i, k) -= q * h.at(r, k);
    }
    res.pivot.push_back(j);
    ++r;
  }
  res.rank = r;
  return res;
}

std::vector<IntVec> kernel_saturated_basis(const IntMat& a) {
  SmithResult s = smith_normal_form(a);
  std::vector<IntVec> basis;
  for (size_t j = s.rank; j < a.cols(); ++j) basis.push_back(s.v.col(j));
  return basis;
}

size_t rank_int(const IntMat& a) { return hermite_normal_form(a).rank; }

CokernelDecomposition cokernel_decomposition(const IntMat& a, bool enumerate) {
  SmithResult s = smith_normal_form(a);
  CokernelDecomposition out;
  size_t m = a.rows();
  out.free_rank = m - s.rank;
  for (size_t i = 0; i < s.rank; ++i)
    if (s.d.at(i, i) > 1) out.torsion.push_back(s.d.at(i, i));
  if (out.free_rank == 0 && enumerate) {
    // classes in U-coordinates: y_i in [0, d_i); lift back by x = U^{-1} y
    SmithResult ui = smith_normal_form(s.u);  // invert the unimodular U
    // U^{-1} = V_u * D_u^{-1} * U_u with D_u = identity (U unimodular)
    IntMat uinv = ui.v.mul(ui.u);
    std::vector<IntVec> reps;
    IntVec y(m, Int(0));
    std::vector<Int> bounds(m);
    for (size_t i = 0; i < m; ++i) bounds[i] = (i < s.rank) ? s.d.at(i, i) : Int(1);
    bool done = false;
    while (!done) {
      reps.push_back(uinv.mul_vec(y));
      size_t i = 0;
      for (; i < m; ++i) {
        y[i] += 1;
        if (y[i] < bounds[i]) break;
        y[i] = 0;
      }
      if (i == m) done = true;
    }
    out.representatives = std::move(reps);
    out.representatives_available = true;
  }
  return out;
}

IntVec reduce_mod_row_lattice(const IntVec& v, const HermiteResult& hnf) {
  IntVec r = v;
  for (size_t i = 0; i < hnf.rank; ++i) {
    size_t j = hnf.pivot[i];
    Int q = floor_div(r[j], hnf.h.at(i, j));
    if (q == 0) continue;
    for (size_t k = 0; k < r.size(); ++k) r[k] -= q * hnf.h.at(i, k);
  }
  return r;
}

std::optional<IntVec> solve_int(const IntMat& a, const IntVec& b) {
  SmithResult s = smith_normal_form(a);
  IntVec c = s.u.mul_vec(b);
  IntVec y(a.cols(), Int(0));
  for (size_t i = 0; i < a.rows(); ++i) {
    Int di = (i < std::min(a.rows(), a.cols())) ? s.d.at(i, i) : Int(0);
    if (di == 0) {
      if (c[i] != 0) return std::nullopt;
    } else {
      if (c[i] % di != 0) return std::nullopt;
      if (i < a.cols()) y[i] = c[i] / di;
    }
  }
  return s.v.mul_vec(y);
}

RatMat RatMat::from_int(const IntMat& a) {
  RatMat r(a.rows(), a.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) r.at(i, j) = Rat(a.at(i, j));
  return r;
}

RatMat RatMat::mul(const RatMat& other) const {
  if (cols_ != other.rows_) throw std::invalid_argument("shape mismatch in mul");
  RatMat r(rows_, other.cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t k = 0; k < cols_; ++k) {
      const Rat& a = at(i, k);
      if (a == 0) continue;
      for (size_t j = 0; j < other.cols_; ++j) r.at(i, j) += a * other.at(k, j);
    }
  return r;
}

namespace {

// reduced row echelon form in place; returns pivot columns
std::vector<size_t> rref(RatMat& a) {
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t j = 0; j < a.cols() && r < a.rows(); ++j) {
    size_t p = a.rows();
    for (size_t i = r; i < a.rows(); ++i)
      if (a.at(i, j) != 0) {
        p = i;
        break;
      }
    if (p == a.rows()) continue;
    if (p != r)
      for (size_t k = 0; k < a.cols(); ++k) std::swap(a.at(p, k), a.at(r, k));
    Rat piv = a.at(r, j);
    for (size_t k = 0; k < a.cols(); ++k) a.at(r, k) /= piv;
    for (size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a.at(i, j) == 0) continue;
      Rat f = a.at(i, j);
      for (size_t k = 0; k < a.cols(); ++k) a.at(i, k) -= f * a.at(r, k);
    }
    pivots.push_back(j);
    ++r;
  }
  return pivots;
}

}  // namespace

size_t rank_rat(RatMat a) { return rref(a).size(); }

std::optional<RatVec> solve_rat(RatMat a, RatVec b) {
  size_t m = a.rows(), n = a.cols();
  RatMat aug(m, n + 1);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < n; ++j) aug.at(i, j) = a.at(i, j);
    aug.at(i, n) = b[i];
  }
  std::vector<size_t> pivots = rref(aug);
  for (size_t t = 0; t < pivots.size(); ++t)
    if (pivots[t] == n) return std::nullopt;  // inconsistent
  RatVec x(n, Rat(0));
  for (size_t t = 0; t < pivots.size(); ++t) x[pivots[t]] = aug.at(t, n);
  return x;
}

std::vector<RatVec> nullspace_rat(RatMat a) {
  size_t n = a.cols();
  std::vector<size_t> pivots = rref(a);
  std::vector<bool> is_pivot(n, false);
  for (size_t p : pivots) is_pivot[p] = true;
  std::vector<RatVec> basis;
  for (size_t j = 0; j < n; ++j) {
    if (is_pivot[j]) continue;
    RatVec v(n, Rat(0));
    v[j] = 1;
    for (size_t t = 0; t < pivots.size(); ++t) v[pivots[t]] = -a.at(t, j);
    basis.push_back(std::move(v));
  }
  return basis;
}

IntVec integerize(const RatVec& v) {
  Int l = 1;
  for (const Rat& x : v) l = lcm(l, x.get_den());
  IntVec out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = Int(v[i].get_num() * (l / v[i].get_den()));
  return primitive_part(out);
}

}  // namespace toricres
