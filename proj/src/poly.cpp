#include "toricres/poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace toricres {

void Poly::add_term(Monomial m) {
  if (m.coeff == 0) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Monomial& a, const Monomial& b) {
                               return cmp(a.exp, b.exp) < 0;
                             });
  if (it != terms_.end() && it->exp == m.exp) {
    it->coeff += m.coeff;
    if (it->coeff == 0) terms_.erase(it);
  } else {
    terms_.insert(it, std::move(m));
  }
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  for (const auto& t : o.terms_) r.add_term(t);
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r = *this;
  for (const auto& t : o.terms_) r.add_term({-t.coeff, t.exp});
  return r;
}

Poly Poly::operator-() const {
  Poly r;
  for (const auto& t : terms_) r.terms_.push_back({-t.coeff, t.exp});
  return r;
}

Poly Poly::scaled(const Rat& c) const {
  Poly r;
  if (c == 0) return r;
  for (const auto& t : terms_) r.terms_.push_back({c * t.coeff, t.exp});
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  for (const auto& a : terms_)
    for (const auto& b : o.terms_) r.add_term({a.coeff * b.coeff, add(a.exp, b.exp)});
  return r;
}

bool Poly::operator==(const Poly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].coeff != o.terms_[i].coeff || terms_[i].exp != o.terms_[i].exp) return false;
  return true;
}

Rat Poly::eval(const RatVec& point) const {
  Rat s = 0;
  for (const auto& t : terms_) {
    Rat m = t.coeff;
    for (size_t i = 0; i < t.exp.size(); ++i) {
      if (t.exp[i] == 0) continue;
      if (!t.exp[i].fits_slong_p()) throw std::overflow_error("exponent too large for eval");
      long e = t.exp[i].get_si();
      if (e < 0) throw std::invalid_argument("negative exponent in eval");
      Rat base = point[i];
      for (long k = 0; k < e; ++k) m *= base;
    }
    s += m;
  }
  return s;
}

Poly Poly::reindex(const std::vector<size_t>& map, size_t new_nvars) const {
  Poly r;
  for (const auto& t : terms_) {
    IntVec e(new_nvars, Int(0));
    for (size_t i = 0; i < t.exp.size(); ++i) {
      if (map[i] == size_t(-1)) continue;  // drop: specialize x_i = 1
      e[map[i]] += t.exp[i];
    }
    r.add_term({t.coeff, std::move(e)});
  }
  return r;
}

PolyMat PolyMat::identity(size_t n, size_t nvars) {
  PolyMat m(n, n);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = Poly::constant(Rat(1), nvars);
  return m;
}

PolyMat PolyMat::mul(const PolyMat& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("shape mismatch in PolyMat::mul");
  PolyMat r(rows_, o.cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t k = 0; k < cols_; ++k) {
      const Poly& a = at(i, k);
      if (a.is_zero()) continue;
      for (size_t j = 0; j < o.cols_; ++j) {
        if (o.at(k, j).is_zero()) continue;
        r.at(i, j) = r.at(i, j) + a * o.at(k, j);
      }
    }
  return r;
}

PolyMat PolyMat::operator+(const PolyMat& o) const {
  PolyMat r(rows_, cols_);
  for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
  return r;
}

PolyMat PolyMat::operator-(const PolyMat& o) const {
  PolyMat r(rows_, cols_);
  for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
  return r;
}

bool PolyMat::is_zero() const {
  for (const auto& p : data_)
    if (!p.is_zero()) return false;
  return true;
}

bool PolyMat::operator==(const PolyMat& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ &&
         std::equal(data_.begin(), data_.end(), o.data_.begin());
}

RatMat PolyMat::eval(const RatVec& point) const {
  RatMat r(rows_, cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j).eval(point);
  return r;
}

PolyMat PolyMat::reindex(const std::vector<size_t>& map, size_t new_nvars) const {
  PolyMat r(rows_, cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j).reindex(map, new_nvars);
  return r;
}

std::vector<size_t> homology_dims(const std::vector<RatMat>& differentials,
                                  const std::vector<size_t>& dims) {
  // differentials[k]: C_k -> C_{k-1}; dims[k] = dim C_k
  std::vector<size_t> ranks(dims.size() + 1, 0);
  for (size_t k = 1; k < dims.size(); ++k)
    if (k < differentials.size() && differentials[k].rows() > 0 && differentials[k].cols() > 0)
      ranks[k] = rank_rat(differentials[k]);
  std::vector<size_t> h(dims.size());
  for (size_t k = 0; k < dims.size(); ++k) {
    size_t rk_in = (k + 1 < dims.size()) ? ranks[k + 1] : 0;
    size_t rk_out = ranks[k];
    h[k] = dims[k] - rk_out - rk_in;
  }
  return h;
}

}  // namespace toricres
