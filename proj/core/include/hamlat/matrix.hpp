// Square matrices with polynomial entries (Lax operators and their powers).
#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "hamlat/poly.hpp"

namespace hamlat {

template <class K>
class PolyMatrix {
 public:
  using P = BasicPoly<K>;

  PolyMatrix(VarSpacePtr space, std::size_t n) : space_(std::move(space)), n_(n), e_(n * n, P(space_)) {}

  static PolyMatrix identity(VarSpacePtr space, std::size_t n) {
    PolyMatrix m(space, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = P(space, FieldTraits<K>::one());
    return m;
  }

  const VarSpacePtr& space() const { return space_; }
  std::size_t size() const { return n_; }
  P& operator()(std::size_t i, std::size_t j) { return e_.at(i * n_ + j); }
  const P& operator()(std::size_t i, std::size_t j) const { return e_.at(i * n_ + j); }

  PolyMatrix& operator+=(const PolyMatrix& o) {
    require_same(o);
    for (std::size_t k = 0; k < e_.size(); ++k) e_[k] += o.e_[k];
    return *this;
  }
  PolyMatrix& operator-=(const PolyMatrix& o) {
    require_same(o);
    for (std::size_t k = 0; k < e_.size(); ++k) e_[k] -= o.e_[k];
    return *this;
  }
  friend PolyMatrix operator+(PolyMatrix a, const PolyMatrix& b) { return a += b; }
  friend PolyMatrix operator-(PolyMatrix a, const PolyMatrix& b) { return a -= b; }
  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
    a.require_same(b);
    PolyMatrix c(a.space_, a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t k = 0; k < a.n_; ++k) {
        const P& x = a(i, k);
        if (x.is_zero()) continue;
        for (std::size_t j = 0; j < a.n_; ++j)
          if (!b(k, j).is_zero()) c(i, j) += x * b(k, j);
      }
    return c;
  }
  friend bool operator==(const PolyMatrix& a, const PolyMatrix& b) {
    return a.n_ == b.n_ && same_space(a.space_, b.space_) && a.e_ == b.e_;
  }

  P trace() const {
    P t(space_);
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  /// Strictly upper-triangular part.
  PolyMatrix strictly_upper() const {
    PolyMatrix u(space_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) u(i, j) = (*this)(i, j);
    return u;
  }

  bool is_symmetric() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  /// Principal submatrix on the given (sorted) indices.
  PolyMatrix principal(const std::vector<std::size_t>& idx) const {
    PolyMatrix s(space_, idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) s(i, j) = (*this)(idx[i], idx[j]);
    return s;
  }

 private:
  void require_same(const PolyMatrix& o) const {
    if (n_ != o.n_ || !same_space(space_, o.space_)) throw std::invalid_argument("matrix shapes differ");
  }

  VarSpacePtr space_;
  std::size_t n_;
  std::vector<P> e_;
};

template <class K>
PolyMatrix<K> matrix_power(const PolyMatrix<K>& m, int k) {
  if (k < 0) throw std::invalid_argument("negative matrix power");
  PolyMatrix<K> r = PolyMatrix<K>::identity(m.space(), m.size());
  for (int i = 0; i < k; ++i) r = r * m;
  return r;
}

template <class K>
PolyMatrix<K> commutator(const PolyMatrix<K>& a, const PolyMatrix<K>& b) {
  return a * b - b * a;
}

using LaxMatrix = PolyMatrix<Rational>;
using GMatrix = PolyMatrix<Gaussian>;

/// Rows of canonical polynomial strings.
template <class K>
nlohmann::json to_json(const PolyMatrix<K>& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(to_string(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace hamlat
