// Signed, scaled permutations of a coordinate space. Every symmetry in the
// lattice theory (psi, phi, phi-tilde) has this shape.
#pragma once

#include <string>
#include <vector>

#include "hamlat/poly.hpp"

namespace hamlat {

/// (A x)_t = scale[t] * x[source[t]].
template <class K>
class LinearMap {
 public:
  LinearMap(VarSpacePtr space, std::vector<std::size_t> source, std::vector<K> scale, int order,
            std::string name = {})
      : space_(std::move(space)),
        source_(std::move(source)),
        scale_(std::move(scale)),
        order_(order),
        name_(std::move(name)) {
    const std::size_t m = space_->size();
    if (source_.size() != m || scale_.size() != m)
      throw std::invalid_argument("linear map size does not match its space");
    std::vector<bool> hit(m, false);
    for (std::size_t t = 0; t < m; ++t) {
      if (source_[t] >= m || hit[source_[t]]) throw std::invalid_argument("linear map is not a permutation");
      hit[source_[t]] = true;
      if (hamlat::is_zero(scale_[t])) throw std::invalid_argument("linear map is singular");
    }
    if (order_ < 1) throw std::invalid_argument("group order must be positive");
    if (!power(order_).is_identity())
      throw std::invalid_argument("map '" + name_ + "' does not have declared order " + std::to_string(order_));
  }

  static LinearMap identity(VarSpacePtr space) {
    const std::size_t m = space->size();
    std::vector<std::size_t> src(m);
    for (std::size_t i = 0; i < m; ++i) src[i] = i;
    return LinearMap(std::move(space), std::move(src), std::vector<K>(m, FieldTraits<K>::one()), 1, "id");
  }

  /// Accepts a dense matrix and rejects anything that is not a scaled
  /// permutation. `order` is checked as for the main constructor.
  static LinearMap from_matrix(VarSpacePtr space, const std::vector<std::vector<K>>& m, int order,
                               std::string name = {}) {
    const std::size_t d = space->size();
    if (m.size() != d) throw std::invalid_argument("matrix has wrong row count");
    std::vector<std::size_t> src(d);
    std::vector<K> sc(d);
    for (std::size_t t = 0; t < d; ++t) {
      if (m[t].size() != d) throw std::invalid_argument("matrix has wrong column count");
      int nonzero = 0;
      for (std::size_t s = 0; s < d; ++s) {
        if (hamlat::is_zero(m[t][s])) continue;
        ++nonzero;
        src[t] = s;
        sc[t] = m[t][s];
      }
      if (nonzero != 1) throw std::invalid_argument("matrix is not a scaled permutation");
    }
    return LinearMap(std::move(space), std::move(src), std::move(sc), order, std::move(name));
  }

  const VarSpacePtr& space() const { return space_; }
  std::size_t dim() const { return source_.size(); }
  std::size_t source(std::size_t t) const { return source_.at(t); }
  const K& scale(std::size_t t) const { return scale_.at(t); }
  int order() const { return order_; }
  const std::string& name() const { return name_; }

  bool is_identity() const {
    for (std::size_t t = 0; t < dim(); ++t)
      if (source_[t] != t || scale_[t] != FieldTraits<K>::one()) return false;
    return true;
  }

  /// (this o other) x = this(other(x)). The result's declared order is the
  /// actual order, found by iteration.
  LinearMap compose(const LinearMap& other) const {
    require_same(other);
    std::vector<std::size_t> src(dim());
    std::vector<K> sc(dim());
    for (std::size_t t = 0; t < dim(); ++t) {
      const std::size_t s = source_[t];
      src[t] = other.source_[s];
      sc[t] = scale_[t] * other.scale_[s];
    }
    return make_with_actual_order(std::move(src), std::move(sc), name_ + "*" + other.name_);
  }

  LinearMap inverse() const {
    std::vector<std::size_t> src(dim());
    std::vector<K> sc(dim());
    for (std::size_t t = 0; t < dim(); ++t) {
      src[source_[t]] = t;
      K inv = FieldTraits<K>::one();
      inv /= scale_[t];
      sc[source_[t]] = inv;
    }
    return LinearMap(space_, std::move(src), std::move(sc), order_, name_ + "^-1");
  }

  /// A^k for k >= 0, without order validation.
  LinearMap power(int k) const {
    std::vector<std::size_t> src(dim());
    std::vector<K> sc(dim(), FieldTraits<K>::one());
    for (std::size_t t = 0; t < dim(); ++t) src[t] = t;
    for (int r = 0; r < k; ++r) {
      std::vector<std::size_t> nsrc(dim());
      std::vector<K> nsc(dim());
      for (std::size_t t = 0; t < dim(); ++t) {
        nsrc[t] = src[source_[t]];
        nsc[t] = scale_[t] * sc[source_[t]];
      }
      src = std::move(nsrc);
      sc = std::move(nsc);
    }
    return LinearMap(space_, std::move(src), std::move(sc), Unchecked{});
  }

  /// Applies the map to an exact or floating point.
  std::vector<K> apply(const std::vector<K>& x) const {
    if (x.size() != dim()) throw std::invalid_argument("point has wrong dimension");
    std::vector<K> y(dim());
    for (std::size_t t = 0; t < dim(); ++t) y[t] = scale_[t] * x[source_[t]];
    return y;
  }
  using Numeric = typename FieldTraits<K>::Numeric;
  std::vector<Numeric> apply(const std::vector<Numeric>& x) const {
    if (x.size() != dim()) throw std::invalid_argument("point has wrong dimension");
    std::vector<Numeric> y(dim());
    for (std::size_t t = 0; t < dim(); ++t) y[t] = FieldTraits<K>::numeric(scale_[t]) * x[source_[t]];
    return y;
  }

  friend bool operator==(const LinearMap& a, const LinearMap& b) {
    return same_space(a.space_, b.space_) && a.source_ == b.source_ && a.scale_ == b.scale_;
  }

 private:
  struct Unchecked {};
  LinearMap(VarSpacePtr space, std::vector<std::size_t> src, std::vector<K> sc, Unchecked)
      : space_(std::move(space)), source_(std::move(src)), scale_(std::move(sc)), order_(1) {}

  LinearMap make_with_actual_order(std::vector<std::size_t> src, std::vector<K> sc, std::string name) const {
    LinearMap m(space_, std::move(src), std::move(sc), Unchecked{});
    int k = 1;
    for (LinearMap p = m; !p.is_identity(); p = p.compose_unchecked(m)) {
      if (++k > 1024) throw std::domain_error("linear map has no finite order");
    }
    m.order_ = k;
    m.name_ = std::move(name);
    return m;
  }
  LinearMap compose_unchecked(const LinearMap& other) const {
    std::vector<std::size_t> src(dim());
    std::vector<K> sc(dim());
    for (std::size_t t = 0; t < dim(); ++t) {
      src[t] = other.source_[source_[t]];
      sc[t] = scale_[t] * other.scale_[source_[t]];
    }
    return LinearMap(space_, std::move(src), std::move(sc), Unchecked{});
  }
  void require_same(const LinearMap& o) const {
    if (!same_space(space_, o.space_)) throw std::invalid_argument("maps act on different spaces");
  }

  VarSpacePtr space_;
  std::vector<std::size_t> source_;
  std::vector<K> scale_;
  int order_;
  std::string name_;
};

/// p o A, i.e. x_s replaced by scale[s] * x_{source[s]}.
template <class K>
BasicPoly<K> subst_linear(const BasicPoly<K>& p, const LinearMap<K>& A) {
  if (!same_space(p.space(), A.space())) throw std::invalid_argument("map and polynomial spaces differ");
  BasicPoly<K> out(p.space());
  const std::size_t m = A.dim();
  Exponents f(m);
  for (const auto& [e, c] : p.terms()) {
    std::fill(f.begin(), f.end(), 0);
    K coeff = c;
    for (std::size_t s = 0; s < m; ++s) {
      if (e[s] == 0) continue;
      f[A.source(s)] = e[s];
      coeff *= ipow(A.scale(s), e[s]);
    }
    out.add_term(f, coeff);
  }
  return out;
}

/// Rational maps viewed over Q[i].
LinearMap<Gaussian> to_gaussian(const LinearMap<Rational>& A);

}  // namespace hamlat
