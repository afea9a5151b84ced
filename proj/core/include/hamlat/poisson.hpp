// Polynomial bivectors and vector fields: brackets, Jacobiator, Lie
// derivatives and pushforwards along scaled permutations.
#pragma once

#include <array>
#include <map>
#include <vector>

#include <nlohmann/json.hpp>

#include "hamlat/linear_map.hpp"
#include "hamlat/poly.hpp"

namespace hamlat {

template <class K>
class PoissonTensor {
 public:
  using P = BasicPoly<K>;

  PoissonTensor(VarSpacePtr space, int degree = 0)
      : space_(std::move(space)), degree_(degree), entries_(space_->size() * space_->size(), P(space_)) {}

  const VarSpacePtr& space() const { return space_; }
  std::size_t dim() const { return space_->size(); }
  int degree() const { return degree_; }
  void set_degree(int d) { degree_ = d; }

  const P& operator()(std::size_t i, std::size_t j) const { return entries_.at(i * dim() + j); }

  /// Sets pi^{ij} = p and pi^{ji} = -p.
  void set(std::size_t i, std::size_t j, const P& p) {
    check(i, j, p);
    entries_[i * dim() + j] = p;
    entries_[j * dim() + i] = -p;
  }
  /// Adds p to pi^{ij} (and -p to pi^{ji}).
  void add(std::size_t i, std::size_t j, const P& p) {
    check(i, j, p);
    entries_[i * dim() + j] += p;
    entries_[j * dim() + i] -= p;
  }
  void add(std::string_view x, std::string_view y, const P& p) { add(space_->index(x), space_->index(y), p); }

  bool is_zero() const {
    for (const auto& e : entries_)
      if (!e.is_zero()) return false;
    return true;
  }

  PoissonTensor& operator+=(const PoissonTensor& o) {
    require_same(o);
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
    return *this;
  }
  PoissonTensor& operator-=(const PoissonTensor& o) {
    require_same(o);
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
    return *this;
  }
  PoissonTensor& operator*=(const K& s) {
    for (auto& e : entries_) e *= s;
    return *this;
  }
  friend PoissonTensor operator+(PoissonTensor a, const PoissonTensor& b) { return a += b; }
  friend PoissonTensor operator-(PoissonTensor a, const PoissonTensor& b) { return a -= b; }
  friend PoissonTensor operator-(PoissonTensor a) { return a *= K(-1); }
  friend PoissonTensor operator*(const K& s, PoissonTensor a) { return a *= s; }
  friend PoissonTensor operator*(PoissonTensor a, const K& s) { return a *= s; }

  /// Entrywise equality; the degree label is bookkeeping and is ignored.
  friend bool operator==(const PoissonTensor& a, const PoissonTensor& b) {
    return same_space(a.space_, b.space_) && a.entries_ == b.entries_;
  }
  friend bool operator!=(const PoissonTensor& a, const PoissonTensor& b) { return !(a == b); }

 private:
  void check(std::size_t i, std::size_t j, const P& p) const {
    if (i >= dim() || j >= dim()) throw std::out_of_range("tensor index out of range");
    if (i == j && !p.is_zero()) throw std::invalid_argument("diagonal of a bivector must vanish");
    if (!same_space(p.space(), space_)) throw std::invalid_argument("entry lives on another space");
  }
  void require_same(const PoissonTensor& o) const {
    if (!same_space(space_, o.space_)) throw std::invalid_argument("tensors live on different spaces");
  }

  VarSpacePtr space_;
  int degree_;
  std::vector<P> entries_;
};

template <class K>
class VectorField {
 public:
  using P = BasicPoly<K>;

  explicit VectorField(VarSpacePtr space) : space_(std::move(space)), comp_(space_->size(), P(space_)) {}
  VectorField(VarSpacePtr space, std::vector<P> comp) : space_(std::move(space)), comp_(std::move(comp)) {
    if (comp_.size() != space_->size()) throw std::invalid_argument("vector field has wrong dimension");
    for (const auto& c : comp_)
      if (!same_space(c.space(), space_)) throw std::invalid_argument("component lives on another space");
  }

  const VarSpacePtr& space() const { return space_; }
  std::size_t dim() const { return comp_.size(); }
  const P& operator[](std::size_t i) const { return comp_.at(i); }
  P& operator[](std::size_t i) { return comp_.at(i); }
  const std::vector<P>& components() const { return comp_; }

  bool is_zero() const {
    for (const auto& c : comp_)
      if (!c.is_zero()) return false;
    return true;
  }

  VectorField& operator+=(const VectorField& o) {
    require_same(o);
    for (std::size_t i = 0; i < dim(); ++i) comp_[i] += o.comp_[i];
    return *this;
  }
  VectorField& operator-=(const VectorField& o) {
    require_same(o);
    for (std::size_t i = 0; i < dim(); ++i) comp_[i] -= o.comp_[i];
    return *this;
  }
  VectorField& operator*=(const K& s) {
    for (auto& c : comp_) c *= s;
    return *this;
  }
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(const K& s, VectorField a) { return a *= s; }
  friend VectorField operator*(VectorField a, const K& s) { return a *= s; }
  friend bool operator==(const VectorField& a, const VectorField& b) {
    return same_space(a.space_, b.space_) && a.comp_ == b.comp_;
  }
  friend bool operator!=(const VectorField& a, const VectorField& b) { return !(a == b); }

 private:
  void require_same(const VectorField& o) const {
    if (!same_space(space_, o.space_)) throw std::invalid_argument("fields live on different spaces");
  }

  VarSpacePtr space_;
  std::vector<P> comp_;
};

using Tensor = PoissonTensor<Rational>;
using GTensor = PoissonTensor<Gaussian>;
using Field = VectorField<Rational>;
using GField = VectorField<Gaussian>;

namespace detail {
inline void require_dim(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("dimension mismatch");
}
template <class K>
std::vector<BasicPoly<K>> gradient(const BasicPoly<K>& f) {
  std::vector<BasicPoly<K>> g;
  g.reserve(f.space()->size());
  for (std::size_t i = 0; i < f.space()->size(); ++i) g.push_back(f.diff(i));
  return g;
}
}  // namespace detail

/// {F,G} = sum_ij pi^{ij} dF/dx_i dG/dx_j.
template <class K>
BasicPoly<K> bracket(const PoissonTensor<K>& pi, const BasicPoly<K>& F, const BasicPoly<K>& G) {
  detail::require_dim(pi.dim(), F.space()->size());
  detail::require_dim(pi.dim(), G.space()->size());
  auto dF = detail::gradient(F);
  auto dG = detail::gradient(G);
  BasicPoly<K> out(pi.space());
  for (std::size_t i = 0; i < pi.dim(); ++i) {
    if (dF[i].is_zero()) continue;
    for (std::size_t j = 0; j < pi.dim(); ++j) {
      if (dG[j].is_zero() || pi(i, j).is_zero()) continue;
      out += pi(i, j) * dF[i] * dG[j];
    }
  }
  return out;
}

/// Totally antisymmetric 3-tensor, stored on i<j<k.
template <class K>
class Jacobiator {
 public:
  explicit Jacobiator(VarSpacePtr space) : space_(std::move(space)) {}

  std::size_t dim() const { return space_->size(); }
  bool is_zero() const { return nonzero_.empty(); }
  /// Nonzero entries with i<j<k.
  const std::map<std::array<std::size_t, 3>, BasicPoly<K>>& nonzero() const { return nonzero_; }

  BasicPoly<K> operator()(std::size_t i, std::size_t j, std::size_t k) const {
    if (i >= dim() || j >= dim() || k >= dim()) throw std::out_of_range("jacobiator index out of range");
    if (i == j || j == k || i == k) return BasicPoly<K>(space_);
    std::array<std::size_t, 3> idx{i, j, k};
    int sign = 1;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 2 - a; ++b)
        if (idx[b] > idx[b + 1]) {
          std::swap(idx[b], idx[b + 1]);
          sign = -sign;
        }
    auto it = nonzero_.find(idx);
    if (it == nonzero_.end()) return BasicPoly<K>(space_);
    return sign > 0 ? it->second : -it->second;
  }

  void put(std::size_t i, std::size_t j, std::size_t k, BasicPoly<K> p) {
    if (!p.is_zero()) nonzero_.emplace(std::array<std::size_t, 3>{i, j, k}, std::move(p));
  }

 private:
  VarSpacePtr space_;
  std::map<std::array<std::size_t, 3>, BasicPoly<K>> nonzero_;
};

/// J^{ijk} = sum_l (pi^{il} d_l pi^{jk} + pi^{jl} d_l pi^{ki} + pi^{kl} d_l pi^{ij}).
/// With stop_at_first set, returns as soon as one nonzero entry is found.
template <class K>
Jacobiator<K> jacobiator(const PoissonTensor<K>& pi, bool stop_at_first = false) {
  const std::size_t m = pi.dim();
  // d[l][a*m+b] = d_l pi^{ab}
  std::vector<std::vector<BasicPoly<K>>> d(m);
  for (std::size_t l = 0; l < m; ++l) {
    d[l].reserve(m * m);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) d[l].push_back(pi(a, b).diff(l));
  }
  auto term = [&](std::size_t i, std::size_t j, std::size_t k, BasicPoly<K>& acc) {
    for (std::size_t l = 0; l < m; ++l) {
      const auto& p = pi(i, l);
      if (p.is_zero()) continue;
      const auto& q = d[l][j * m + k];
      if (q.is_zero()) continue;
      acc += p * q;
    }
  };
  Jacobiator<K> out(pi.space());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      for (std::size_t k = j + 1; k < m; ++k) {
        BasicPoly<K> acc(pi.space());
        term(i, j, k, acc);
        term(j, k, i, acc);
        term(k, i, j, acc);
        if (!acc.is_zero()) {
          out.put(i, j, k, std::move(acc));
          if (stop_at_first) return out;
        }
      }
  return out;
}

template <class K>
bool is_poisson(const PoissonTensor<K>& pi) {
  return jacobiator(pi, true).is_zero();
}

/// Jacobiator of the sum; meaningful when both tensors are Poisson.
template <class K>
bool is_compatible(const PoissonTensor<K>& pi, const PoissonTensor<K>& rho) {
  detail::require_dim(pi.dim(), rho.dim());
  return is_poisson(pi + rho);
}

/// X^i = sum_j pi^{ij} dH/dx_j, so that X(F) = {F, H}.
template <class K>
VectorField<K> hamiltonian_vf(const PoissonTensor<K>& pi, const BasicPoly<K>& H) {
  detail::require_dim(pi.dim(), H.space()->size());
  auto dH = detail::gradient(H);
  VectorField<K> X(pi.space());
  for (std::size_t i = 0; i < pi.dim(); ++i)
    for (std::size_t j = 0; j < pi.dim(); ++j)
      if (!dH[j].is_zero() && !pi(i, j).is_zero()) X[i] += pi(i, j) * dH[j];
  return X;
}

/// Z(H) = sum_i Z^i dH/dx_i.
template <class K>
BasicPoly<K> directional_action(const VectorField<K>& Z, const BasicPoly<K>& H) {
  detail::require_dim(Z.dim(), H.space()->size());
  BasicPoly<K> out(Z.space());
  for (std::size_t i = 0; i < Z.dim(); ++i)
    if (!Z[i].is_zero()) out += Z[i] * H.diff(i);
  return out;
}

/// (L_Z pi)^{ij} = sum_k (Z^k d_k pi^{ij} - pi^{kj} d_k Z^i - pi^{ik} d_k Z^j).
template <class K>
PoissonTensor<K> lie_derivative_bivector(const VectorField<K>& Z, const PoissonTensor<K>& pi) {
  detail::require_dim(Z.dim(), pi.dim());
  const std::size_t m = pi.dim();
  std::vector<std::vector<BasicPoly<K>>> dZ(m);  // dZ[i][k] = d_k Z^i
  for (std::size_t i = 0; i < m; ++i) dZ[i] = detail::gradient(Z[i]);
  PoissonTensor<K> out(pi.space(), pi.degree());
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      BasicPoly<K> acc = directional_action(Z, pi(i, j));
      for (std::size_t k = 0; k < m; ++k) {
        if (!dZ[i][k].is_zero() && !pi(k, j).is_zero()) acc -= pi(k, j) * dZ[i][k];
        if (!dZ[j][k].is_zero() && !pi(i, k).is_zero()) acc -= pi(i, k) * dZ[j][k];
      }
      out.set(i, j, acc);
    }
  return out;
}

/// (A_* pi)^{ij}(x) = c_i c_j pi^{s(i) s(j)}(A^{-1} x) for (A x)_t = c_t x_{s(t)}.
template <class K>
PoissonTensor<K> pushforward_bivector(const LinearMap<K>& A, const PoissonTensor<K>& pi) {
  detail::require_dim(A.dim(), pi.dim());
  const LinearMap<K> inv = A.inverse();
  PoissonTensor<K> out(pi.space(), pi.degree());
  for (std::size_t i = 0; i < pi.dim(); ++i)
    for (std::size_t j = i + 1; j < pi.dim(); ++j) {
      const auto& p = pi(A.source(i), A.source(j));
      if (p.is_zero()) continue;
      out.set(i, j, subst_linear(p, inv) * K(A.scale(i) * A.scale(j)));
    }
  return out;
}

/// (A_* Z)^i(x) = c_i Z^{s(i)}(A^{-1} x).
template <class K>
VectorField<K> pushforward_vf(const LinearMap<K>& A, const VectorField<K>& Z) {
  detail::require_dim(A.dim(), Z.dim());
  const LinearMap<K> inv = A.inverse();
  VectorField<K> out(Z.space());
  for (std::size_t i = 0; i < Z.dim(); ++i) out[i] = subst_linear(Z[A.source(i)], inv) * A.scale(i);
  return out;
}

GTensor to_gaussian(const Tensor& t);
GField to_gaussian(const Field& f);
/// Throws std::domain_error on a non-real coefficient.
Tensor real_exact(const GTensor& t);
Field real_exact(const GField& f);

/// Moves a tensor onto another space with the same variable names.
template <class K>
PoissonTensor<K> rebase(const PoissonTensor<K>& t, const VarSpacePtr& target) {
  if (target->size() != t.dim()) throw std::invalid_argument("rebase needs equal dimensions");
  PoissonTensor<K> out(target, t.degree());
  for (std::size_t i = 0; i < t.dim(); ++i)
    for (std::size_t j = i + 1; j < t.dim(); ++j) {
      std::size_t a = target->index(t.space()->name(i));
      std::size_t b = target->index(t.space()->name(j));
      out.set(a, b, rebase(t(i, j), target));
    }
  return out;
}

/// {"dim": m, "vars": [...], "entries": [{"i","j","poly"}]}, i<j, 0-based.
nlohmann::json to_json(const Tensor& t);
nlohmann::json to_json(const GTensor& t);
Tensor tensor_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Field& f);
nlohmann::json to_json(const GField& f);
nlohmann::json to_json(const Jacobiator<Rational>& J);
nlohmann::json to_json(const Jacobiator<Gaussian>& J);

}  // namespace hamlat
