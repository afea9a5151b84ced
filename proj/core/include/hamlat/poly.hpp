// Sparse multivariate (Laurent) polynomials with exact coefficients over a
// named, ordered variable list.
#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hamlat/scalar.hpp"

namespace hamlat {

/// Ordered list of phase-space coordinate names ("a1", "b3", "x2", ...).
class VarSpace {
 public:
  explicit VarSpace(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }

  /// Throws std::out_of_range for a name that is not in the list.
  std::size_t index(std::string_view name) const;
  bool contains(std::string_view name) const;

  friend bool operator==(const VarSpace& a, const VarSpace& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

using VarSpacePtr = std::shared_ptr<const VarSpace>;

VarSpacePtr make_space(std::vector<std::string> names);

/// Pointer-or-content equality.
inline bool same_space(const VarSpacePtr& a, const VarSpacePtr& b) {
  return a == b || (a && b && *a == *b);
}

/// Exponent vector aligned with a VarSpace. Entries may be negative; the
/// root-system o.d.e. needs reciprocals of its coordinates.
using Exponents = std::vector<int>;

inline constexpr int kZeroDegree = std::numeric_limits<int>::min();

template <class K>
class BasicPoly {
 public:
  using Coeff = K;
  using TermMap = std::map<Exponents, K>;

  explicit BasicPoly(VarSpacePtr space) : space_(std::move(space)) {
    if (!space_) throw std::invalid_argument("polynomial needs a variable space");
  }
  BasicPoly(VarSpacePtr space, const K& constant) : BasicPoly(std::move(space)) {
    add_term(Exponents(space_->size(), 0), constant);
  }

  static BasicPoly var(VarSpacePtr space, std::string_view name, int power = 1) {
    Exponents e(space->size(), 0);
    e[space->index(name)] = power;
    return monomial(std::move(space), std::move(e), FieldTraits<K>::one());
  }
  static BasicPoly var(VarSpacePtr space, std::size_t index, int power = 1) {
    Exponents e(space->size(), 0);
    e.at(index) = power;
    return monomial(std::move(space), std::move(e), FieldTraits<K>::one());
  }
  static BasicPoly monomial(VarSpacePtr space, Exponents e, const K& c) {
    BasicPoly p(std::move(space));
    if (e.size() != p.space_->size()) throw std::invalid_argument("exponent length mismatch");
    p.add_term(e, c);
    return p;
  }

  const VarSpacePtr& space() const { return space_; }
  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    for (int e : terms_.begin()->first)
      if (e != 0) return false;
    return true;
  }
  K constant_term() const {
    auto it = terms_.find(Exponents(space_->size(), 0));
    return it == terms_.end() ? K(0) : it->second;
  }

  /// Total degree; kZeroDegree for the zero polynomial.
  int degree() const {
    int d = kZeroDegree;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int x : e) s += x;
      d = std::max(d, s);
    }
    return d;
  }

  /// Partial derivative with respect to the variable at `index`.
  BasicPoly diff(std::size_t index) const {
    if (index >= space_->size()) throw std::out_of_range("variable index out of range");
    BasicPoly out(space_);
    for (const auto& [e, c] : terms_) {
      if (e[index] == 0) continue;
      Exponents f = e;
      K coeff = c;
      coeff *= K(static_cast<long>(f[index]));
      --f[index];
      out.add_term(f, coeff);
    }
    return out;
  }
  BasicPoly diff(std::string_view name) const { return diff(space_->index(name)); }

  BasicPoly& operator+=(const BasicPoly& o) {
    require_same_space(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  BasicPoly& operator-=(const BasicPoly& o) {
    require_same_space(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  BasicPoly& operator*=(const K& s) {
    if (hamlat::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }
  BasicPoly& operator*=(const BasicPoly& o) { return *this = *this * o; }

  friend BasicPoly operator+(BasicPoly a, const BasicPoly& b) { return a += b; }
  friend BasicPoly operator-(BasicPoly a, const BasicPoly& b) { return a -= b; }
  friend BasicPoly operator-(BasicPoly a) {
    for (auto& [e, c] : a.terms_) c = -c;
    return a;
  }
  friend BasicPoly operator*(BasicPoly a, const K& s) { return a *= s; }
  friend BasicPoly operator*(const K& s, BasicPoly a) { return a *= s; }
  friend BasicPoly operator*(const BasicPoly& a, const BasicPoly& b) {
    a.require_same_space(b);
    BasicPoly out(a.space_);
    const std::size_t m = a.space_->size();
    Exponents e(m);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < m; ++i) e[i] = ea[i] + eb[i];
        K c = ca;
        c *= cb;
        out.add_term(e, c);
      }
    }
    return out;
  }

  friend bool operator==(const BasicPoly& a, const BasicPoly& b) {
    return same_space(a.space_, b.space_) && a.terms_ == b.terms_;
  }
  friend bool operator!=(const BasicPoly& a, const BasicPoly& b) { return !(a == b); }

  /// Adds c * x^e, dropping the term if it cancels.
  void add_term(const Exponents& e, const K& c) {
    if (hamlat::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (hamlat::is_zero(it->second)) terms_.erase(it);
    }
  }

 private:
  void require_same_space(const BasicPoly& o) const {
    if (!same_space(space_, o.space_))
      throw std::invalid_argument("polynomials live on different variable lists");
  }

  VarSpacePtr space_;
  TermMap terms_;
};

using Poly = BasicPoly<Rational>;
using GPoly = BasicPoly<Gaussian>;

inline bool is_zero(const Poly& p) { return p.is_zero(); }
inline bool is_zero(const GPoly& p) { return p.is_zero(); }

/// Integer power; negative exponents only for monomials.
template <class K>
BasicPoly<K> pow(const BasicPoly<K>& p, int e) {
  if (e < 0) {
    if (p.term_count() != 1) throw std::domain_error("negative power of a non-monomial");
    const auto& [ex, c] = *p.terms().begin();
    Exponents f = ex;
    for (int& x : f) x *= e;
    return BasicPoly<K>::monomial(p.space(), f, ipow(c, e));
  }
  BasicPoly<K> out(p.space(), FieldTraits<K>::one());
  for (int i = 0; i < e; ++i) out *= p;
  return out;
}

/// Moves p onto `target`, matching variables by name. Throws when p uses a
/// variable that `target` does not have.
template <class K>
BasicPoly<K> rebase(const BasicPoly<K>& p, const VarSpacePtr& target) {
  if (same_space(p.space(), target)) {
    BasicPoly<K> out(target);
    for (const auto& [e, c] : p.terms()) out.add_term(e, c);
    return out;
  }
  std::vector<std::ptrdiff_t> where(p.space()->size(), -1);
  for (std::size_t i = 0; i < where.size(); ++i)
    if (target->contains(p.space()->name(i)))
      where[i] = static_cast<std::ptrdiff_t>(target->index(p.space()->name(i)));
  BasicPoly<K> out(target);
  for (const auto& [e, c] : p.terms()) {
    Exponents f(target->size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (where[i] < 0)
        throw std::invalid_argument("variable '" + p.space()->name(i) + "' missing from target space");
      f[static_cast<std::size_t>(where[i])] = e[i];
    }
    out.add_term(f, c);
  }
  return out;
}

/// p with variable i replaced by images[i]; all images share `target`.
/// Negative exponents require monomial images.
template <class K>
BasicPoly<K> compose(const BasicPoly<K>& p, const std::vector<BasicPoly<K>>& images, const VarSpacePtr& target) {
  if (images.size() != p.space()->size()) throw std::invalid_argument("compose needs one image per variable");
  std::map<std::pair<std::size_t, int>, BasicPoly<K>> powers;
  auto power_of = [&](std::size_t i, int e) -> const BasicPoly<K>& {
    auto key = std::make_pair(i, e);
    auto it = powers.find(key);
    if (it == powers.end()) it = powers.emplace(key, pow(images[i], e)).first;
    return it->second;
  };
  BasicPoly<K> out(target);
  for (const auto& [e, c] : p.terms()) {
    BasicPoly<K> term(target, c);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) term *= power_of(i, e[i]);
    out += term;
  }
  return out;
}

/// Exact evaluation.
template <class K>
K eval(const BasicPoly<K>& p, std::span<const K> point) {
  if (point.size() != p.space()->size()) throw std::invalid_argument("evaluation point has wrong dimension");
  K sum(0);
  for (const auto& [e, c] : p.terms()) {
    K term = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) term *= ipow(point[i], e[i]);
    sum += term;
  }
  return sum;
}

/// Floating-point evaluation (double for Q, complex<double> for Q[i]).
template <class K, class N>
N eval_numeric(const BasicPoly<K>& p, std::span<const N> point) {
  if (point.size() != p.space()->size()) throw std::invalid_argument("evaluation point has wrong dimension");
  N sum{};
  for (const auto& [e, c] : p.terms()) {
    N term = N(FieldTraits<K>::numeric(c));
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (e[i] < 0 && point[i] == N{}) throw std::domain_error("negative power of a zero coordinate");
      N f = point[i];
      int k = e[i] < 0 ? -e[i] : e[i];
      N pw = N(1);
      for (int j = 0; j < k; ++j) pw *= f;
      term *= e[i] < 0 ? N(1) / pw : pw;
    }
    sum += term;
  }
  return sum;
}

inline double eval_numeric(const Poly& p, std::span<const double> point) {
  return eval_numeric<Rational, double>(p, point);
}

/// Embeds a rational polynomial into Q[i].
GPoly to_gaussian(const Poly& p);

/// Returns the rational polynomial equal to p; throws std::domain_error if
/// any coefficient has a nonzero imaginary part.
Poly real_exact(const GPoly& p);

/// Canonical human-readable form, e.g. "2*a1*b1^2 - 1/2*a2".
std::string to_string(const Poly& p);
std::string to_string(const GPoly& p);

/// Parses the grammar produced by to_string (plus parentheses and integer
/// powers of sub-expressions). "I" denotes the imaginary unit and is only
/// accepted by parse_gpoly.
Poly parse_poly(std::string_view text, const VarSpacePtr& space);
GPoly parse_gpoly(std::string_view text, const VarSpacePtr& space);

}  // namespace hamlat
