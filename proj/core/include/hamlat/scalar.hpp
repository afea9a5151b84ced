// Exact scalar fields: the rationals, and the Gaussian rationals Q[i] used
// only where the imaginary unit is unavoidable.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace hamlat {

using Rational = mpq_class;

/// num/den in lowest terms (mpq_class(num, den) does not reduce).
inline Rational ratio(long num, long den) {
  if (den == 0) throw std::domain_error("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Parses "p", "-p" or "p/q" into a canonical rational.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline double to_double(const Rational& q) { return q.get_d(); }

/// Element re + im*i of Q[i].
class Gaussian {
 public:
  Gaussian() = default;
  Gaussian(Rational re) : re_(std::move(re)) {}  // NOLINT: implicit embedding Q -> Q[i]
  Gaussian(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}
  Gaussian(long re) : re_(re) {}  // NOLINT

  static Gaussian i() { return {Rational(0), Rational(1)}; }

  const Rational& real() const { return re_; }
  const Rational& imag() const { return im_; }
  bool is_real() const { return hamlat::is_zero(im_); }

  Gaussian conj() const { return {re_, Rational(-im_)}; }

  Gaussian& operator+=(const Gaussian& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  Gaussian& operator-=(const Gaussian& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  Gaussian& operator*=(const Gaussian& o) {
    if (is_real() && o.is_real()) {
      re_ *= o.re_;
      return *this;
    }
    Rational re = re_ * o.re_ - im_ * o.im_;
    Rational im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }
  Gaussian& operator/=(const Gaussian& o);

  friend Gaussian operator+(Gaussian a, const Gaussian& b) { return a += b; }
  friend Gaussian operator-(Gaussian a, const Gaussian& b) { return a -= b; }
  friend Gaussian operator*(Gaussian a, const Gaussian& b) { return a *= b; }
  friend Gaussian operator/(Gaussian a, const Gaussian& b) { return a /= b; }
  friend Gaussian operator-(const Gaussian& a) { return {Rational(-a.re_), Rational(-a.im_)}; }
  friend bool operator==(const Gaussian& a, const Gaussian& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const Gaussian& a, const Gaussian& b) { return !(a == b); }

 private:
  Rational re_{0};
  Rational im_{0};
};

inline bool is_zero(const Gaussian& z) { return is_zero(z.real()) && is_zero(z.imag()); }
inline std::complex<double> to_complex(const Gaussian& z) {
  return {z.real().get_d(), z.imag().get_d()};
}
std::string to_string(const Gaussian& z);

/// Per-field glue used by the templated polynomial code.
template <class K>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
  static constexpr bool gaussian = false;
  using Numeric = double;
  static Numeric numeric(const Rational& q) { return q.get_d(); }
  static Rational one() { return Rational(1); }
};

template <>
struct FieldTraits<Gaussian> {
  static constexpr bool gaussian = true;
  using Numeric = std::complex<double>;
  static Numeric numeric(const Gaussian& z) { return to_complex(z); }
  static Gaussian one() { return Gaussian(Rational(1)); }
};

/// Exact integer power, negative exponents allowed for nonzero bases.
template <class K>
K ipow(const K& base, int e) {
  if (e < 0) {
    if (is_zero(base)) throw std::domain_error("negative power of zero");
    K inv = FieldTraits<K>::one();
    inv /= base;
    return ipow(inv, -e);
  }
  K result = FieldTraits<K>::one();
  K b = base;
  while (e > 0) {
    if (e & 1) result *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return result;
}

}  // namespace hamlat
