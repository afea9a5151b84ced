#include "hamlat/scalar.hpp"

#include <stdexcept>

namespace hamlat {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal '" + s + "'");
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Gaussian& Gaussian::operator/=(const Gaussian& o) {
  if (hamlat::is_zero(o)) throw std::domain_error("division by zero");
  if (o.is_real()) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  Rational norm = o.re_ * o.re_ + o.im_ * o.im_;
  *this *= o.conj();
  re_ /= norm;
  im_ /= norm;
  return *this;
}

std::string to_string(const Gaussian& z) {
  if (z.is_real()) return to_string(z.real());
  std::string im;
  if (z.imag() == 1) {
    im = "I";
  } else if (z.imag() == -1) {
    im = "-I";
  } else {
    im = to_string(z.imag()) + "*I";
  }
  if (is_zero(z.real())) return im;
  std::string out = "(" + to_string(z.real());
  if (im.front() == '-') {
    out += " - " + im.substr(1);
  } else {
    out += " + " + im;
  }
  return out + ")";
}

}  // namespace hamlat
