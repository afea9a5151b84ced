#include "hamlat/poly.hpp"

#include <cctype>
#include <sstream>

namespace hamlat {

VarSpace::VarSpace(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const auto& n = names_[i];
    if (n.empty() || !(std::isalpha(static_cast<unsigned char>(n[0])) || n[0] == '_'))
      throw std::invalid_argument("bad variable name '" + n + "'");
    if (n == "I") throw std::invalid_argument("'I' is reserved for the imaginary unit");
    if (!lookup_.emplace(n, i).second) throw std::invalid_argument("duplicate variable '" + n + "'");
  }
}

std::size_t VarSpace::index(std::string_view name) const {
  auto it = lookup_.find(std::string(name));
  if (it == lookup_.end()) throw std::out_of_range("unknown variable '" + std::string(name) + "'");
  return it->second;
}

bool VarSpace::contains(std::string_view name) const { return lookup_.count(std::string(name)) != 0; }

VarSpacePtr make_space(std::vector<std::string> names) {
  return std::make_shared<const VarSpace>(std::move(names));
}

GPoly to_gaussian(const Poly& p) {
  GPoly out(p.space());
  for (const auto& [e, c] : p.terms()) out.add_term(e, Gaussian(c));
  return out;
}

Poly real_exact(const GPoly& p) {
  Poly out(p.space());
  for (const auto& [e, c] : p.terms()) {
    if (!c.is_real()) throw std::domain_error("polynomial has a non-real coefficient");
    out.add_term(e, c.real());
  }
  return out;
}

namespace {

std::string monomial_string(const VarSpace& space, const Exponents& e) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += space.name(i);
    if (e[i] != 1) out += '^' + std::to_string(e[i]);
  }
  return out;
}

bool negative_lead(const Rational& q) { return sgn(q) < 0; }
// A Gaussian coefficient is written with a leading minus only when it is real
// or purely imaginary; mixed values keep their parentheses.
bool negative_lead(const Gaussian& z) {
  if (z.is_real()) return sgn(z.real()) < 0;
  if (is_zero(z.real())) return sgn(z.imag()) < 0;
  return false;
}

template <class K>
std::string format_poly(const BasicPoly<K>& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [e, c] = *it;
    const bool neg = negative_lead(c);
    K mag = neg ? K(-c) : c;
    std::string mono = monomial_string(*p.space(), e);
    std::string coeff = to_string(mag);
    std::string term;
    if (mono.empty()) {
      term = coeff;
    } else if (mag == FieldTraits<K>::one()) {
      term = mono;
    } else {
      term = coeff + "*" + mono;
    }
    if (first) {
      out = neg ? "-" + term : term;
    } else {
      out += neg ? " - " : " + ";
      out += term;
    }
    first = false;
  }
  return out;
}

template <class K>
class Parser {
 public:
  Parser(std::string_view text, VarSpacePtr space) : s_(text), space_(std::move(space)) {}

  BasicPoly<K> parse() {
    BasicPoly<K> p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << "polynomial parse error at offset " << pos_ << ": " << what << " in '" << s_ << "'";
    throw std::invalid_argument(os.str());
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  BasicPoly<K> expr() {
    BasicPoly<K> acc = term();
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  BasicPoly<K> term() {
    BasicPoly<K> acc = unary();
    for (;;) {
      if (accept('*')) {
        acc *= unary();
      } else if (accept('/')) {
        BasicPoly<K> d = unary();
        if (!d.is_constant() || d.is_zero()) fail("division by a non-constant or zero");
        K inv = FieldTraits<K>::one();
        inv /= d.constant_term();
        acc *= inv;
      } else {
        return acc;
      }
    }
  }

  BasicPoly<K> unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  BasicPoly<K> power() {
    BasicPoly<K> base = atom();
    if (!accept('^')) return base;
    skip();
    bool neg = false;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
      neg = s_[pos_] == '-';
      ++pos_;
    }
    long e = integer();
    try {
      return pow(base, static_cast<int>(neg ? -e : e));
    } catch (const std::domain_error& ex) {
      fail(ex.what());
    }
  }

  long integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    if (pos_ - start > 9) fail("exponent too large");
    return std::stol(std::string(s_.substr(start, pos_ - start)));
  }

  BasicPoly<K> atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      BasicPoly<K> inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return BasicPoly<K>(space_, K(parse_rational(s_.substr(start, pos_ - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string_view name = s_.substr(start, pos_ - start);
      if (name == "I") {
        if constexpr (FieldTraits<K>::gaussian) {
          return BasicPoly<K>(space_, Gaussian::i());
        } else {
          fail("imaginary unit needs Gaussian mode");
        }
      }
      if (!space_->contains(name)) fail("unknown variable '" + std::string(name) + "'");
      return BasicPoly<K>::var(space_, name);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view s_;
  VarSpacePtr space_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(const Poly& p) { return format_poly(p); }
std::string to_string(const GPoly& p) { return format_poly(p); }

Poly parse_poly(std::string_view text, const VarSpacePtr& space) {
  return Parser<Rational>(text, space).parse();
}
GPoly parse_gpoly(std::string_view text, const VarSpacePtr& space) {
  return Parser<Gaussian>(text, space).parse();
}

}  // namespace hamlat
