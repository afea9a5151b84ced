#include <doctest.h>

#include <random>

#include "hamlat/catalog.hpp"
#include "hamlat/linear_map.hpp"
#include "hamlat/poly.hpp"

using namespace hamlat;

namespace {

VarSpacePtr ab2() { return make_space({"a1", "a2", "b1", "b2"}); }

Poly P(std::string_view s, const VarSpacePtr& v) { return parse_poly(s, v); }

Poly random_poly(std::mt19937_64& rng, const VarSpacePtr& v, int terms = 4) {
  std::uniform_int_distribution<int> coeff(-5, 5), den(1, 3), pw(0, 2);
  Poly p(v);
  for (int t = 0; t < terms; ++t) {
    Exponents e(v->size());
    for (auto& x : e) x = pw(rng);
    p.add_term(e, ratio(coeff(rng), den(rng)));
  }
  return p;
}

}  // namespace

TEST_SUITE("polyalg") {

TEST_CASE("ring operations") {
  auto v = ab2();
  CHECK(P("a1 + b1", v) + P("a1 - b1", v) == P("2*a1", v));
  CHECK((P("a1", v) * Poly(v)).is_zero());
  CHECK(pow(P("a1 + a2", v), 2) == P("a1^2 + 2*a1*a2 + a2^2", v));
  CHECK(to_string(P("a1 + a2", v) * P("a1 + a2", v)) == "a1^2 + 2*a1*a2 + a2^2");
  CHECK(P("3/6*a1", v) == P("1/2*a1", v));
  CHECK(Poly(v).degree() == kZeroDegree);
}

TEST_CASE("canonical string round trip") {
  auto v = ab2();
  const Poly p = P("2*a1*b1^2 - 1/2*a2", v);
  CHECK(to_string(p) == "2*a1*b1^2 - 1/2*a2");
  CHECK(parse_poly(to_string(p), v) == p);
  CHECK(to_string(Poly(v)) == "0");
  CHECK_THROWS_AS(parse_poly("c7", v), std::invalid_argument);
}

TEST_CASE("partial derivatives") {
  auto v = make_space({"a1", "a2", "b1", "b2"});
  CHECK(P("a1*b1^2", v).diff("b1") == P("2*a1*b1", v));
  CHECK(P("a2", v).diff("a1").is_zero());
  CHECK(P("a1^2*b2 + a1", v).diff("a1") == P("2*a1*b2 + 1", v));
  CHECK_THROWS(P("a1", v).diff("z9"));
}

TEST_CASE("linear substitution") {
  const SystemId t2 = SystemId::toda_a(2);
  const auto v2 = variables(t2);
  const auto psi = symmetry(SymmetryName::psi, t2);
  CHECK(subst_linear(P("b1", v2), psi) == P("-b1", v2));
  CHECK(subst_linear(P("a1", v2), LinearMap<Rational>::identity(v2)) == P("a1", v2));

  const SystemId t5 = SystemId::toda_a(5);
  const auto v5 = variables(t5);
  const auto phi = symmetry(SymmetryName::phi_toda, t5);
  CHECK(subst_linear(P("a1*b2", v5), phi) == P("-a4*b4", v5));

  const std::vector<std::vector<Rational>> rot{{0, 1}, {1, 1}};
  CHECK_THROWS_AS(LinearMap<Rational>::from_matrix(make_space({"a1", "a2"}), rot, 2), std::invalid_argument);
}

TEST_CASE("evaluation") {
  auto v = make_space({"a1", "b1"});
  const std::vector<Rational> pt{1, 2};
  CHECK(eval<Rational>(P("a1 + b1", v), pt) == 3);
  CHECK(eval<Rational>(Poly(v), pt) == 0);
  const std::vector<Rational> q{3, 2};
  CHECK(eval<Rational>(P("a1*b1^2", v), q) == 12);
  const std::vector<double> d{3.0, 2.0};
  CHECK(eval_numeric(P("a1*b1^2", v), d) == doctest::Approx(12.0));
  const std::vector<Rational> bad{1};
  CHECK_THROWS_AS(eval<Rational>(P("a1", v), bad), std::invalid_argument);
}

TEST_CASE("gaussian coefficients") {
  auto v = make_space({"x1"});
  const GPoly p = parse_gpoly("I*x1", v);
  CHECK(to_string(p * p) == "-x1^2");
  CHECK(real_exact(p * p) == P("-x1^2", v));
  CHECK_THROWS_AS(real_exact(p), std::domain_error);
  CHECK_THROWS_AS(parse_poly("I*x1", v), std::invalid_argument);
}

TEST_CASE("ring axioms on random polynomials") {
  std::mt19937_64 rng(7);
  auto v = ab2();
  for (int trial = 0; trial < 40; ++trial) {
    const Poly p = random_poly(rng, v), q = random_poly(rng, v), r = random_poly(rng, v);
    CHECK((p * q) * r == p * (q * r));
    CHECK(p * (q + r) == p * q + p * r);
    CHECK(p * q == q * p);
    CHECK(p + q == q + p);
    CHECK((p - p).is_zero());
  }
}

TEST_CASE("mixed partials commute") {
  std::mt19937_64 rng(11);
  auto v = ab2();
  for (int trial = 0; trial < 40; ++trial) {
    const Poly p = random_poly(rng, v, 6);
    for (std::size_t i = 0; i < v->size(); ++i)
      for (std::size_t j = 0; j < v->size(); ++j) CHECK(p.diff(i).diff(j) == p.diff(j).diff(i));
  }
}

TEST_CASE("substitution is a ring homomorphism and commutes with evaluation") {
  std::mt19937_64 rng(13);
  const SystemId t3 = SystemId::toda_a(3);
  const auto v = variables(t3);
  const auto phi = symmetry(SymmetryName::phi_toda, t3);
  const auto psi = symmetry(SymmetryName::psi, t3);
  std::uniform_int_distribution<int> u(-4, 4);
  for (int trial = 0; trial < 30; ++trial) {
    const Poly p = random_poly(rng, v), q = random_poly(rng, v);
    for (const auto& A : {phi, psi}) {
      CHECK(subst_linear(p * q, A) == subst_linear(p, A) * subst_linear(q, A));
      CHECK(subst_linear(p + q, A) == subst_linear(p, A) + subst_linear(q, A));
      std::vector<Rational> x(v->size());
      for (auto& c : x) c = u(rng);
      CHECK(eval<Rational>(subst_linear(p, A), x) == eval<Rational>(p, A.apply(x)));
    }
  }
}

}  // TEST_SUITE
