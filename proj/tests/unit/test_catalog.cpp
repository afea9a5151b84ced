#include <doctest.h>

#include "hamlat/catalog.hpp"

using namespace hamlat;

namespace {

Poly P(std::string_view s, const VarSpacePtr& v) { return parse_poly(s, v); }

std::string entry(const Tensor& t, std::string_view x, std::string_view y) {
  return to_string(t(t.space()->index(x), t.space()->index(y)));
}

}  // namespace

TEST_SUITE("catalog") {

TEST_CASE("system ids") {
  CHECK(SystemId::parse("toda-a:4") == SystemId::toda_a(4));
  CHECK(SystemId::parse("volterra-c:2") == SystemId::volterra_b(2));
  CHECK(SystemId::toda_b(2).str() == "toda-b:2");
  CHECK(SystemId::toda_c(3).lax_size() == 6);
  CHECK_THROWS_AS(SystemId::parse("toda-x:3"), std::invalid_argument);
  CHECK_THROWS_AS(SystemId::parse("toda-a:0"), std::invalid_argument);
  CHECK_THROWS_AS(SystemId::parse("toda-a"), std::invalid_argument);
}

TEST_CASE("variables") {
  using V = std::vector<std::string>;
  CHECK(variables(SystemId::toda_a(3))->names() == V{"a1", "a2", "b1", "b2", "b3"});
  CHECK(variables(SystemId::volterra_b(1))->names() == V{"a1"});
  CHECK(variables(SystemId::toda_b(2))->names() == V{"a1", "a2", "b1", "b2"});
  CHECK(SystemId::toda_b(2).lax_size() == 5);
  CHECK(variables(SystemId::volterra_a(5))->names() == V{"a1", "a2", "a3", "a4"});
  CHECK(variables(SystemId::toda_a(3)) == variables(SystemId::toda_a(3)));
}

TEST_CASE("lax matrices") {
  const LaxMatrix t = lax(SystemId::toda_a(2));
  const auto v = t.space();
  CHECK(t(0, 0) == P("b1", v));
  CHECK(t(0, 1) == P("a1", v));
  CHECK(t(1, 0) == P("1", v));
  CHECK(t(1, 1) == P("b2", v));

  const LaxMatrix k = lax(SystemId::volterra_a(2));
  CHECK(k(0, 0).is_zero());
  CHECK(k(0, 1) == P("a1", k.space()));
  CHECK(k(1, 0) == P("1", k.space()));

  const LaxMatrix b = lax(SystemId::toda_b(1));
  const auto w = b.space();
  const char* want[3][3] = {{"b1", "a1", "0"}, {"1", "0", "-a1"}, {"0", "-1", "-b1"}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(b(i, j) == P(want[i][j], w));
}

TEST_CASE("hamiltonians") {
  const SystemId t2 = SystemId::toda_a(2);
  CHECK(hamiltonian(t2, 2) == P("1/2*b1^2 + 1/2*b2^2 + a1", variables(t2)));
  CHECK(hamiltonian(SystemId::toda_b(1), 1).is_zero());
  CHECK(hamiltonian(SystemId::toda_b(1), 2) == P("b1^2 + 2*a1", variables(SystemId::toda_b(1))));
  // traces computed independently
  CHECK(to_string(hamiltonian(SystemId::toda_a(3), 3)) ==
        "a1*b1 + a1*b2 + a2*b2 + a2*b3 + 1/3*b1^3 + 1/3*b2^3 + 1/3*b3^3");
  CHECK(to_string(hamiltonian(SystemId::toda_b(2), 4)) ==
        "a1^2 + 2*a1*a2 + 2*a1*b1^2 + 2*a1*b1*b2 + 2*a1*b2^2 + 2*a2^2 + 2*a2*b2^2 + 1/2*b1^4 + 1/2*b2^4");
  CHECK(hamiltonian(SystemId::toda_b(2), 3).is_zero());
}

TEST_CASE("printed normalization entries") {
  const Tensor t = tensor(SystemId::toda_a(2), 3, Normalization::printed);
  CHECK(t(t.space()->index("a1"), t.space()->index("b1")) == P("-a1*b1^2 - a1^2", t.space()));
  CHECK(entry(tensor(SystemId::volterra_a(5), 4, Normalization::printed), "a1", "a3") == "a1*a2*a3");
  const Tensor vb = tensor(SystemId::volterra_b(2), 4, Normalization::printed);
  CHECK(vb(0, 1) == P("1/2*a1*a2*(a1 + 2*a2)", vb.space()));
  CHECK_THROWS_AS(tensor(SystemId::toda_a(3), 4), std::invalid_argument);
  CHECK_THROWS_AS(tensor(SystemId::volterra_b(2), 2), std::invalid_argument);
}

TEST_CASE("normalizations differ by a sign on the top brackets") {
  for (int n = 2; n <= 4; ++n) {
    const SystemId s = SystemId::toda_a(n);
    CHECK(tensor(s, 3, Normalization::printed) == -tensor(s, 3));
    CHECK(tensor(s, 2, Normalization::printed) == tensor(s, 2));
    CHECK(tensor(s, 1, Normalization::printed) == tensor(s, 1));
  }
  CHECK(tensor(SystemId::volterra_a(5), 4, Normalization::printed) == -tensor(SystemId::volterra_a(5), 4));
  CHECK(tensor(SystemId::volterra_b(3), 4, Normalization::printed) == -tensor(SystemId::volterra_b(3), 4));
}

TEST_CASE("toda-b brackets") {
  const Tensor pi1 = tensor(SystemId::toda_b(2), 1);
  CHECK(entry(pi1, "a1", "b1") == "1/2*a1");
  CHECK(entry(pi1, "a1", "b2") == "-1/2*a1");
  CHECK(entry(pi1, "a2", "b2") == "1/2*a2");
  CHECK(entry(pi1, "a1", "a2") == "0");
  const Tensor pi3 = tensor(SystemId::toda_b(2), 3, Normalization::printed);
  CHECK(pi3(pi3.space()->index("a2"), pi3.space()->index("b2")) == P("-1/2*a2*b2^2 - a2^2", pi3.space()));
  CHECK(entry(pi3, "b1", "b2") == "1/2*a1*b1 + 1/2*a1*b2");
}

TEST_CASE("special fields") {
  const SystemId t2 = SystemId::toda_a(2);
  const auto v = variables(t2);
  const Field Z1p = special_field(t2, Special::Z1, 0, Normalization::printed);
  CHECK(Z1p[0] == P("(-b1 + 3*b2)*a1", v));
  CHECK(Z1p[1] == P("4*a1 + b1^2", v));
  CHECK(Z1p[2] == P("-2*a1 + b2^2", v));
  const Field Z1 = special_field(t2, Special::Z1);
  CHECK(Z1[0] == P("(-b1 + 5*b2)*a1", v));
  CHECK(special_field(t2, Special::Z0, 0, Normalization::printed)[0] == P("a1", v));
  CHECK(special_field(t2, Special::Z0)[0] == P("2*a1", v));

  const auto w = variables(SystemId::volterra_b(1));
  CHECK(special_field(SystemId::volterra_b(1), Special::bn_volterra_flow)[0] == P("a1^2", w));
  const Field b2 = special_field(SystemId::volterra_b(2), Special::bn_volterra_flow);
  const auto w2 = b2.space();
  CHECK(b2[0] == P("-a1*a2", w2));
  CHECK(b2[1] == P("a2*(a1 + a2)", w2));

  const SystemId k4 = SystemId::volterra_a(4);
  CHECK(special_field(k4, Special::flow, 2) == special_field(k4, Special::km));
  const Field km = special_field(k4, Special::km);
  CHECK(km[1] == P("a2*(a1 - a3)", km.space()));
  CHECK_THROWS(special_field(k4, Special::Z1));
}

TEST_CASE("symmetries") {
  const SystemId t2 = SystemId::toda_a(2);
  const auto psi = symmetry(SymmetryName::psi, t2);
  const auto v = variables(t2);
  CHECK(subst_linear(P("a1", v), psi) == P("a1", v));
  CHECK(subst_linear(P("b2", v), psi) == P("-b2", v));
  CHECK(psi.order() == 2);

  const auto phi = symmetry(SymmetryName::phi_toda, SystemId::toda_a(5));
  CHECK(phi.power(2).is_identity());
  CHECK_THROWS_AS(symmetry(SymmetryName::phi_toda, SystemId::toda_a(4)), std::invalid_argument);
  CHECK_THROWS_AS(symmetry(SymmetryName::phi_volterra, SystemId::volterra_a(4)), std::invalid_argument);

  for (int n = 1; n <= 3; ++n) {
    const auto pt = phi_tilde(n);
    const SystemId s = SystemId::toda_a(2 * n + 1);
    CHECK(pt.order() == 4);
    CHECK(pt.power(2) == to_gaussian(symmetry(SymmetryName::psi, s)));
    // restricted to b = 0 it acts on the a's as phi_volterra
    const auto pv = symmetry(SymmetryName::phi_volterra, SystemId::volterra_a(2 * n + 1));
    for (std::size_t t = 0; t < pv.dim(); ++t) {
      CHECK(pt.source(t) == pv.source(t));
      CHECK(pt.scale(t) == Gaussian(pv.scale(t)));
    }
  }
}

TEST_CASE("I4") {
  CHECK(i4_hamiltonian(2) == P("1/4*(2*a1^2 + a1*a2)", variables(SystemId::volterra_b(2))));
  CHECK(i4_hamiltonian(1).is_zero());
  CHECK(i4_hamiltonian(3) == P("1/4*(2*a1^2 + a1*a2 + 2*a2^2 + a2*a3)", variables(SystemId::volterra_b(3))));
}

TEST_CASE("every catalog tensor is Poisson up to rank 5") {
  for (int n = 1; n <= 5; ++n) {
    CAPTURE(n);
    for (int k = 1; k <= 3; ++k)
      if (n >= 2) CHECK(is_poisson(tensor(SystemId::toda_a(n), k)));
    CHECK(is_poisson(tensor(SystemId::toda_b(n), 1)));
    CHECK(is_poisson(tensor(SystemId::toda_b(n), 3)));
    CHECK(is_poisson(tensor(SystemId::volterra_b(n), 4)));
    CHECK(is_poisson(tensor(SystemId::toda_c(n), 1)));
    CHECK(is_poisson(tensor(SystemId::toda_c(n), 3)));
  }
  for (int N = 2; N <= 11; ++N) {
    CHECK(is_poisson(tensor(SystemId::volterra_a(N), 2)));
    CHECK(is_poisson(tensor(SystemId::volterra_a(N), 4)));
  }
}

TEST_CASE("integrals are in involution") {
  for (int n = 2; n <= 4; ++n) {
    const SystemId s = SystemId::toda_a(n);
    for (int k = 1; k <= 3; ++k)
      for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) CHECK(bracket(tensor(s, k), hamiltonian(s, i), hamiltonian(s, j)).is_zero());
    CHECK(hamiltonian_vf(tensor(s, 1), hamiltonian(s, 1)).is_zero());
  }
  for (int n = 1; n <= 3; ++n) {
    const SystemId s = SystemId::toda_b(n);
    for (int k : {1, 3})
      for (int i = 2; i <= 2 * n; i += 2)
        for (int j = i + 2; j <= 2 * n + 2; j += 2)
          CHECK(bracket(tensor(s, k), hamiltonian(s, i), hamiltonian(s, j)).is_zero());
  }
  for (int N = 3; N <= 7; ++N) {
    const SystemId s = SystemId::volterra_a(N);
    for (int k : {2, 4})
      for (int i = 2; i <= N; i += 2)
        for (int j = i + 2; j <= N + 2; j += 2)
          CHECK(bracket(tensor(s, k), hamiltonian(s, i), hamiltonian(s, j)).is_zero());
  }
}

TEST_CASE("ladders and deformation relations") {
  for (int n = 2; n <= 4; ++n) {
    const SystemId s = SystemId::toda_a(n);
    auto X = [&](int k, int l) { return hamiltonian_vf(tensor(s, k), hamiltonian(s, l)); };
    CHECK(X(2, 1) == X(1, 2));
    CHECK(X(3, 1) == X(2, 2));
    CHECK(X(2, 2) == X(1, 3));
    CHECK(X(1, 2) == special_field(s, Special::toda_system));
    const Field Z0 = special_field(s, Special::Z0), Z1 = special_field(s, Special::Z1);
    for (int l = 1; l <= 3; ++l) {
      CHECK(lie_derivative_bivector(Z0, tensor(s, l)) == tensor(s, l) * Rational(l - 2));
      CHECK(directional_action(Z0, hamiltonian(s, l)) == hamiltonian(s, l) * Rational(l));
      CHECK(directional_action(Z1, hamiltonian(s, l)) == hamiltonian(s, l + 1) * Rational(l + 1));
    }
    CHECK(lie_derivative_bivector(Z1, tensor(s, 1)) == tensor(s, 2) * Rational(-2));
    CHECK(lie_derivative_bivector(Z1, tensor(s, 2)) == -tensor(s, 3));
  }
  for (int n = 1; n <= 3; ++n) {
    const SystemId s = SystemId::toda_b(n);
    CHECK(hamiltonian_vf(tensor(s, 3), hamiltonian(s, 2)) == hamiltonian_vf(tensor(s, 1), hamiltonian(s, 4)));
  }
  for (int N = 3; N <= 7; ++N) {
    const SystemId s = SystemId::volterra_a(N);
    CHECK(hamiltonian_vf(tensor(s, 4), hamiltonian(s, 2)) == hamiltonian_vf(tensor(s, 2), hamiltonian(s, 4)));
  }
}

TEST_CASE("printed Euler and master fields miss the deformation relations") {
  const SystemId s = SystemId::toda_a(3);
  const Field Z0 = special_field(s, Special::Z0, 0, Normalization::printed);
  const Field Z1 = special_field(s, Special::Z1, 0, Normalization::printed);
  CHECK(directional_action(Z0, hamiltonian(s, 2)) != hamiltonian(s, 2) * Rational(2));
  CHECK(lie_derivative_bivector(Z1, tensor(s, 1)) != tensor(s, 2) * Rational(-2));
}

TEST_CASE("B_n-Volterra from pi4 and I4") {
  // pi4 is cubic and I4 quadratic, so pi4 dI4 is quartic while the system is
  // quadratic: no scalar relates them.
  for (int n = 2; n <= 4; ++n) {
    const SystemId s = SystemId::volterra_b(n);
    const Field X = hamiltonian_vf(tensor(s, 4), i4_hamiltonian(n));
    const Field F = special_field(s, Special::bn_volterra_flow);
    int dx = kZeroDegree, df = kZeroDegree;
    for (std::size_t i = 0; i < X.dim(); ++i) {
      dx = std::max(dx, X[i].degree());
      df = std::max(df, F[i].degree());
    }
    CHECK(dx == 4);
    CHECK(df == 2);
  }
}

}  // TEST_SUITE
