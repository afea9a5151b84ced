#include <doctest.h>

#include <random>

#include "hamlat/moser.hpp"

using namespace hamlat;

namespace {

GPoly G(std::string_view s, const VarSpacePtr& v) { return parse_gpoly(s, v); }

void check_matrix(const GMatrix& m, const std::vector<std::vector<std::string>>& want) {
  REQUIRE(m.size() == want.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) {
      CAPTURE(i);
      CAPTURE(j);
      CHECK(to_string(m(i, j)) == want[i][j]);
    }
}

}  // namespace

TEST_SUITE("moser") {

TEST_CASE("x lax matrix") {
  check_matrix(x_lax(3), {{"0", "x1", "0"}, {"x1", "0", "I*x1"}, {"0", "I*x1", "0"}});
  const GMatrix L9 = x_lax(9);
  const std::vector<std::string> sup{"x1", "x2", "x3", "x4", "I*x4", "I*x3", "I*x2", "I*x1"};
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(to_string(L9(i, i + 1)) == sup[i]);
    CHECK(L9(i + 1, i) == L9(i, i + 1));
    CHECK(L9(i, i).is_zero());
  }
  CHECK(L9.is_symmetric());
  CHECK_THROWS_AS(x_lax(4), std::invalid_argument);
  CHECK_THROWS_AS(x_lax(1), std::invalid_argument);
  for (int n = 1; n <= 5; ++n) CHECK(x_lax_product_defects(n).empty());
}

TEST_CASE("x flow") {
  const Field f1 = x_flow(1);
  CHECK(to_string(f1[0]) == "-x1^3");
  const Field f2 = x_flow(2);
  CHECK(to_string(f2[0]) == "x1*x2^2");
  CHECK(to_string(f2[1]) == "-x1^2*x2 - x2^3");
  for (int n = 1; n <= 5; ++n)
    for (const auto& d : x_flow_chain_defects(n)) CHECK(d.is_zero());
  // the printed form flips the interior sign
  bool printed_ok = true;
  for (const auto& d : x_flow_chain_defects(3, XFlowForm::printed)) printed_ok = printed_ok && d.is_zero();
  CHECK_FALSE(printed_ok);
}

TEST_CASE("N = 9 blocks") {
  const MoserSplit s = square_and_split(9);
  CHECK(s.parity_invariant);
  CHECK(s.odd_kept.indices == std::vector<std::size_t>{1, 3, 5, 7, 9});
  CHECK(s.odd_kept.type == 'B');
  CHECK(s.odd_kept.rank == 2);
  CHECK(s.odd_kept.real);
  check_matrix(s.odd_kept.matrix, {{"x1^2", "x1*x2", "0", "0", "0"},
                                   {"x1*x2", "x2^2 + x3^2", "x3*x4", "0", "0"},
                                   {"0", "x3*x4", "0", "-x3*x4", "0"},
                                   {"0", "0", "-x3*x4", "-x2^2 - x3^2", "-x1*x2"},
                                   {"0", "0", "0", "-x1*x2", "-x1^2"}});
  CHECK(s.even_kept.type == 'C');
  CHECK(s.even_kept.rank == 2);
  CHECK_FALSE(s.even_kept.real);

  const JacobiIdentification id = identify_jacobi(s.odd_kept);
  const auto& v = id.space;
  CHECK(v->names() == std::vector<std::string>{"A1", "A2", "B1", "B2"});
  const auto& x = s.odd_kept.matrix.space();
  CHECK(id.b_of_x[0] == G("x1^2", x));
  CHECK(id.b_of_x[1] == G("x2^2 + x3^2", x));
  CHECK(id.a_of_x[0] == G("x1*x2", x));
  CHECK(id.a_of_x[1] == G("x3*x4", x));
  CHECK(id.induced[0] == G("A1*(B2 - B1)", v));
  CHECK(id.induced[1] == G("-A2*B2", v));
  CHECK(id.induced[2] == G("2*A1^2", v));
  CHECK(id.induced[3] == G("2*A2^2 - 2*A1^2", v));
}

TEST_CASE("N = 5 and N = 7 blocks") {
  const MoserSplit s5 = square_and_split(5);
  CHECK(s5.odd_kept.matrix.size() == 3);
  CHECK(s5.even_kept.matrix.size() == 2);
  CHECK(s5.odd_kept.type == 'B');
  CHECK(s5.odd_kept.rank == 1);
  CHECK(s5.even_kept.type == 'C');
  CHECK(s5.even_kept.rank == 1);
  check_matrix(s5.odd_kept.matrix, {{"x1^2", "x1*x2", "0"}, {"x1*x2", "0", "-x1*x2"}, {"0", "-x1*x2", "-x1^2"}});
  check_matrix(s5.even_kept.matrix, {{"x1^2 + x2^2", "I*x2^2"}, {"I*x2^2", "-x1^2 - x2^2"}});

  const JacobiIdentification c1 = identify_jacobi(s5.even_kept);
  CHECK(c1.induced[0] == G("-2*A1*B1", c1.space));
  CHECK(c1.induced[1] == G("2*A1^2", c1.space));

  const MoserSplit s7 = square_and_split(7);
  CHECK(s7.odd_kept.type == 'C');
  CHECK(s7.odd_kept.rank == 2);
  CHECK(s7.even_kept.type == 'B');
  CHECK(s7.even_kept.rank == 1);
  check_matrix(s7.odd_kept.matrix, {{"x1^2", "x1*x2", "0", "0"},
                                    {"x1*x2", "x2^2 + x3^2", "I*x3^2", "0"},
                                    {"0", "I*x3^2", "-x2^2 - x3^2", "-x1*x2"},
                                    {"0", "0", "-x1*x2", "-x1^2"}});
  check_matrix(s7.even_kept.matrix,
               {{"x1^2 + x2^2", "x2*x3", "0"}, {"x2*x3", "0", "-x2*x3"}, {"0", "-x2*x3", "-x1^2 - x2^2"}});
  CHECK_THROWS_AS(square_and_split(3), std::invalid_argument);
  CHECK_THROWS_AS(square_and_split(8), std::invalid_argument);
}

TEST_CASE("zero point gives zero blocks") {
  const MoserSplit s = square_and_split(9);
  const std::vector<Gaussian> zero(4, Gaussian(0L));
  for (const JacobiBlock* b : {&s.odd_kept, &s.even_kept})
    for (std::size_t i = 0; i < b->matrix.size(); ++i)
      for (std::size_t j = 0; j < b->matrix.size(); ++j) CHECK(is_zero(eval<Gaussian>(b->matrix(i, j), zero)));
  const std::vector<Gaussian> zero2(4, Gaussian(0L));
  const JacobiIdentification id = identify_jacobi(s.odd_kept);
  for (std::size_t i = 0; i < id.induced.dim(); ++i) CHECK(is_zero(eval<Gaussian>(id.induced[i], zero2)));
}

TEST_CASE("every block is a Toda system") {
  for (int N = 5; N <= 13; N += 2) {
    CAPTURE(N);
    const MoserSplit s = square_and_split(N);
    CHECK(s.parity_invariant);
    for (const JacobiBlock* b : {&s.odd_kept, &s.even_kept}) {
      CHECK(b->type == (b->matrix.size() % 2 == 1 ? 'B' : 'C'));
      if (b->type == 'B') CHECK(b->real);
      CHECK_NOTHROW(identify_jacobi(*b));
      const auto m = match_catalog_toda(*b);
      REQUIRE(m);
      CHECK(m->alpha == 4);
      CHECK(m->beta == -2);
      CHECK(m->target.kind == (b->type == 'B' ? Kind::B : Kind::C));
      CHECK(m->target.n == b->rank);
    }
  }
}

TEST_CASE("block spectra are squared spectra of L") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int N = 5; N <= 13; N += 2) {
    const MoserSplit s = square_and_split(N);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> x((N - 1) / 2);
      for (auto& v : x) v = u(rng);
      CHECK(spectral_mismatch(s, x) < 1e-10);
    }
  }
}

TEST_CASE("json") {
  const MoserSplit s = square_and_split(9);
  const auto j = to_json(s.odd_kept);
  CHECK(j.at("type") == "B2");
  CHECK(j.at("parity") == "odd_kept");
  CHECK(j.at("matrix")[1][1] == "x2^2 + x3^2");
  const auto k = to_json(identify_jacobi(s.odd_kept));
  CHECK(k.at("equations").at("B1") == "2*A1^2");
}

}  // TEST_SUITE
