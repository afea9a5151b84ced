// Acceptance run: one PASS/FAIL line per criterion.
//
// Usage: hamlat_acceptance [--expect-known-failures] [--verbose]
//
// Exit status is 0 when every sub-check passes. With --expect-known-failures
// it is 0 when the failing sub-checks are exactly the ones listed in
// kKnownFailures (so a new failure, or a known one starting to pass, is
// still reported as an error).

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hamlat/bogo.hpp"
#include "hamlat/catalog.hpp"
#include "hamlat/flows.hpp"
#include "hamlat/moser.hpp"
#include "hamlat/reduction.hpp"

using namespace hamlat;

namespace {

// Tolerances
constexpr double kDriftTol = 1e-8;
constexpr double kOrderLo = 12.0;
constexpr double kOrderHi = 20.0;
constexpr double kCommuteTol = 1e-6;
constexpr double kJacobiSeconds = 60.0;
constexpr double kNumericsSeconds = 30.0;

const std::set<std::string> kKnownFailures = {
    // phi_C on T_{2n} satisfies phi_* pi_k = (-1)^(k+1) pi_k, not (-1)^k
    "4/phi_c",
    // pi4 dI4 is quartic, the B_n-Volterra field quadratic
    "6/I4",
};

struct Criterion {
  int id;
  std::string title;
  std::vector<std::pair<std::string, bool>> subs;  // (sub-check id, ok)
  std::vector<std::string> notes;
  double seconds = 0.0;

  void sub(const std::string& name, bool ok) {
    for (auto& [n, v] : subs)
      if (n == name) {
        v = v && ok;
        return;
      }
    subs.emplace_back(name, ok);
  }
  bool ok() const {
    for (const auto& s : subs)
      if (!s.second) return false;
    return true;
  }
};

template <class K>
FiniteGroupAction<K> group_of(const LinearMap<K>& g) {
  return FiniteGroupAction<K>::generate({g});
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << v;
  return os.str();
}

void jacobi(Criterion& c) {
  for (int N = 2; N <= 11; ++N)
    for (int k = 1; k <= 3; ++k) c.sub("toda-a pi" + std::to_string(k), is_poisson(tensor(SystemId::toda_a(N), k)));
  for (int N = 3; N <= 11; ++N)
    for (int k : {2, 4}) c.sub("volterra-a pi" + std::to_string(k), is_poisson(tensor(SystemId::volterra_a(N), k)));
  for (int n = 1; n <= 5; ++n) {
    c.sub("volterra-b pi4", is_poisson(tensor(SystemId::volterra_b(n), 4)));
    c.sub("toda-b pi1", is_poisson(tensor(SystemId::toda_b(n), 1)));
    c.sub("toda-b pi3", is_poisson(tensor(SystemId::toda_b(n), 3)));
  }
}

void compatibility(Criterion& c) {
  for (int n = 2; n <= 4; ++n) {
    const SystemId s = SystemId::toda_a(n);
    c.sub("toda-a (1,2)", is_poisson(tensor(s, 1) + tensor(s, 2)));
    c.sub("toda-a (2,3)", is_poisson(tensor(s, 2) + tensor(s, 3)));
    c.sub("toda-a (1,3)", is_poisson(tensor(s, 1) + tensor(s, 3)));
  }
  for (int N = 3; N <= 9; ++N) {
    const SystemId s = SystemId::volterra_a(N);
    c.sub("volterra-a (2,4)", is_poisson(tensor(s, 2) + tensor(s, 4)));
  }
}

void deformation(Criterion& c) {
  for (int n = 2; n <= 4; ++n) {
    const SystemId s = SystemId::toda_a(n);
    const Field Z0 = special_field(s, Special::Z0), Z1 = special_field(s, Special::Z1);
    for (int l = 1; l <= 3; ++l) {
      c.sub("L_Z0 pi_l", lie_derivative_bivector(Z0, tensor(s, l)) == tensor(s, l) * Rational(l - 2));
      c.sub("Z0(H_l)", directional_action(Z0, hamiltonian(s, l)) == hamiltonian(s, l) * Rational(l));
      c.sub("Z1(H_l)", directional_action(Z1, hamiltonian(s, l)) == hamiltonian(s, l + 1) * Rational(l + 1));
    }
    c.sub("L_Z1 pi1", lie_derivative_bivector(Z1, tensor(s, 1)) == tensor(s, 2) * Rational(-2));
    c.sub("L_Z1 pi2", lie_derivative_bivector(Z1, tensor(s, 2)) == -tensor(s, 3));
  }
}

void signs(Criterion& c) {
  auto sgn = [](int e) { return Rational(e % 2 == 0 ? 1 : -1); };
  for (int N = 2; N <= 5; ++N) {
    const SystemId s = SystemId::toda_a(N);
    const auto psi = symmetry(SymmetryName::psi, s);
    for (int k = 1; k <= 3; ++k)
      c.sub("psi", pushforward_bivector(psi, tensor(s, k)) == tensor(s, k) * sgn(k));
  }
  for (int n = 1; n <= 2; ++n) {
    const SystemId odd = SystemId::toda_a(2 * n + 1);
    const auto phi = symmetry(SymmetryName::phi_toda, odd);
    for (int k = 1; k <= 3; ++k) c.sub("phi", pushforward_bivector(phi, tensor(odd, k)) == tensor(odd, k) * sgn(k + 1));
    const SystemId even = SystemId::toda_a(2 * n);
    const auto phic = symmetry(SymmetryName::phi_c, even);
    for (int k = 1; k <= 2; ++k) {
      const Tensor pushed = pushforward_bivector(phic, tensor(even, k));
      c.sub("phi_c", pushed == tensor(even, k) * sgn(k));
      if (pushed == tensor(even, k) * sgn(k + 1))
        c.notes.push_back("phi_c on toda-a:" + std::to_string(2 * n) + " pi" + std::to_string(k) +
                          ": observed sign (-1)^(k+1)");
    }
    const SystemId k5 = SystemId::volterra_a(2 * n + 1);
    const auto pv = symmetry(SymmetryName::phi_volterra, k5);
    for (int k : {2, 4})
      c.sub("phi_volterra", pushforward_bivector(pv, tensor(k5, k)) == tensor(k5, k) * sgn(k / 2));
    const GTensor p4 = to_gaussian(extend_to_toda(tensor(k5, 4), 2 * n + 1));
    c.sub("phi_tilde", pushforward_bivector(phi_tilde(n), p4) == p4);
  }
}

void reductions(Criterion& c) {
  for (int N = 2; N <= 7; ++N) {
    const SystemId t = SystemId::toda_a(N);
    const auto G = group_of(symmetry(SymmetryName::psi, t));
    const auto r = verify_reduction(tensor(t, 2), G, fixed_point_chart(G, variables(SystemId::volterra_a(N))),
                                    tensor(SystemId::volterra_a(N), 2));
    c.sub("psi pi2 -> quadratic Volterra", r.at("ok").get<bool>());
  }
  {
    const SystemId t5 = SystemId::toda_a(5);
    const auto H = group_of(symmetry(SymmetryName::phi_toda, t5));
    const auto chart = fixed_point_chart(H, variables(SystemId::toda_b(2)));
    const Tensor b3 = reduced_bracket(tensor(t5, 3, Normalization::printed), H, chart);
    const auto& v = b3.space();
    c.sub("phi pi3 on T5", b3 == tensor(SystemId::toda_b(2), 3, Normalization::printed));
    c.sub("phi pi3 on T5",
          b3(v->index("a2"), v->index("b2")) == parse_poly("-1/2*(a2*b2^2 + 2*a2^2)", v));
  }
  for (int n = 2; n <= 4; ++n) {
    const SystemId k = SystemId::volterra_a(2 * n + 1);
    const auto V = group_of(symmetry(SymmetryName::phi_volterra, k));
    const Tensor r = reduced_bracket(tensor(k, 4, Normalization::printed), V,
                                     fixed_point_chart(V, variables(SystemId::volterra_b(n))));
    const auto& v = r.space();
    const std::string an1 = "a" + std::to_string(n - 1), an = "a" + std::to_string(n);
    c.sub("phi_volterra pi4", r == tensor(SystemId::volterra_b(n), 4, Normalization::printed));
    c.sub("phi_volterra pi4", r(v->index(an1), v->index(an)) ==
                                  parse_poly("1/2*" + an1 + "*" + an + "*(" + an1 + " + 2*" + an + ")", v));
  }
  for (int n = 1; n <= 2; ++n) {
    const SystemId amb = SystemId::toda_a(2 * n + 1), mid = SystemId::volterra_a(2 * n + 1),
                   fin = SystemId::volterra_b(n);
    const Tensor pi = extend_to_toda(tensor(mid, 4), 2 * n + 1);
    const auto G = group_of(phi_tilde(n));
    const GTensor one = reduced_bracket(to_gaussian(pi), G, fixed_point_chart(G, variables(fin)));
    const auto Gp = group_of(symmetry(SymmetryName::psi, amb));
    const Tensor s1 = reduced_bracket(pi, Gp, fixed_point_chart(Gp, variables(mid)));
    const auto Gv = group_of(symmetry(SymmetryName::phi_volterra, mid));
    const Tensor two = reduced_bracket(s1, Gv, fixed_point_chart(Gv, variables(fin)));
    c.sub("one-stage = two-stage", one == to_gaussian(two));
  }
}

void ladders(Criterion& c) {
  for (int n = 2; n <= 4; ++n) {
    const SystemId s = SystemId::toda_a(n);
    auto X = [&](int k, int l) { return hamiltonian_vf(tensor(s, k), hamiltonian(s, l)); };
    c.sub("toda-a", X(3, 1) == X(2, 2) && X(2, 2) == X(1, 3));
  }
  for (int n = 1; n <= 3; ++n) {
    const SystemId s = SystemId::toda_b(n);
    c.sub("toda-b", hamiltonian_vf(tensor(s, 3), hamiltonian(s, 2)) == hamiltonian_vf(tensor(s, 1), hamiltonian(s, 4)));
  }
  for (int N = 3; N <= 7; ++N) {
    const SystemId s = SystemId::volterra_a(N);
    c.sub("volterra-a", hamiltonian_vf(tensor(s, 4), hamiltonian(s, 2)) ==
                            hamiltonian_vf(tensor(s, 2), hamiltonian(s, 4)));
    c.sub("KM", hamiltonian_vf(tensor(s, 2), hamiltonian(s, 2)) == special_field(s, Special::km));
  }
  for (int n = 2; n <= 4; ++n) {
    const SystemId s = SystemId::volterra_b(n);
    const Field got = hamiltonian_vf(tensor(s, 4), i4_hamiltonian(n));
    const Field want = special_field(s, Special::bn_volterra_flow);
    // The only candidate scalar is the ratio of leading coefficients of the
    // first nonzero component; the check is got == c * want.
    bool ok = false;
    for (std::size_t i = 0; i < want.dim(); ++i) {
      if (want[i].is_zero() || got[i].is_zero()) continue;
      const auto& [e, w] = *want[i].terms().begin();
      const auto it = got[i].terms().find(e);
      ok = it != got[i].terms().end() && got == want * Rational(it->second / w);
      break;
    }
    c.sub("I4", ok);
    int dg = kZeroDegree, dw = kZeroDegree;
    for (std::size_t i = 0; i < got.dim(); ++i) {
      dg = std::max(dg, got[i].degree());
      dw = std::max(dw, want[i].degree());
    }
    if (n == 2)
      c.notes.push_back("pi4 dI4 has degree " + std::to_string(dg) + ", the B_n-Volterra field degree " +
                        std::to_string(dw));
  }
}

void moser(Criterion& c) {
  const MoserSplit s = square_and_split(9);
  const JacobiBlock& b = s.odd_kept;
  const char* printed[5][5] = {{"x1^2", "x1*x2", "0", "0", "0"},
                               {"x1*x2", "x2^2 + x3^2", "x3*x4", "0", "0"},
                               {"0", "x3*x4", "0", "-x3*x4", "0"},
                               {"0", "0", "-x3*x4", "-x2^2 - x3^2", "-x1*x2"},
                               {"0", "0", "0", "-x1*x2", "-x1^2"}};
  bool same = b.matrix.size() == 5;
  for (std::size_t i = 0; same && i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) same = same && to_string(b.matrix(i, j)) == printed[i][j];
  c.sub("block", same);
  const JacobiIdentification id = identify_jacobi(b);
  const auto& v = id.space;
  c.sub("equations", id.induced[0] == parse_gpoly("A1*(B2 - B1)", v) && id.induced[1] == parse_gpoly("-A2*B2", v) &&
                         id.induced[2] == parse_gpoly("2*A1^2", v) &&
                         id.induced[3] == parse_gpoly("2*A2^2 - 2*A1^2", v));
}

void bogoyavlensky(Criterion& c) {
  for (RootType t : {RootType::A, RootType::B, RootType::C, RootType::D})
    for (int n = 1; n <= 4; ++n) {
      if ((t == RootType::B || t == RootType::C) && n < 2) continue;
      if (t == RootType::D && n < 3) continue;
      const RootData rd = root_data(t, n);
      bool rel = rd.marks.front() == 1;
      for (int r : mark_relation_residual(rd)) rel = rel && r == 0;
      c.sub("marks", rel);
      if (t == RootType::A)
        for (int k : rd.marks) c.sub("A marks", k == 1);
      c.sub("chain rule", chain_rule_defects(rd).empty());
    }
  const auto m = match_lotka_volterra(x_system_rhs(root_data(RootType::B, 2)),
                                      special_field(SystemId::volterra_b(1), Special::bn_volterra_flow));
  c.sub("B2 edge system", m && m->scale == std::vector<Rational>{1});
}

void numerics(Criterion& c) {
  const SystemId s = SystemId::toda_a(3);
  const Field f = special_field(s, Special::flow, 2);
  // a_i in (0, 1]: with a_i < 0 the Toda flow typically leaves every bounded
  // set before t = 10.
  const auto x0 = random_point(s, 20261016, 0.0, 1.0, -1.0, 1.0);
  const DriftReport r = monitors(integrate(f, x0, 10.0, 1e-3), s);
  c.sub("H drift", r.max_h_drift < kDriftTol);
  c.sub("charpoly drift", r.max_charpoly_drift < kDriftTol);
  const double d1 = monitors(integrate(f, x0, 10.0, 1e-2), s).max_h_drift;
  const double d2 = monitors(integrate(f, x0, 10.0, 5e-3), s).max_h_drift;
  const double ratio = d1 / d2;
  c.sub("order", ratio >= kOrderLo && ratio <= kOrderHi);
  const double comm = commutation_check({f, special_field(s, Special::flow, 3)}, x0, 0.5, 0.5, 1e-3);
  c.sub("commutation", comm < kCommuteTol);
  c.notes.push_back("H drift " + fmt(r.max_h_drift) + ", charpoly drift " + fmt(r.max_charpoly_drift) +
                    ", order ratio " + fmt(ratio) + ", commutation " + fmt(comm));
}

}  // namespace

int main(int argc, char** argv) {
  bool expect_known = false, verbose = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--expect-known-failures") == 0) {
      expect_known = true;
    } else if (std::strcmp(argv[i], "--verbose") == 0) {
      verbose = true;
    } else {
      std::cerr << "usage: hamlat_acceptance [--expect-known-failures] [--verbose]\n";
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> plan{
      {"exact Jacobi identity for every catalog tensor up to size 11", jacobi},
      {"compatibility of toda-a and volterra-a pairs", compatibility},
      {"deformation relations of Z0 and Z1", deformation},
      {"pushforward sign table", signs},
      {"reduction regressions", reductions},
      {"multi-Hamiltonian ladders", ladders},
      {"Moser N=9 block and induced B2 Toda system", moser},
      {"Bogoyavlensky marks, chain rule and B2 edge system", bogoyavlensky},
      {"RK4 drift, order and flow commutation on toda-a:3", numerics},
  };

  std::set<std::string> failed;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    Criterion c{static_cast<int>(i + 1), plan[i].first, {}, {}};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      plan[i].second(c);
    } catch (const std::exception& e) {
      c.sub("exception", false);
      c.notes.push_back(e.what());
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.id == 1) c.sub("runtime", c.seconds < kJacobiSeconds);
    if (c.id == 9) c.sub("runtime", c.seconds < kNumericsSeconds);

    std::cout << (c.ok() ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " ("
              << fmt(c.seconds) << " s)";
    std::string bad;
    for (const auto& [name, ok] : c.subs)
      if (!ok) {
        bad += (bad.empty() ? "" : ", ") + name;
        failed.insert(std::to_string(c.id) + "/" + name);
      }
    if (!bad.empty()) std::cout << " [failed: " << bad << "]";
    std::cout << '\n';
    if (verbose || !c.ok())
      for (const auto& n : c.notes) std::cout << "    " << n << '\n';
  }

  if (!expect_known) return failed.empty() ? 0 : 1;
  if (failed == kKnownFailures) {
    std::cout << "only the known failures occurred\n";
    return 0;
  }
  for (const auto& f : failed)
    if (!kKnownFailures.count(f)) std::cout << "unexpected failure: " << f << '\n';
  for (const auto& f : kKnownFailures)
    if (!failed.count(f)) std::cout << "known failure now passes: " << f << '\n';
  return 1;
}
