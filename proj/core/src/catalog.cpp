#include "hamlat/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <mutex>

#include "hamlat/reduction.hpp"

namespace hamlat {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

[[noreturn]] void unsupported(const SystemId& sys, const std::string& what) {
  throw std::invalid_argument(what + " is not available for " + sys.str());
}

void require_rank(const SystemId& sys) {
  const int min = sys.family == Family::volterra && sys.kind == Kind::A ? 2 : 1;
  if (sys.n < min) throw std::invalid_argument("rank too small in " + sys.str());
}

std::string var(char prefix, int i) { return std::string(1, prefix) + std::to_string(i); }

/// Coordinate accessors honouring the "out of range is zero" convention.
class Coords {
 public:
  Coords(VarSpacePtr space) : space_(std::move(space)) {}
  Poly a(int i) const { return get('a', i); }
  Poly b(int i) const { return get('b', i); }
  Poly zero() const { return Poly(space_); }
  Poly c(long num, long den = 1) const { return Poly(space_, ratio(num, den)); }
  bool has(char p, int i) const { return i >= 1 && space_->contains(var(p, i)); }
  std::size_t idx(char p, int i) const { return space_->index(var(p, i)); }

 private:
  Poly get(char p, int i) const {
    if (!has(p, i)) return Poly(space_);
    return Poly::var(space_, var(p, i));
  }
  VarSpacePtr space_;
};

/// Adds p to {x_i, y_j} when both coordinates exist.
void put(Tensor& t, const Coords& c, char x, int i, char y, int j, const Poly& p) {
  if (!c.has(x, i) || !c.has(y, j) || p.is_zero()) return;
  t.add(c.idx(x, i), c.idx(y, j), p);
}

Tensor toda_a_tensor(int n, int k, Normalization norm) {
  const SystemId sys = SystemId::toda_a(n);
  Coords c(variables(sys));
  Tensor t(variables(sys), k);
  for (int i = 1; i < n; ++i) {
    const Poly ai = c.a(i);
    switch (k) {
      case 1:
        put(t, c, 'a', i, 'b', i, ai);
        put(t, c, 'a', i, 'b', i + 1, -ai);
        break;
      case 2:
        put(t, c, 'a', i, 'b', i, ai * c.b(i));
        put(t, c, 'a', i, 'b', i + 1, -(ai * c.b(i + 1)));
        put(t, c, 'b', i, 'b', i + 1, -ai);
        put(t, c, 'a', i, 'a', i + 1, -(ai * c.a(i + 1)));
        break;
      case 3:
        put(t, c, 'a', i, 'a', i + 1, c.c(2) * ai * c.a(i + 1) * c.b(i + 1));
        put(t, c, 'a', i, 'b', i, -(ai * c.b(i) * c.b(i) + ai * ai));
        put(t, c, 'a', i, 'b', i + 1, ai * c.b(i + 1) * c.b(i + 1) + ai * ai);
        put(t, c, 'a', i, 'b', i + 2, ai * c.a(i + 1));
        put(t, c, 'a', i + 1, 'b', i, -(ai * c.a(i + 1)));
        put(t, c, 'b', i, 'b', i + 1, ai * (c.b(i) + c.b(i + 1)));
        break;
      default:
        unsupported(sys, "bracket pi_" + std::to_string(k));
    }
  }
  if (k < 1 || k > 3) unsupported(sys, "bracket pi_" + std::to_string(k));
  if (k == 3 && norm == Normalization::hierarchy) t *= Rational(-1);
  return t;
}

Tensor toda_b_tensor(int n, int k, Normalization norm) {
  const SystemId sys = SystemId::toda_b(n);
  Coords c(variables(sys));
  Tensor t(variables(sys), k);
  const Poly half = c.c(1, 2);
  if (k == 1) {
    for (int i = 1; i <= n; ++i) {
      put(t, c, 'a', i, 'b', i, half * c.a(i));
      put(t, c, 'a', i, 'b', i + 1, -(half * c.a(i)));
    }
  } else if (k == 3) {
    for (int i = 1; i <= n; ++i) {
      const Poly ai = c.a(i);
      const Poly bi = c.b(i);
      if (i < n) {
        put(t, c, 'a', i, 'b', i, -(half * (ai * bi * bi + ai * ai)));
      } else {
        put(t, c, 'a', i, 'b', i, -(half * (ai * bi * bi + c.c(2) * ai * ai)));
      }
      put(t, c, 'a', i, 'a', i + 1, ai * c.a(i + 1) * c.b(i + 1));
      put(t, c, 'b', i, 'b', i + 1, half * ai * (bi + c.b(i + 1)));
      put(t, c, 'a', i, 'b', i + 1, half * (ai * c.b(i + 1) * c.b(i + 1) + ai * ai));
      put(t, c, 'a', i, 'b', i + 2, half * ai * c.a(i + 1));
      put(t, c, 'a', i + 1, 'b', i, -(half * ai * c.a(i + 1)));
    }
    if (norm == Normalization::hierarchy) t *= Rational(-1);
  } else {
    unsupported(sys, "bracket pi_" + std::to_string(k));
  }
  return t;
}

Tensor toda_c_tensor(int n, int k, Normalization norm) {
  const SystemId sys = SystemId::toda_c(n);
  if (k != 1 && k != 3) unsupported(sys, "bracket pi_" + std::to_string(k));
  const SystemId amb = SystemId::toda_a(2 * n);
  auto G = FiniteGroupAction<Rational>::generate({symmetry(SymmetryName::phi_c, amb)});
  auto chart = fixed_point_chart(G, variables(sys));
  Tensor t = reduced_bracket(tensor(amb, k, norm), G, chart);
  t.set_degree(k);
  return t;
}

Tensor volterra_a_tensor(int N, int k, Normalization norm) {
  const SystemId sys = SystemId::volterra_a(N);
  Coords c(variables(sys));
  Tensor t(variables(sys), k);
  const int m = N - 1;
  for (int i = 1; i <= m; ++i) {
    const Poly ai = c.a(i);
    if (k == 2) {
      put(t, c, 'a', i, 'a', i + 1, -(ai * c.a(i + 1)));
    } else if (k == 4) {
      put(t, c, 'a', i, 'a', i + 1, ai * c.a(i + 1) * (ai + c.a(i + 1)));
      put(t, c, 'a', i, 'a', i + 2, ai * c.a(i + 1) * c.a(i + 2));
    } else {
      unsupported(sys, "bracket pi_" + std::to_string(k));
    }
  }
  if (k != 2 && k != 4) unsupported(sys, "bracket pi_" + std::to_string(k));
  if (k == 4 && norm == Normalization::hierarchy) t *= Rational(-1);
  return t;
}

Tensor volterra_b_tensor(int n, int k, Normalization norm) {
  const SystemId sys = SystemId::volterra_b(n);
  if (k != 4) unsupported(sys, "bracket pi_" + std::to_string(k));
  Coords c(variables(sys));
  Tensor t(variables(sys), k);
  const Poly half = c.c(1, 2);
  for (int i = 1; i < n; ++i) {
    const Poly ai = c.a(i);
    const Poly aj = c.a(i + 1);
    if (i + 1 < n) {
      put(t, c, 'a', i, 'a', i + 1, half * ai * aj * (ai + aj));
    } else {
      put(t, c, 'a', i, 'a', i + 1, half * ai * aj * (ai + c.c(2) * aj));
    }
    put(t, c, 'a', i, 'a', i + 2, half * ai * aj * c.a(i + 2));
  }
  if (norm == Normalization::hierarchy) t *= Rational(-1);
  return t;
}

}  // namespace

SystemId SystemId::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("system id needs the form family-type:n");
  const std::string head = lower(text.substr(0, colon));
  const std::string_view num = text.substr(colon + 1);
  int n = 0;
  auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), n);
  if (ec != std::errc() || ptr != num.data() + num.size())
    throw std::invalid_argument("bad rank in system id '" + std::string(text) + "'");
  static const std::map<std::string, std::pair<Family, Kind>> known = {
      {"toda-a", {Family::toda, Kind::A}},         {"toda-b", {Family::toda, Kind::B}},
      {"toda-c", {Family::toda, Kind::C}},         {"volterra-a", {Family::volterra, Kind::A}},
      {"volterra-b", {Family::volterra, Kind::B}}, {"volterra-c", {Family::volterra, Kind::B}},
  };
  auto it = known.find(head);
  if (it == known.end()) throw std::invalid_argument("unknown system '" + std::string(text) + "'");
  SystemId id{it->second.first, it->second.second, n};
  require_rank(id);
  return id;
}

std::string SystemId::str() const {
  std::string s = family == Family::toda ? "toda-" : "volterra-";
  s += kind == Kind::A ? 'a' : kind == Kind::B ? 'b' : 'c';
  return s + ":" + std::to_string(n);
}

std::size_t SystemId::lax_size() const {
  switch (kind) {
    case Kind::A:
      return static_cast<std::size_t>(n);
    case Kind::B:
      return static_cast<std::size_t>(2 * n + 1);
    case Kind::C:
      return static_cast<std::size_t>(2 * n);
  }
  return 0;
}

VarSpacePtr variables(const SystemId& sys) {
  require_rank(sys);
  if (sys.family == Family::volterra && sys.kind == Kind::C) unsupported(sys, "variables");
  static std::mutex mu;
  static std::map<std::string, VarSpacePtr> cache;
  const std::string key = sys.str();
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  std::vector<std::string> names;
  int na = 0;
  int nb = 0;
  if (sys.family == Family::toda) {
    na = sys.kind == Kind::A ? sys.n - 1 : sys.n;
    nb = sys.n;
  } else {
    na = sys.kind == Kind::A ? sys.n - 1 : sys.n;
  }
  for (int i = 1; i <= na; ++i) names.push_back(var('a', i));
  for (int i = 1; i <= nb; ++i) names.push_back(var('b', i));
  auto space = make_space(std::move(names));
  cache.emplace(key, space);
  return space;
}

LaxMatrix lax(const SystemId& sys) {
  const auto space = variables(sys);
  Coords c(space);
  const std::size_t N = sys.lax_size();
  LaxMatrix L(space, N);
  const Poly one = c.c(1);
  for (std::size_t r = 1; r < N; ++r) L(r, r - 1) = one;
  const int n = sys.n;
  if (sys.kind == Kind::A) {
    for (int i = 1; i < static_cast<int>(N); ++i) L(i - 1, i) = c.a(i);
    if (sys.family == Family::toda)
      for (int i = 1; i <= n; ++i) L(i - 1, i - 1) = c.b(i);
    return L;
  }
  if (sys.kind == Kind::B) {
    // rows 0..n-1 carry (b_i, a_i); row n is the centre; the rest mirrors with signs
    for (int i = 1; i <= n; ++i) {
      L(i - 1, i) = c.a(i);
      L(N - 1 - i, N - i) = -c.a(i);
    }
    if (sys.family == Family::toda) {
      for (int i = 1; i <= n; ++i) {
        L(i - 1, i - 1) = c.b(i);
        L(N - i, N - i) = -c.b(i);
      }
      for (std::size_t r = static_cast<std::size_t>(n) + 1; r < N; ++r) L(r, r - 1) = -one;
    }
    return L;
  }
  // toda-c: the fixed points of phi_c on toda-a:2n
  for (int i = 1; i <= n; ++i) {
    L(i - 1, i - 1) = c.b(i);
    L(N - i, N - i) = -c.b(i);
  }
  for (int i = 1; i < n; ++i) {
    L(i - 1, i) = c.a(i);
    L(N - 1 - i, N - i) = c.a(i);
  }
  L(n - 1, n) = c.a(n);
  return L;
}

Poly hamiltonian(const SystemId& sys, int k) {
  if (k < 1) throw std::invalid_argument("Hamiltonian index must be positive");
  const LaxMatrix L = lax(sys);
  return matrix_power(L, k).trace() * Rational(1, k);
}

Tensor tensor(const SystemId& sys, int k, Normalization norm) {
  require_rank(sys);
  if (sys.family == Family::toda) {
    switch (sys.kind) {
      case Kind::A:
        return toda_a_tensor(sys.n, k, norm);
      case Kind::B:
        return toda_b_tensor(sys.n, k, norm);
      case Kind::C:
        return toda_c_tensor(sys.n, k, norm);
    }
  }
  if (sys.kind == Kind::A) return volterra_a_tensor(sys.n, k, norm);
  if (sys.kind == Kind::B) return volterra_b_tensor(sys.n, k, norm);
  unsupported(sys, "bracket pi_" + std::to_string(k));
}

Field special_field(const SystemId& sys, Special which, int k, Normalization norm) {
  const auto space = variables(sys);
  Coords c(space);
  Field Z(space);
  const int n = sys.n;
  const bool toda_a = sys.family == Family::toda && sys.kind == Kind::A;
  switch (which) {
    case Special::Z0: {
      if (!toda_a) unsupported(sys, "Z0");
      const long wa = norm == Normalization::printed ? 1 : 2;
      for (int i = 1; i < n; ++i) Z[c.idx('a', i)] = c.c(wa) * c.a(i);
      for (int i = 1; i <= n; ++i) Z[c.idx('b', i)] = c.b(i);
      return Z;
    }
    case Special::Z1: {
      if (!toda_a) unsupported(sys, "Z1");
      const long shift = norm == Normalization::printed ? 1 : 3;
      for (int i = 1; i < n; ++i)
        Z[c.idx('a', i)] = c.a(i) * (c.c(1 - 2 * i) * c.b(i) + c.c(shift + 2 * i) * c.b(i + 1));
      for (int i = 1; i <= n; ++i)
        Z[c.idx('b', i)] = c.c(2 - 2 * i) * c.a(i - 1) + c.c(2 + 2 * i) * c.a(i) + c.b(i) * c.b(i);
      return Z;
    }
    case Special::flow: {
      const int low = sys.family == Family::toda ? 1 : sys.kind == Kind::A ? 2 : 4;
      return hamiltonian_vf(tensor(sys, low, norm), hamiltonian(sys, k));
    }
    case Special::bn_volterra_flow: {
      if (sys.family != Family::volterra || sys.kind != Kind::B) unsupported(sys, "the B_n-Volterra flow");
      for (int i = 1; i <= n; ++i) {
        const Poly next = i == n ? -c.a(n) : c.a(i + 1);
        Z[c.idx('a', i)] = c.a(i) * (c.a(i - 1) - next);
      }
      return Z;
    }
    case Special::km: {
      if (sys.family != Family::volterra || sys.kind != Kind::A) unsupported(sys, "the KM lattice");
      for (int i = 1; i < n; ++i) Z[c.idx('a', i)] = c.a(i) * (c.a(i - 1) - c.a(i + 1));
      return Z;
    }
    case Special::toda_system: {
      if (!toda_a) unsupported(sys, "the Toda equations");
      for (int i = 1; i < n; ++i) Z[c.idx('a', i)] = c.a(i) * (c.b(i) - c.b(i + 1));
      for (int i = 1; i <= n; ++i) Z[c.idx('b', i)] = c.a(i - 1) - c.a(i);
      return Z;
    }
  }
  unsupported(sys, "field");
}

LinearMap<Rational> symmetry(SymmetryName name, const SystemId& sys) {
  const auto space = variables(sys);
  Coords c(space);
  const int N = static_cast<int>(sys.lax_size());
  const std::size_t m = space->size();
  std::vector<std::size_t> src(m);
  std::vector<Rational> sc(m, Rational(1));
  const bool toda_a = sys.family == Family::toda && sys.kind == Kind::A;
  switch (name) {
    case SymmetryName::psi:
      if (!toda_a) unsupported(sys, "psi");
      for (int i = 1; i < N; ++i) src[c.idx('a', i)] = c.idx('a', i);
      for (int i = 1; i <= N; ++i) {
        src[c.idx('b', i)] = c.idx('b', i);
        sc[c.idx('b', i)] = -1;
      }
      break;
    case SymmetryName::phi_toda:
    case SymmetryName::phi_c:
      if (!toda_a) unsupported(sys, to_string(name));
      if (name == SymmetryName::phi_toda && (N % 2 == 0 || N < 3))
        throw std::invalid_argument("phi_toda needs an odd Lax size 2n+1 >= 3, got " + sys.str());
      if (name == SymmetryName::phi_c && (N % 2 != 0 || N < 2))
        throw std::invalid_argument("phi_c needs an even Lax size 2n >= 2, got " + sys.str());
      for (int i = 1; i < N; ++i) src[c.idx('a', i)] = c.idx('a', N - i);
      for (int i = 1; i <= N; ++i) {
        src[c.idx('b', i)] = c.idx('b', N + 1 - i);
        sc[c.idx('b', i)] = -1;
      }
      break;
    case SymmetryName::phi_volterra:
      if (sys.family != Family::volterra || sys.kind != Kind::A) unsupported(sys, "phi_volterra");
      if (N % 2 == 0 || N < 3) throw std::invalid_argument("phi_volterra needs an odd Lax size 2n+1 >= 3");
      for (int i = 1; i < N; ++i) {
        src[c.idx('a', i)] = c.idx('a', N - i);
        sc[c.idx('a', i)] = -1;
      }
      break;
  }
  return LinearMap<Rational>(space, std::move(src), std::move(sc), 2, to_string(name));
}

SymmetryName parse_symmetry(std::string_view text) {
  const std::string s = lower(text);
  if (s == "psi") return SymmetryName::psi;
  if (s == "phi" || s == "phi_toda" || s == "phi-toda") return SymmetryName::phi_toda;
  if (s == "phi_c" || s == "phi-c") return SymmetryName::phi_c;
  if (s == "phi_volterra" || s == "phi-volterra") return SymmetryName::phi_volterra;
  throw std::invalid_argument("unknown symmetry '" + std::string(text) + "'");
}

std::string to_string(SymmetryName name) {
  switch (name) {
    case SymmetryName::psi:
      return "psi";
    case SymmetryName::phi_toda:
      return "phi_toda";
    case SymmetryName::phi_c:
      return "phi_c";
    case SymmetryName::phi_volterra:
      return "phi_volterra";
  }
  return "?";
}

LinearMap<Gaussian> phi_tilde(int n) {
  if (n < 1) throw std::invalid_argument("phi_tilde needs n >= 1");
  const SystemId sys = SystemId::toda_a(2 * n + 1);
  const auto space = variables(sys);
  Coords c(space);
  const int N = 2 * n + 1;
  std::vector<std::size_t> src(space->size());
  std::vector<Gaussian> sc(space->size());
  for (int i = 1; i < N; ++i) {
    src[c.idx('a', i)] = c.idx('a', N - i);
    sc[c.idx('a', i)] = Gaussian(-1L);
  }
  for (int i = 1; i <= N; ++i) {
    src[c.idx('b', i)] = c.idx('b', N + 1 - i);
    sc[c.idx('b', i)] = Gaussian::i();
  }
  return LinearMap<Gaussian>(space, std::move(src), std::move(sc), 4, "phi_tilde");
}

Poly i4_hamiltonian(int n) {
  const SystemId sys = SystemId::volterra_b(n);
  Coords c(variables(sys));
  Poly sum = c.zero();
  for (int i = 1; i < n; ++i) sum += c.c(2) * c.a(i) * c.a(i) + c.a(i) * c.a(i + 1);
  return sum * Rational(1, 4);
}

Tensor extend_to_toda(const Tensor& volterra, int N) {
  const auto space = variables(SystemId::toda_a(N));
  if (volterra.dim() != static_cast<std::size_t>(N - 1))
    throw std::invalid_argument("Volterra tensor does not match toda-a:" + std::to_string(N));
  Tensor t(space, volterra.degree());
  for (std::size_t i = 0; i < volterra.dim(); ++i)
    for (std::size_t j = i + 1; j < volterra.dim(); ++j) t.set(i, j, rebase(volterra(i, j), space));
  return t;
}

}  // namespace hamlat
