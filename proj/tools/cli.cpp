#include "cli.hpp"

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hamlat/bogo.hpp"
#include "hamlat/catalog.hpp"
#include "hamlat/flows.hpp"
#include "hamlat/moser.hpp"
#include "hamlat/reduction.hpp"

namespace hamlat::cli {

namespace {

using json = nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 20261016;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CheckFailed : public std::runtime_error {
 public:
  CheckFailed(const std::string& what, json detail) : std::runtime_error(what), detail_(std::move(detail)) {}
  const json& detail() const { return detail_; }

 private:
  json detail_;
};

struct Config {
  std::string check;
  std::string system;
  std::vector<int> brackets;
  std::string map;
  int max_rank = 4;
  std::string norm = "hierarchy";
  std::string format = "json";
  std::string output;
  std::string expected;
  std::uint64_t seed = kDefaultSeed;

  std::string field = "hamiltonian";
  int k = 2;
  double t_end = 10.0;
  double h = 1e-3;
  std::string x0;
  std::vector<double> interval;
  std::size_t every = 1;

  std::string root_type = "A";
  int rank = 2;
  int N = 9;
};

Normalization parse_norm(const std::string& s) {
  if (s == "hierarchy") return Normalization::hierarchy;
  if (s == "printed") return Normalization::printed;
  throw UsageError("unknown normalization '" + s + "'");
}

json result(std::string name, bool ok, json detail = json::object()) {
  json r = {{"name", std::move(name)}, {"ok", ok}};
  for (auto& [key, value] : detail.items()) r[key] = value;
  return r;
}

template <class K>
json field_diff(const VectorField<K>& expected, const VectorField<K>& got) {
  json d = json::array();
  for (std::size_t i = 0; i < got.dim(); ++i)
    if (expected[i] != got[i])
      d.push_back({{"var", got.space()->name(i)}, {"expected", to_string(expected[i])}, {"got", to_string(got[i])}});
  return d;
}

json poly_diff(const Poly& expected, const Poly& got) {
  if (expected == got) return json::array();
  return json::array({{{"expected", to_string(expected)}, {"got", to_string(got)}}});
}

// ---------------------------------------------------------------- checks

json jacobi_check(const SystemId& sys, int k, Normalization norm) {
  const auto J = jacobiator(tensor(sys, k, norm));
  return result("jacobi " + sys.str() + " pi" + std::to_string(k), J.is_zero(),
                J.is_zero() ? json::object() : json{{"jacobiator", to_json(J)}});
}

json compatible_check(const SystemId& sys, int i, int j, Normalization norm) {
  const auto J = jacobiator(tensor(sys, i, norm) + tensor(sys, j, norm));
  return result("compatible " + sys.str() + " pi" + std::to_string(i) + "+pi" + std::to_string(j), J.is_zero(),
                J.is_zero() ? json::object() : json{{"jacobiator", to_json(J)}});
}

std::vector<json> deformation_checks(const SystemId& sys, Normalization norm) {
  if (!(sys.family == Family::toda && sys.kind == Kind::A))
    throw UsageError("deformation relations are available for toda-a systems only");
  std::vector<json> out;
  const Field Z0 = special_field(sys, Special::Z0, 0, norm);
  const Field Z1 = special_field(sys, Special::Z1, 0, norm);
  const std::string s = sys.str();
  for (int l = 1; l <= 3; ++l) {
    const Tensor p = tensor(sys, l, norm);
    const Tensor want = p * Rational(l - 2);
    const Tensor got = lie_derivative_bivector(Z0, p);
    out.push_back(result("L_Z0 pi" + std::to_string(l) + " = " + std::to_string(l - 2) + " pi" + std::to_string(l) +
                             " on " + s,
                         got == want, {{"diff", tensor_diff(want, got)}}));
  }
  {
    const Tensor want = tensor(sys, 2, norm) * Rational(-2);
    const Tensor got = lie_derivative_bivector(Z1, tensor(sys, 1, norm));
    out.push_back(result("L_Z1 pi1 = -2 pi2 on " + s, got == want, {{"diff", tensor_diff(want, got)}}));
  }
  {
    const Tensor want = tensor(sys, 3, norm) * Rational(-1);
    const Tensor got = lie_derivative_bivector(Z1, tensor(sys, 2, norm));
    out.push_back(result("L_Z1 pi2 = -pi3 on " + s, got == want, {{"diff", tensor_diff(want, got)}}));
  }
  for (int l = 1; l <= 3; ++l) {
    const Poly H = hamiltonian(sys, l);
    const Poly w0 = H * Rational(l);
    const Poly g0 = directional_action(Z0, H);
    out.push_back(result("Z0(H" + std::to_string(l) + ") = " + std::to_string(l) + " H" + std::to_string(l) + " on " + s,
                         g0 == w0, {{"diff", poly_diff(w0, g0)}}));
    const Poly w1 = hamiltonian(sys, l + 1) * Rational(l + 1);
    const Poly g1 = directional_action(Z1, H);
    out.push_back(result("Z1(H" + std::to_string(l) + ") = " + std::to_string(l + 1) + " H" + std::to_string(l + 1) +
                             " on " + s,
                         g1 == w1, {{"diff", poly_diff(w1, g1)}}));
  }
  return out;
}

/// Scalar c with pushed = c * pi among +-1 (and +-i over Q[i]).
template <class K>
std::optional<K> observed_factor(const PoissonTensor<K>& pushed, const PoissonTensor<K>& pi) {
  std::vector<K> candidates{K(1L), K(-1L)};
  if constexpr (FieldTraits<K>::gaussian) {
    candidates.push_back(Gaussian::i());
    candidates.push_back(-Gaussian::i());
  }
  for (const auto& c : candidates)
    if (pushed == pi * c) return c;
  return std::nullopt;
}

struct MapOnTensor {
  std::string label;
  std::optional<Gaussian> factor;  // observed
  bool poisson = false;
  json diff;
};

/// Tensor of degree k on `sys` that a map acts on. Degree 4 on toda-a means
/// the Volterra quartic bracket extended by Casimirs b_i.
Tensor acted_tensor(const SystemId& sys, int k, Normalization norm) {
  if (k == 4 && sys.family == Family::toda && sys.kind == Kind::A)
    return extend_to_toda(tensor(SystemId::volterra_a(sys.n), 4, norm), sys.n);
  return tensor(sys, k, norm);
}

MapOnTensor apply_map(const std::string& map, const SystemId& sys, int k, Normalization norm) {
  const Tensor pi = acted_tensor(sys, k, norm);
  MapOnTensor m;
  m.label = map + " on " + sys.str() + " pi" + std::to_string(k);
  if (map == "phi_tilde") {
    if (!(sys.family == Family::toda && sys.kind == Kind::A) || sys.n % 2 == 0 || sys.n < 3)
      throw UsageError("phi_tilde acts on toda-a:N with N odd >= 3");
    const GTensor g = to_gaussian(pi);
    const GTensor pushed = pushforward_bivector(phi_tilde((sys.n - 1) / 2), g);
    m.factor = observed_factor(pushed, g);
    m.poisson = pushed == g;
    if (!m.factor) m.diff = tensor_diff(g, pushed);
    return m;
  }
  const Tensor pushed = pushforward_bivector(symmetry(parse_symmetry(map), sys), pi);
  if (auto f = observed_factor(pushed, pi)) m.factor = Gaussian(*f);
  m.poisson = pushed == pi;
  if (!m.factor) m.diff = tensor_diff(pi, pushed);
  return m;
}

json involution_check(const std::string& map, const SystemId& sys, int k, Normalization norm) {
  const MapOnTensor m = apply_map(map, sys, k, norm);
  json d = {{"observed_factor", m.factor ? json(to_string(*m.factor)) : json(nullptr)}};
  if (!m.factor) d["diff"] = m.diff;
  return result("poisson map " + m.label, m.poisson, d);
}

/// The sign law each map is expected to satisfy.
Gaussian expected_factor(const std::string& map, int k) {
  if (map == "psi" || map == "phi_c") return Gaussian(k % 2 == 0 ? 1L : -1L);
  if (map == "phi_toda") return Gaussian(k % 2 == 1 ? 1L : -1L);
  if (map == "phi_volterra") return Gaussian((k / 2) % 2 == 0 ? 1L : -1L);
  if (map == "phi_tilde") {
    switch (k) {
      case 1:
        return -Gaussian::i();
      case 2:
        return Gaussian(-1L);
      case 3:
        return Gaussian::i();
      default:
        return Gaussian(1L);
    }
  }
  throw UsageError("unknown map '" + map + "'");
}

json sign_law_check(const std::string& map, const SystemId& sys, int k, Normalization norm) {
  const MapOnTensor m = apply_map(map, sys, k, norm);
  const Gaussian want = expected_factor(map, k);
  const bool ok = m.factor && *m.factor == want;
  json d = {{"expected_factor", to_string(want)},
            {"observed_factor", m.factor ? json(to_string(*m.factor)) : json(nullptr)}};
  if (!m.factor) d["diff"] = m.diff;
  return result("sign law " + m.label, ok, d);
}

json ladder_pair(const std::string& name, const Field& lhs, const Field& rhs) {
  return result(name, lhs == rhs, {{"diff", field_diff(lhs, rhs)}});
}

std::vector<json> ladder_checks(const SystemId& sys, Normalization norm) {
  std::vector<json> out;
  const std::string s = " on " + sys.str();
  auto X = [&](int k, int l) { return hamiltonian_vf(tensor(sys, k, norm), hamiltonian(sys, l)); };
  if (sys.family == Family::toda && sys.kind == Kind::A) {
    out.push_back(ladder_pair("pi2 dH1 = pi1 dH2" + s, X(2, 1), X(1, 2)));
    out.push_back(ladder_pair("pi3 dH1 = pi2 dH2" + s, X(3, 1), X(2, 2)));
    out.push_back(ladder_pair("pi2 dH2 = pi1 dH3" + s, X(2, 2), X(1, 3)));
    out.push_back(ladder_pair("pi1 dH2 = Toda equations" + s, X(1, 2), special_field(sys, Special::toda_system)));
  } else if (sys.family == Family::toda) {
    out.push_back(ladder_pair("pi3 dH2 = pi1 dH4" + s, X(3, 2), X(1, 4)));
  } else if (sys.kind == Kind::A) {
    out.push_back(ladder_pair("pi4 dH2 = pi2 dH4" + s, X(4, 2), X(2, 4)));
    out.push_back(ladder_pair("pi2 dH2 = KM" + s, X(2, 2), special_field(sys, Special::km)));
  } else {
    const Field got = hamiltonian_vf(tensor(sys, 4, norm), i4_hamiltonian(sys.n));
    const Field bnv = special_field(sys, Special::bn_volterra_flow);
    // a single scalar c with got = c * bnv, read off the first nonzero component
    std::optional<Rational> scalar;
    for (std::size_t i = 0; i < bnv.dim() && !scalar; ++i) {
      if (bnv[i].is_zero() || got[i].is_zero()) continue;
      const auto& [e, c] = *bnv[i].terms().begin();
      auto it = got[i].terms().find(e);
      if (it != got[i].terms().end()) scalar = it->second / c;
    }
    const bool ok = scalar && got == bnv * *scalar;
    out.push_back(result("pi4 dI4 = c * B_n-Volterra" + s, ok,
                         {{"scalar", scalar ? json(to_string(*scalar)) : json(nullptr)},
                          {"pi4_dI4", to_json(got)},
                          {"bn_volterra", to_json(bnv)}}));
    out.push_back(ladder_pair("B_n-Volterra = KM restricted to the fixed set" + s, bnv, [&] {
      const SystemId amb = SystemId::volterra_a(2 * sys.n + 1);
      auto G = FiniteGroupAction<Rational>::generate({symmetry(SymmetryName::phi_volterra, amb)});
      auto chart = fixed_point_chart(G, variables(sys));
      const Field km = special_field(amb, Special::km);
      Field r(variables(sys));
      for (std::size_t t = 0; t < r.dim(); ++t) r[t] = chart.restrict_poly(km[chart.proj[t]]);
      return r;
    }()));
  }
  return out;
}

struct ReductionSpec {
  SystemId target;
  std::optional<Tensor> expected;
};

ReductionSpec reduction_target(const std::string& map, const SystemId& sys, int k, Normalization norm) {
  const bool toda_a = sys.family == Family::toda && sys.kind == Kind::A;
  if (map == "psi" && toda_a) {
    const SystemId t = SystemId::volterra_a(sys.n);
    return {t, k == 2 || k == 4 ? std::optional<Tensor>(tensor(t, k, norm)) : std::nullopt};
  }
  if (map == "phi_toda" && toda_a) {
    const SystemId t = SystemId::toda_b((sys.n - 1) / 2);
    return {t, k == 1 || k == 3 ? std::optional<Tensor>(tensor(t, k, norm)) : std::nullopt};
  }
  if (map == "phi_c" && toda_a) {
    const SystemId t = SystemId::toda_c(sys.n / 2);
    return {t, k == 1 || k == 3 ? std::optional<Tensor>(tensor(t, k, norm)) : std::nullopt};
  }
  if ((map == "phi_volterra" && sys.family == Family::volterra && sys.kind == Kind::A) ||
      (map == "phi_tilde" && toda_a)) {
    const SystemId t = SystemId::volterra_b((sys.n - 1) / 2);
    return {t, k == 4 ? std::optional<Tensor>(tensor(t, 4, norm)) : std::nullopt};
  }
  throw UsageError("map '" + map + "' does not act on " + sys.str());
}

/// Reduced tensor as JSON, or throws NotPoissonAction.
json reduce_json(const std::string& map, const SystemId& sys, int k, Normalization norm) {
  const ReductionSpec spec = reduction_target(map, sys, k, norm);
  const Tensor pi = acted_tensor(sys, k, norm);
  if (map == "phi_tilde") {
    auto G = FiniteGroupAction<Gaussian>::generate({phi_tilde((sys.n - 1) / 2)});
    auto chart = fixed_point_chart(G, variables(spec.target));
    return to_json(reduced_bracket(to_gaussian(pi), G, chart));
  }
  auto G = FiniteGroupAction<Rational>::generate({symmetry(parse_symmetry(map), sys)});
  auto chart = fixed_point_chart(G, variables(spec.target));
  return to_json(reduced_bracket(pi, G, chart));
}

json reduction_check(const std::string& map, const SystemId& sys, int k, Normalization norm,
                     const std::optional<Tensor>& override_expected) {
  const ReductionSpec spec = reduction_target(map, sys, k, norm);
  const std::optional<Tensor> expected = override_expected ? override_expected : spec.expected;
  if (!expected) throw UsageError("no reference bracket for " + map + " on " + sys.str() + " pi" + std::to_string(k));
  const std::string name = "reduce " + sys.str() + " pi" + std::to_string(k) + " by <" + map + "> to " + spec.target.str();
  const Tensor pi = acted_tensor(sys, k, norm);
  json r;
  if (map == "phi_tilde") {
    auto G = FiniteGroupAction<Gaussian>::generate({phi_tilde((sys.n - 1) / 2)});
    auto chart = fixed_point_chart(G, variables(spec.target));
    r = verify_reduction(to_gaussian(pi), G, chart, to_gaussian(*expected));
  } else {
    auto G = FiniteGroupAction<Rational>::generate({symmetry(parse_symmetry(map), sys)});
    auto chart = fixed_point_chart(G, variables(spec.target));
    r = verify_reduction(pi, G, chart, *expected);
  }
  const bool ok = r.at("ok").get<bool>();
  r.erase("ok");
  return result(name, ok, r);
}

/// One-stage reduction by <phi_tilde> against <psi> followed by <phi_volterra>.
json two_stage_check(int n, Normalization norm) {
  const SystemId amb = SystemId::toda_a(2 * n + 1);
  const SystemId mid = SystemId::volterra_a(2 * n + 1);
  const SystemId fin = SystemId::volterra_b(n);
  const Tensor pi = acted_tensor(amb, 4, norm);
  auto G1 = FiniteGroupAction<Gaussian>::generate({phi_tilde(n)});
  const GTensor one = reduced_bracket(to_gaussian(pi), G1, fixed_point_chart(G1, variables(fin)));
  auto Gpsi = FiniteGroupAction<Rational>::generate({symmetry(SymmetryName::psi, amb)});
  const Tensor stage1 = reduced_bracket(pi, Gpsi, fixed_point_chart(Gpsi, variables(mid)));
  auto Gv = FiniteGroupAction<Rational>::generate({symmetry(SymmetryName::phi_volterra, mid)});
  const Tensor two = reduced_bracket(stage1, Gv, fixed_point_chart(Gv, variables(fin)));
  const GTensor two_g = to_gaussian(two);
  return result("one-stage <phi_tilde> = two-stage <psi>,<phi_volterra> on " + amb.str(), one == two_g,
                {{"diff", tensor_diff(two_g, one)}});
}

std::vector<int> catalog_brackets(const SystemId& sys) {
  if (sys.family == Family::toda) return sys.kind == Kind::A ? std::vector<int>{1, 2, 3} : std::vector<int>{1, 3};
  return sys.kind == Kind::A ? std::vector<int>{2, 4} : std::vector<int>{4};
}

std::vector<json> verify_all(int R, Normalization norm) {
  if (R < 1) throw UsageError("--max-rank must be at least 1");
  std::vector<json> out;
  auto add = [&](std::vector<json> v) { out.insert(out.end(), v.begin(), v.end()); };
  const int half = std::max(1, R / 2);
  std::vector<SystemId> systems;
  for (int n = 2; n <= R + 1; ++n) systems.push_back(SystemId::toda_a(n));
  for (int n = 1; n <= R; ++n) systems.push_back(SystemId::toda_b(n));
  for (int n = 1; n <= R; ++n) systems.push_back(SystemId::toda_c(n));
  for (int N = 3; N <= 2 * R + 1; ++N) systems.push_back(SystemId::volterra_a(N));
  for (int n = 1; n <= R; ++n) systems.push_back(SystemId::volterra_b(n));
  for (const auto& s : systems)
    for (int k : catalog_brackets(s)) out.push_back(jacobi_check(s, k, norm));

  for (int n = 2; n <= R + 1; ++n) {
    const SystemId s = SystemId::toda_a(n);
    out.push_back(compatible_check(s, 1, 2, norm));
    out.push_back(compatible_check(s, 2, 3, norm));
    out.push_back(compatible_check(s, 1, 3, norm));
    add(deformation_checks(s, norm));
    add(ladder_checks(s, norm));
    for (int k = 1; k <= 3; ++k) out.push_back(sign_law_check("psi", s, k, norm));
    out.push_back(reduction_check("psi", s, 2, norm, std::nullopt));
  }
  for (int N = 3; N <= 2 * R + 1; ++N) {
    const SystemId s = SystemId::volterra_a(N);
    out.push_back(compatible_check(s, 2, 4, norm));
    add(ladder_checks(s, norm));
  }
  for (int n = 1; n <= std::min(R, 3); ++n) add(ladder_checks(SystemId::toda_b(n), norm));
  for (int n = 1; n <= R; ++n) add(ladder_checks(SystemId::volterra_b(n), norm));
  for (int m = 1; m <= half; ++m) {
    const SystemId odd = SystemId::toda_a(2 * m + 1);
    const SystemId even = SystemId::toda_a(2 * m);
    const SystemId vol = SystemId::volterra_a(2 * m + 1);
    for (int k = 1; k <= 3; ++k) out.push_back(sign_law_check("phi_toda", odd, k, norm));
    for (int k = 1; k <= 2; ++k) out.push_back(sign_law_check("phi_c", even, k, norm));
    for (int k : {2, 4}) out.push_back(sign_law_check("phi_volterra", vol, k, norm));
    for (int k = 1; k <= 4; ++k) out.push_back(sign_law_check("phi_tilde", odd, k, norm));
    for (int k : {1, 3}) out.push_back(reduction_check("phi_toda", odd, k, norm, std::nullopt));
    out.push_back(reduction_check("phi_volterra", vol, 4, norm, std::nullopt));
    out.push_back(reduction_check("phi_tilde", odd, 4, norm, std::nullopt));
    out.push_back(two_stage_check(m, norm));
  }
  return out;
}

// ---------------------------------------------------------------- output

std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("HAMLAT_OUTPUT_DIR"); dir && *dir) p = std::filesystem::path(dir) / p;
  }
  return p;
}

void emit(const Config& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  const auto path = resolve_output(cfg.output);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path.string());
  f << text;
}

int emit_results(const Config& cfg, const std::string& check, const std::vector<json>& results, std::ostream& out) {
  json failed = json::array();
  for (const auto& r : results)
    if (!r.at("ok").get<bool>()) failed.push_back(r.at("name"));
  const bool ok = failed.empty();
  std::string text;
  if (cfg.format == "text") {
    std::ostringstream os;
    for (const auto& r : results)
      os << (r.at("ok").get<bool>() ? "PASS " : "FAIL ") << r.at("name").get<std::string>() << '\n';
    os << (ok ? "all checks passed" : std::to_string(failed.size()) + " check(s) failed") << '\n';
    text = os.str();
  } else {
    json doc = {{"schema", "hamlat/verify/1"}, {"check", check}, {"ok", ok}, {"failed", failed}, {"results", results}};
    text = doc.dump(2) + "\n";
  }
  emit(cfg, text, out);
  return ok ? kOk : kCheckFailed;
}

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read " + path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------- commands

int cmd_verify(const Config& cfg, std::ostream& out) {
  const Normalization norm = parse_norm(cfg.norm);
  if (cfg.check == "all") return emit_results(cfg, cfg.check, verify_all(cfg.max_rank, norm), out);
  if (cfg.system.empty()) throw UsageError("--system is required");
  const SystemId sys = SystemId::parse(cfg.system);
  std::vector<json> results;
  if (cfg.check == "jacobi") {
    const auto ks = cfg.brackets.empty() ? catalog_brackets(sys) : cfg.brackets;
    for (int k : ks) results.push_back(jacobi_check(sys, k, norm));
  } else if (cfg.check == "compatible") {
    if (cfg.brackets.size() != 2) throw UsageError("compatible needs exactly two --bracket values");
    results.push_back(compatible_check(sys, cfg.brackets[0], cfg.brackets[1], norm));
  } else if (cfg.check == "deformation") {
    results = deformation_checks(sys, norm);
  } else if (cfg.check == "involution") {
    if (cfg.map.empty()) throw UsageError("--map is required");
    const auto ks = cfg.brackets.empty() ? catalog_brackets(sys) : cfg.brackets;
    for (int k : ks) results.push_back(involution_check(cfg.map, sys, k, norm));
  } else if (cfg.check == "ladder") {
    results = ladder_checks(sys, norm);
  } else if (cfg.check == "reduction") {
    if (cfg.map.empty()) throw UsageError("--map is required");
    if (cfg.brackets.size() != 1) throw UsageError("reduction needs exactly one --bracket");
    std::optional<Tensor> expected;
    if (!cfg.expected.empty()) {
      try {
        expected = tensor_from_json(read_json_file(cfg.expected));
      } catch (const std::invalid_argument& e) {
        throw UsageError(cfg.expected + ": " + e.what());
      }
    }
    results.push_back(reduction_check(cfg.map, sys, cfg.brackets[0], norm, expected));
  }
  return emit_results(cfg, cfg.check, results, out);
}

int cmd_reduce(const Config& cfg, std::ostream& out) {
  if (cfg.system.empty() || cfg.map.empty() || cfg.brackets.size() != 1)
    throw UsageError("reduce needs --system, --map and one --bracket");
  const SystemId sys = SystemId::parse(cfg.system);
  const int k = cfg.brackets[0];
  const Normalization norm = parse_norm(cfg.norm);
  json doc = {{"schema", "hamlat/reduce/1"},
              {"system", sys.str()},
              {"map", cfg.map},
              {"bracket", k},
              {"target", reduction_target(cfg.map, sys, k, norm).target.str()}};
  try {
    doc["tensor"] = reduce_json(cfg.map, sys, k, norm);
  } catch (const NotPoissonAction& e) {
    throw CheckFailed(std::string(e.what()) + " (" + e.element() + ")", {{"element", e.element()}, {"diff", e.diff()}});
  }
  std::string text;
  if (cfg.format == "text") {
    std::ostringstream os;
    for (const auto& e : doc["tensor"]["entries"]) {
      const auto& vars = doc["tensor"]["vars"];
      os << '{' << vars[e["i"].get<std::size_t>()].get<std::string>() << ", "
         << vars[e["j"].get<std::size_t>()].get<std::string>() << "} = " << e["poly"].get<std::string>() << '\n';
    }
    text = os.str();
  } else {
    text = doc.dump(2) + "\n";
  }
  emit(cfg, text, out);
  return kOk;
}

Field simulation_field(const Config& cfg, const SystemId& sys) {
  if (cfg.field == "hamiltonian") return special_field(sys, Special::flow, cfg.k);
  if (cfg.field == "lax") return lax_field(sys, cfg.k);
  if (cfg.field == "km") return special_field(sys, Special::km);
  if (cfg.field == "bn-volterra") return special_field(sys, Special::bn_volterra_flow);
  if (cfg.field == "toda") return special_field(sys, Special::toda_system);
  throw UsageError("unknown field '" + cfg.field + "'");
}

std::vector<double> initial_point(const Config& cfg, const SystemId& sys) {
  const auto& space = variables(sys);
  if (!cfg.x0.empty()) {
    const json j = read_json_file(cfg.x0);
    std::vector<double> x(space->size(), 0.0);
    for (const char* key : {"a", "b"}) {
      std::vector<double> vals;
      if (j.contains(key)) {
        try {
          vals = j.at(key).get<std::vector<double>>();
        } catch (const json::exception& e) {
          throw UsageError(cfg.x0 + ": " + e.what());
        }
      }
      std::size_t count = 0;
      for (const auto& name : space->names())
        if (name[0] == key[0]) ++count;
      if (vals.size() != count)
        throw UsageError(cfg.x0 + ": expected " + std::to_string(count) + " values for '" + key + "'");
      for (std::size_t i = 0; i < count; ++i) x[space->index(std::string(key) + std::to_string(i + 1))] = vals[i];
    }
    return x;
  }
  // positive a by default: Toda orbits with a_i < 0 tend to blow up
  double lo_a = sys.family == Family::volterra ? 0.1 : 0.0, hi_a = 1.0;
  double lo_b = -1.0, hi_b = 1.0;
  if (!cfg.interval.empty()) {
    if (cfg.interval.size() != 2 || !(cfg.interval[0] < cfg.interval[1]))
      throw UsageError("--interval needs two increasing values");
    lo_a = lo_b = cfg.interval[0];
    hi_a = hi_b = cfg.interval[1];
  }
  return random_point(sys, cfg.seed, lo_a, hi_a, lo_b, hi_b);
}

int cmd_simulate(const Config& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.system.empty()) throw UsageError("--system is required");
  const SystemId sys = SystemId::parse(cfg.system);
  const Field f = simulation_field(cfg, sys);
  const std::vector<double> x0 = initial_point(cfg, sys);
  if (!(cfg.h > 0) || !(cfg.t_end >= 0)) throw UsageError("need h > 0 and t-end >= 0");
  if (cfg.every == 0) throw UsageError("--every must be positive");
  Trajectory traj;
  try {
    traj = integrate(f, x0, cfg.t_end, cfg.h);
  } catch (const IntegrationError& e) {
    json d = {{"schema", "hamlat/simulate-error/1"}, {"error", e.what()}, {"last_valid_time", e.last_valid_time()}};
    err << d.dump(2) << '\n';
    return kCheckFailed;
  }
  const DriftReport rep = monitors(traj, sys);
  std::string text;
  if (cfg.format == "csv") {
    std::ostringstream os;
    write_csv(os, traj, rep, sys, cfg.every);
    text = os.str();
  } else if (cfg.format == "json") {
    json samples = json::array();
    for (std::size_t s = 0; s < traj.x.size(); ++s)
      if (s % cfg.every == 0 || s + 1 == traj.x.size()) samples.push_back({{"t", traj.t[s]}, {"x", traj.x[s]}});
    json doc = {{"schema", "hamlat/simulate/1"},
                {"system", sys.str()},
                {"field", cfg.field},
                {"k", cfg.k},
                {"h", cfg.h},
                {"t_end", cfg.t_end},
                {"vars", variables(sys)->names()},
                {"x0", x0},
                {"hamiltonians", rep.ks},
                {"max_h_drift", rep.max_h_drift},
                {"max_charpoly_drift", rep.max_charpoly_drift},
                {"samples", samples}};
    text = doc.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << sys.str() << " field=" << cfg.field << " h=" << cfg.h << " t_end=" << cfg.t_end << '\n'
       << "max H drift " << rep.max_h_drift << '\n'
       << "max charpoly drift " << rep.max_charpoly_drift << '\n';
    text = os.str();
  }
  emit(cfg, text, out);
  return kOk;
}

json lv_json(const std::vector<std::vector<Rational>>& M) {
  json rows = json::array();
  for (const auto& r : M) {
    json row = json::array();
    for (const auto& q : r) row.push_back(to_string(q));
    rows.push_back(row);
  }
  return rows;
}

int cmd_bogo(const Config& cfg, std::ostream& out) {
  const RootData rd = root_data(parse_root_type(cfg.root_type), cfg.rank);
  json doc = {{"schema", "hamlat/bogo/1"}, {"root_data", to_json(rd)}};
  const auto residual = mark_relation_residual(rd);
  const bool relation = std::all_of(residual.begin(), residual.end(), [](int v) { return v == 0; });
  doc["mark_relation_residual"] = residual;
  doc["b_system"] = to_json(b_system_rhs(rd));
  const Field xs = x_system_rhs(rd);
  doc["x_system"] = to_json(xs);
  const auto defects = chain_rule_defects(rd);
  doc["chain_rule_defects"] = defects;
  json match = nullptr;
  if (xs.dim() > 0) {
    doc["lv_matrix"] = lv_json(lv_matrix(xs));
    std::optional<SystemId> target;
    std::optional<Field> tf;
    if (rd.type == RootType::A && rd.n >= 2) {
      target = SystemId::volterra_a(rd.n);
      tf = special_field(*target, Special::km);
    } else if (rd.type == RootType::B && rd.n >= 2) {
      target = SystemId::volterra_b(rd.n - 1);
      tf = special_field(*target, Special::bn_volterra_flow);
    }
    if (target) {
      if (auto m = match_lotka_volterra(xs, *tf)) {
        json scale = json::array();
        for (const auto& q : m->scale) scale.push_back(to_string(q));
        json rules = json::array();
        for (std::size_t e = 0; e < m->order.size(); ++e)
          rules.push_back(tf->space()->name(m->order[e]) + " = " + to_string(m->scale[e]) + "*" + xs.space()->name(e));
        match = {{"target", target->str()}, {"order", m->order}, {"scale", scale}, {"substitution", rules}};
      } else {
        match = {{"target", target->str()}, {"order", nullptr}};
      }
    }
  }
  doc["lotka_volterra_match"] = match;
  const bool ok = relation && defects.empty();
  doc["ok"] = ok;
  std::string text;
  if (cfg.format == "text") {
    std::ostringstream os;
    os << to_char(rd.type) << rd.n << " marks:";
    for (int k : rd.marks) os << ' ' << k;
    os << "\nroots: " << rd.root_count << "\n";
    for (std::size_t e = 0; e < xs.dim(); ++e) os << xs.space()->name(e) << "' = " << to_string(xs[e]) << '\n';
    os << "chain rule " << (defects.empty() ? "holds" : "FAILS") << '\n';
    if (!match.is_null() && !match["order"].is_null())
      for (const auto& r : match["substitution"]) os << r.get<std::string>() << '\n';
    text = os.str();
  } else {
    text = doc.dump(2) + "\n";
  }
  emit(cfg, text, out);
  return ok ? kOk : kCheckFailed;
}

int cmd_moser(const Config& cfg, std::ostream& out) {
  const MoserSplit split = square_and_split(cfg.N);
  const int n = (cfg.N - 1) / 2;
  json doc = {{"schema", "hamlat/moser/1"},
              {"N", cfg.N},
              {"L", to_json(split.lax)},
              {"L2", to_json(split.square)},
              {"parity_invariant", split.parity_invariant},
              {"x_flow", to_json(x_flow(n))}};
  bool ok = split.parity_invariant;
  json blocks = json::array();
  for (const JacobiBlock* b : {&split.odd_kept, &split.even_kept}) {
    json jb = to_json(*b);
    if (b->type == 'B' && !b->real) ok = false;
    try {
      jb["identification"] = to_json(identify_jacobi(*b));
    } catch (const std::domain_error& e) {
      jb["identification"] = {{"error", e.what()}};
      ok = false;
    }
    if (auto s = match_catalog_toda(*b)) {
      jb["toda_scaling"] = {{"target", s->target.str()},
                            {"a", to_string(s->alpha) + "*A^2"},
                            {"b", to_string(s->beta) + "*B"}};
    } else {
      jb["toda_scaling"] = nullptr;
    }
    blocks.push_back(jb);
  }
  doc["blocks"] = blocks;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  doc["spectral_point"] = x;
  doc["spectral_mismatch"] = spectral_mismatch(split, x);
  doc["ok"] = ok;
  std::string text;
  if (cfg.format == "text") {
    std::ostringstream os;
    os << "N = " << cfg.N << ", L^2 parity invariant: " << (split.parity_invariant ? "yes" : "no") << '\n';
    for (const auto& jb : blocks) {
      os << jb["parity"].get<std::string>() << " block (" << jb["type"].get<std::string>() << "):\n";
      for (const auto& row : jb["matrix"]) {
        os << "  ";
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? " | " : "") << row[c].get<std::string>();
        os << '\n';
      }
      if (jb["identification"].contains("equations"))
        for (const auto& [var, rhs] : jb["identification"]["equations"].items())
          os << "  " << var << "' = " << rhs.get<std::string>() << '\n';
    }
    text = os.str();
  } else {
    text = doc.dump(2) + "\n";
  }
  emit(cfg, text, out);
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-Hamiltonian Toda and Volterra lattices: exact checks, reductions and simulation", "hamlat"};
  app.require_subcommand(1);
  Config cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "json, text or csv (csv: simulate only)")->check(CLI::IsMember({"json", "text", "csv"}));
    sub->add_option("-o,--output", cfg.output, "output file (relative paths go under $HAMLAT_OUTPUT_DIR)");
    sub->add_option("--seed", cfg.seed, "seed for randomized data");
    sub->add_option("--norm", cfg.norm, "bracket sign convention")->check(CLI::IsMember({"hierarchy", "printed"}));
  };

  auto* verify = app.add_subcommand("verify", "exact identity checks");
  verify->add_option("check", cfg.check, "which identity family")
      ->required()
      ->check(CLI::IsMember({"jacobi", "compatible", "deformation", "involution", "ladder", "reduction", "all"}));
  verify->add_option("--system", cfg.system, "system id, e.g. toda-a:4");
  verify->add_option("--bracket", cfg.brackets, "bracket degree (repeatable)");
  verify->add_option("--map", cfg.map, "psi, phi_toda, phi_c, phi_volterra or phi_tilde");
  verify->add_option("--max-rank", cfg.max_rank, "largest rank for 'all'");
  verify->add_option("--expected", cfg.expected, "reference tensor JSON for 'reduction'");
  add_common(verify);

  auto* reduce = app.add_subcommand("reduce", "reduced bracket on a fixed-point set");
  reduce->add_option("--system", cfg.system)->required();
  reduce->add_option("--map", cfg.map)->required();
  reduce->add_option("--bracket", cfg.brackets)->required();
  add_common(reduce);

  auto* simulate = app.add_subcommand("simulate", "RK4 integration with conservation monitors");
  simulate->add_option("--system", cfg.system)->required();
  simulate->add_option("--field", cfg.field, "hamiltonian, lax, km, bn-volterra or toda");
  simulate->add_option("-k,--k", cfg.k, "Hamiltonian or Lax index");
  simulate->add_option("--t-end", cfg.t_end);
  simulate->add_option("--dt", cfg.h, "RK4 step size");
  simulate->add_option("--x0", cfg.x0, "JSON file {\"a\": [...], \"b\": [...]}");
  simulate->add_option("--interval", cfg.interval, "lo hi for random initial data")->expected(2);
  simulate->add_option("--every", cfg.every, "write every n-th step");
  add_common(simulate);
  cfg.format = "json";

  auto* bogo = app.add_subcommand("bogo", "root data and the generalized Volterra system");
  bogo->add_option("--type", cfg.root_type)->check(CLI::IsMember({"A", "B", "C", "D", "a", "b", "c", "d"}));
  bogo->add_option("--rank", cfg.rank);
  add_common(bogo);

  auto* moser = app.add_subcommand("moser", "squared x-Lax matrix and its Jacobi blocks");
  moser->add_option("--N", cfg.N, "odd size >= 5");
  add_common(moser);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (simulate->parsed() && simulate->count("--format") == 0) cfg.format = "csv";
  if (!simulate->parsed() && cfg.format == "csv") {
    err << "error: --format csv is only available for simulate\n";
    return kUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(cfg, out);
    if (reduce->parsed()) return cmd_reduce(cfg, out);
    if (simulate->parsed()) return cmd_simulate(cfg, out, err);
    if (bogo->parsed()) return cmd_bogo(cfg, out);
    if (moser->parsed()) return cmd_moser(cfg, out);
  } catch (const CheckFailed& e) {
    json d = {{"schema", "hamlat/failure/1"}, {"error", e.what()}, {"detail", e.detail()}};
    out << d.dump(2) << '\n';
    return kCheckFailed;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kUsage;
}

}  // namespace hamlat::cli
