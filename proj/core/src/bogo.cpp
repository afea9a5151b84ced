#include "hamlat/bogo.hpp"

#include "linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace hamlat {

namespace {

using IVec = std::vector<int>;
using QMat = std::vector<std::vector<Rational>>;

int dot(const IVec& a, const IVec& b) { return std::inner_product(a.begin(), a.end(), b.begin(), 0); }

QMat as_columns(const std::vector<IVec>& vecs) {
  const std::size_t d = vecs.front().size();
  QMat A(d, std::vector<Rational>(vecs.size()));
  for (std::size_t c = 0; c < vecs.size(); ++c)
    for (std::size_t k = 0; k < d; ++k) A[k][c] = vecs[c][k];
  return A;
}

std::vector<Rational> to_q(const IVec& v) { return {v.begin(), v.end()}; }

std::vector<IVec> simple_roots(RootType type, int n) {
  const int d = type == RootType::A ? n + 1 : n;
  std::vector<IVec> s;
  for (int i = 0; i < n - (type == RootType::A ? 0 : 1); ++i) {
    IVec v(d, 0);
    v[i] = 1;
    v[i + 1] = -1;
    s.push_back(v);
  }
  if (type == RootType::A) return s;
  IVec last(d, 0);
  switch (type) {
    case RootType::B:
      last[n - 1] = 1;
      break;
    case RootType::C:
      last[n - 1] = 2;
      break;
    case RootType::D:
      last[n - 2] = 1;
      last[n - 1] = 1;
      break;
    default:
      break;
  }
  s.push_back(last);
  return s;
}

}  // namespace

RootType parse_root_type(std::string_view text) {
  if (text == "A" || text == "a") return RootType::A;
  if (text == "B" || text == "b") return RootType::B;
  if (text == "C" || text == "c") return RootType::C;
  if (text == "D" || text == "d") return RootType::D;
  throw std::invalid_argument("unsupported root system type '" + std::string(text) + "'");
}

char to_char(RootType t) { return "ABCD"[static_cast<int>(t)]; }

RootData root_data(RootType type, int n) {
  if (n < 1) throw std::invalid_argument("rank must be at least 1");
  if (type == RootType::D && n < 3) throw std::invalid_argument("type D needs rank at least 3");
  RootData rd;
  rd.type = type;
  rd.n = n;
  rd.simple = simple_roots(type, n);

  std::set<IVec> roots(rd.simple.begin(), rd.simple.end());
  std::vector<IVec> todo(rd.simple.begin(), rd.simple.end());
  while (!todo.empty()) {
    IVec beta = todo.back();
    todo.pop_back();
    for (const auto& alpha : rd.simple) {
      const int num = 2 * dot(beta, alpha);
      const int den = dot(alpha, alpha);
      if (num % den != 0) throw std::logic_error("non-integral Cartan number");
      IVec r = beta;
      for (std::size_t k = 0; k < r.size(); ++k) r[k] -= (num / den) * alpha[k];
      if (roots.insert(r).second) todo.push_back(r);
    }
  }
  rd.root_count = roots.size();

  const QMat A = as_columns(rd.simple);
  std::optional<std::vector<Rational>> lowest_coords;
  Rational best_height;
  for (const auto& r : roots) {
    std::size_t rank = 0;
    auto y = detail::solve_linear(A, to_q(r), rank);
    if (!y || rank != static_cast<std::size_t>(n)) throw std::logic_error("root outside the simple-root lattice");
    Rational h = std::accumulate(y->begin(), y->end(), Rational(0));
    if (!lowest_coords || h < best_height) {
      best_height = h;
      lowest_coords = y;
      rd.lowest = r;
    }
  }

  // k_0 = 1; solve sum_i k_i w_i = -w_0 and require a unique positive
  // integral solution.
  IVec neg = rd.lowest;
  for (int& v : neg) v = -v;
  std::size_t rank = 0;
  auto k = detail::solve_linear(A, to_q(neg), rank);
  if (!k || rank != static_cast<std::size_t>(n)) throw std::logic_error("marks are not uniquely determined");
  rd.marks.push_back(1);
  for (const auto& q : *k) {
    if (q.get_den() != 1 || sgn(q) <= 0) throw std::logic_error("marks are not positive integers");
    rd.marks.push_back(static_cast<int>(q.get_num().get_si()));
  }

  rd.gram.assign(n, std::vector<Rational>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rd.gram[i][j] = dot(rd.simple[i], rd.simple[j]);
  return rd;
}

std::vector<int> mark_relation_residual(const RootData& rd) {
  IVec res(rd.lowest.size(), 0);
  for (std::size_t k = 0; k < res.size(); ++k) {
    res[k] = rd.marks[0] * rd.lowest[k];
    for (int i = 0; i < rd.n; ++i) res[k] += rd.marks[i + 1] * rd.simple[i][k];
  }
  return res;
}

std::vector<std::vector<int>> sign_matrix(const RootData& rd) {
  std::vector<std::vector<int>> c(rd.n, std::vector<int>(rd.n, 0));
  for (int i = 0; i < rd.n; ++i)
    for (int j = 0; j < rd.n; ++j)
      if (i != j && sgn(rd.gram[i][j]) != 0) c[i][j] = i < j ? 1 : -1;
  return c;
}

VarSpacePtr b_space(const RootData& rd) {
  std::vector<std::string> names;
  for (int i = 1; i <= rd.n; ++i) names.push_back("b" + std::to_string(i));
  return make_space(std::move(names));
}

Field b_system_rhs(const RootData& rd) {
  const auto space = b_space(rd);
  const auto c = sign_matrix(rd);
  Field f(space);
  for (int i = 0; i < rd.n; ++i)
    for (int j = 0; j < rd.n; ++j)
      if (c[i][j] != 0) f[i] -= Poly::var(space, static_cast<std::size_t>(j), -1) * Rational(rd.marks[j + 1] * c[i][j]);
  return f;
}

std::vector<Edge> edges(const RootData& rd) {
  const auto c = sign_matrix(rd);
  std::vector<Edge> out;
  for (int i = 0; i < rd.n; ++i)
    for (int j = i + 1; j < rd.n; ++j)
      if (c[i][j] != 0)
        out.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                       "x" + std::to_string(i + 1) + "_" + std::to_string(j + 1)});
  return out;
}

VarSpacePtr x_space(const RootData& rd) {
  std::vector<std::string> names;
  for (const auto& e : edges(rd)) names.push_back(e.name);
  return make_space(std::move(names));
}

namespace {
template <class V>
std::vector<std::vector<V>> x_matrix(const RootData& rd, const std::vector<V>& b) {
  if (b.size() != static_cast<std::size_t>(rd.n)) throw std::invalid_argument("b has wrong dimension");
  for (const auto& v : b)
    if (v == V(0)) throw std::domain_error("x variables need every b_i nonzero");
  const auto c = sign_matrix(rd);
  std::vector<std::vector<V>> x(rd.n, std::vector<V>(rd.n, V(0)));
  for (int i = 0; i < rd.n; ++i)
    for (int j = 0; j < rd.n; ++j)
      if (c[i][j] != 0) x[i][j] = V(c[i][j]) / (b[i] * b[j]);
  return x;
}
}  // namespace

std::vector<std::vector<Rational>> x_transform(const RootData& rd, const std::vector<Rational>& b) {
  return x_matrix(rd, b);
}
std::vector<std::vector<double>> x_transform(const RootData& rd, const std::vector<double>& b) {
  return x_matrix(rd, b);
}

std::vector<Poly> x_of_b(const RootData& rd) {
  const auto space = b_space(rd);
  const auto c = sign_matrix(rd);
  std::vector<Poly> out;
  for (const auto& e : edges(rd)) {
    Exponents ex(rd.n, 0);
    ex[e.i] = -1;
    ex[e.j] = -1;
    out.push_back(Poly::monomial(space, ex, Rational(c[e.i][e.j])));
  }
  return out;
}

Field x_system_rhs(const RootData& rd) {
  const auto space = x_space(rd);
  const auto es = edges(rd);
  auto X = [&](std::size_t p, std::size_t q) {
    for (std::size_t e = 0; e < es.size(); ++e) {
      if (es[e].i == p && es[e].j == q) return Poly::var(space, e);
      if (es[e].i == q && es[e].j == p) return -Poly::var(space, e);
    }
    return Poly(space);
  };
  Field f(space);
  for (std::size_t e = 0; e < es.size(); ++e) {
    Poly sum(space);
    for (int s = 0; s < rd.n; ++s) sum += (X(es[e].i, s) + X(es[e].j, s)) * Rational(rd.marks[s + 1]);
    f[e] = Poly::var(space, e) * sum;
  }
  return f;
}

std::vector<std::string> chain_rule_defects(const RootData& rd) {
  const auto bsp = b_space(rd);
  const Field bdot = b_system_rhs(rd);
  const Field xdot = x_system_rhs(rd);
  const auto xb = x_of_b(rd);
  const auto es = edges(rd);
  std::vector<std::string> bad;
  for (std::size_t e = 0; e < es.size(); ++e) {
    Poly lhs = directional_action(bdot, xb[e]);
    Poly rhs = compose(xdot[e], xb, bsp);
    if (lhs != rhs) bad.push_back(es[e].name + ": " + to_string(lhs) + " != " + to_string(rhs));
  }
  return bad;
}

std::vector<std::vector<Rational>> lv_matrix(const Field& f) {
  const std::size_t m = f.dim();
  std::vector<std::vector<Rational>> M(m, std::vector<Rational>(m, Rational(0)));
  for (std::size_t e = 0; e < m; ++e)
    for (const auto& [ex, c] : f[e].terms()) {
      Exponents rest = ex;
      if (rest[e] < 1) throw std::invalid_argument("component is not divisible by its own variable");
      --rest[e];
      int deg = 0;
      std::size_t which = m;
      for (std::size_t k = 0; k < m; ++k) {
        if (rest[k] < 0) throw std::invalid_argument("field is not polynomial");
        deg += rest[k];
        if (rest[k] == 1) which = k;
      }
      if (deg != 1 || which == m) throw std::invalid_argument("field is not of Lotka-Volterra form");
      M[e][which] += c;
    }
  return M;
}

std::optional<LvMatch> match_lotka_volterra(const Field& edge_system, const Field& target) {
  const std::size_t m = edge_system.dim();
  if (target.dim() != m) return std::nullopt;
  const auto M = lv_matrix(edge_system);
  const auto T = lv_matrix(target);
  std::vector<std::size_t> id(m);
  std::iota(id.begin(), id.end(), 0);
  std::vector<std::size_t> rev(id.rbegin(), id.rend());
  for (const auto& order : {id, rev}) {
    std::vector<std::optional<Rational>> lambda(m);
    bool ok = true;
    for (std::size_t e = 0; e < m && ok; ++e)
      for (std::size_t f = 0; f < m && ok; ++f) {
        const Rational& mv = M[e][f];
        const Rational& tv = T[order[e]][order[f]];
        if (sgn(mv) == 0 || sgn(tv) == 0) {
          ok = sgn(mv) == 0 && sgn(tv) == 0;
          continue;
        }
        Rational l = mv / tv;
        if (!lambda[f]) {
          lambda[f] = l;
        } else if (*lambda[f] != l) {
          ok = false;
        }
      }
    if (!ok) continue;
    LvMatch match{order, {}};
    for (auto& l : lambda) match.scale.push_back(l ? *l : Rational(1));
    return match;
  }
  return std::nullopt;
}

nlohmann::json to_json(const RootData& rd) {
  nlohmann::json gram = nlohmann::json::array();
  for (const auto& row : rd.gram) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& q : row) r.push_back(to_string(q));
    gram.push_back(r);
  }
  return {{"type", std::string(1, to_char(rd.type))},
          {"rank", rd.n},
          {"simple_roots", rd.simple},
          {"lowest_root", rd.lowest},
          {"marks", rd.marks},
          {"gram", gram},
          {"root_count", rd.root_count},
          {"sign_matrix", sign_matrix(rd)}};
}

}  // namespace hamlat
