#include "hamlat/moser.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Eigenvalues>

#include "linsolve.hpp"

namespace hamlat {

namespace {

int rank_of(int N) {
  if (N < 3 || N % 2 == 0) throw std::invalid_argument("x-Lax matrix needs odd N >= 3");
  return (N - 1) / 2;
}

GPoly gvar(const VarSpacePtr& s, std::size_t i) { return GPoly::var(s, i); }

std::vector<Poly> a_of_x(int n) {
  const auto xs = x_variables(n);
  std::vector<Poly> out;
  for (int i = 0; i < n; ++i) out.push_back(Poly::var(xs, static_cast<std::size_t>(i), 2) * Rational(-2));
  return out;
}

bool real_entries(const GMatrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      for (const auto& [e, c] : m(i, j).terms())
        if (!c.is_real()) return false;
  return true;
}

JacobiBlock make_block(const GMatrix& square, bool odd) {
  std::vector<std::size_t> idx;
  std::vector<std::size_t> one_based;
  for (std::size_t k = odd ? 0 : 1; k < square.size(); k += 2) {
    idx.push_back(k);
    one_based.push_back(k + 1);
  }
  const bool b_type = idx.size() % 2 == 1;
  GMatrix m = square.principal(idx);
  const bool real = real_entries(m);
  return JacobiBlock{odd ? "odd_kept" : "even_kept",
                     std::move(one_based),
                     b_type ? 'B' : 'C',
                     static_cast<int>(b_type ? (idx.size() - 1) / 2 : idx.size() / 2),
                     std::move(m),
                     real};
}

/// Writes `target` as a polynomial of degree <= 2 in the generators, or
/// returns nullopt.
std::optional<GPoly> express(const GPoly& target, const std::vector<GPoly>& gens, const VarSpacePtr& out_space) {
  const std::size_t g = gens.size();
  std::vector<Exponents> monos;
  std::vector<GPoly> values;
  const VarSpacePtr& xs = target.space();
  monos.push_back(Exponents(g, 0));
  values.push_back(GPoly(xs, Gaussian(1)));
  for (std::size_t i = 0; i < g; ++i) {
    Exponents e(g, 0);
    e[i] = 1;
    monos.push_back(e);
    values.push_back(gens[i]);
  }
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = i; j < g; ++j) {
      Exponents e(g, 0);
      ++e[i];
      ++e[j];
      monos.push_back(e);
      values.push_back(gens[i] * gens[j]);
    }

  std::map<Exponents, std::size_t> row_of;
  auto row = [&](const Exponents& e) {
    auto it = row_of.find(e);
    if (it == row_of.end()) it = row_of.emplace(e, row_of.size()).first;
    return it->second;
  };
  for (const auto& v : values)
    for (const auto& [e, c] : v.terms()) row(e);
  for (const auto& [e, c] : target.terms()) row(e);

  std::vector<std::vector<Gaussian>> A(row_of.size(), std::vector<Gaussian>(values.size(), Gaussian(0)));
  std::vector<Gaussian> rhs(row_of.size(), Gaussian(0));
  for (std::size_t col = 0; col < values.size(); ++col)
    for (const auto& [e, c] : values[col].terms()) A[row_of.at(e)][col] = c;
  for (const auto& [e, c] : target.terms()) rhs[row_of.at(e)] = c;

  std::size_t rank = 0;
  auto sol = detail::solve_linear(std::move(A), std::move(rhs), rank);
  if (!sol) return std::nullopt;
  GPoly out(out_space);
  for (std::size_t col = 0; col < monos.size(); ++col) out.add_term(monos[col], (*sol)[col]);
  return out;
}

}  // namespace

VarSpacePtr x_variables(int n) {
  if (n < 1) throw std::invalid_argument("need at least one x variable");
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  return make_space(std::move(names));
}

GMatrix x_lax(int N) {
  const int n = rank_of(N);
  const auto xs = x_variables(n);
  GMatrix L(xs, static_cast<std::size_t>(N));
  for (int k = 0; k < N - 1; ++k) {
    GPoly v = k < n ? gvar(xs, k) : gvar(xs, static_cast<std::size_t>(N - 2 - k)) * Gaussian::i();
    L(k, k + 1) = v;
    L(k + 1, k) = v;
  }
  return L;
}

std::vector<std::size_t> x_lax_product_defects(int n) {
  const GMatrix Lx = x_lax(2 * n + 1);
  const LaxMatrix LB = lax(SystemId::volterra_b(n));
  const auto xs = Lx.space();
  const auto images = a_of_x(n);
  std::vector<std::size_t> bad;
  for (std::size_t k = 0; k + 1 < Lx.size(); ++k) {
    GPoly lhs = to_gaussian(compose(LB(k, k + 1) * LB(k + 1, k), images, xs));
    GPoly rhs = Lx(k, k + 1) * Lx(k + 1, k) * Gaussian(-2);
    if (lhs != rhs) bad.push_back(k);
  }
  return bad;
}

Field x_flow(int n, XFlowForm form) {
  const auto xs = x_variables(n);
  auto x = [&](int i) { return Poly::var(xs, static_cast<std::size_t>(i - 1)); };
  auto sq = [&](int i) {
    if (i < 1) return Poly(xs);
    if (i > n) return -(x(n) * x(n));
    return x(i) * x(i);
  };
  Field f(xs);
  for (int i = 1; i <= n; ++i) {
    if (form == XFlowForm::corrected) {
      f[i - 1] = x(i) * (sq(i + 1) - sq(i - 1));
    } else if (i == n) {
      f[i - 1] = -(x(n) * (x(n) * x(n) + sq(n - 1)));
    } else if (i == 1) {
      f[i - 1] = x(1) * sq(2);
    } else {
      f[i - 1] = x(i) * (sq(i - 1) - sq(i + 1));
    }
  }
  return f;
}

std::vector<Poly> x_flow_chain_defects(int n, XFlowForm form) {
  const Field xf = x_flow(n, form);
  const Field bnv = special_field(SystemId::volterra_b(n), Special::bn_volterra_flow);
  const auto images = a_of_x(n);
  std::vector<Poly> out;
  for (int i = 0; i < n; ++i)
    out.push_back(directional_action(xf, images[i]) - compose(bnv[i], images, xf.space()));
  return out;
}

MoserSplit square_and_split(int N) {
  if (N < 5 || N % 2 == 0) throw std::invalid_argument("square_and_split needs odd N >= 5");
  GMatrix L = x_lax(N);
  GMatrix S = L * L;
  bool invariant = true;
  for (std::size_t i = 0; i < S.size(); ++i)
    for (std::size_t j = 0; j < S.size(); ++j)
      if ((i + j) % 2 == 1 && !S(i, j).is_zero()) invariant = false;
  JacobiBlock odd = make_block(S, true);
  JacobiBlock even = make_block(S, false);
  return MoserSplit{N, std::move(L), std::move(S), invariant, std::move(odd), std::move(even)};
}

JacobiIdentification identify_jacobi(const JacobiBlock& block, XFlowForm form) {
  const int r = block.rank;
  if (r < 1 || block.matrix.size() < static_cast<std::size_t>(2 * r))
    throw std::invalid_argument("block is too small to identify");
  std::vector<std::string> names;
  for (int i = 1; i <= r; ++i) names.push_back("A" + std::to_string(i));
  for (int i = 1; i <= r; ++i) names.push_back("B" + std::to_string(i));
  const VarSpacePtr space = make_space(names);
  JacobiIdentification id{space, {}, {}, GField(space)};
  for (int i = 0; i < r; ++i) {
    id.a_of_x.push_back(block.matrix(i, i + 1));
    id.b_of_x.push_back(block.matrix(i, i));
  }
  std::vector<GPoly> gens = id.a_of_x;
  gens.insert(gens.end(), id.b_of_x.begin(), id.b_of_x.end());

  const int n = static_cast<int>(block.matrix.space()->size());
  const GField xf = to_gaussian(x_flow(n, form));
  for (std::size_t k = 0; k < gens.size(); ++k) {
    auto e = express(directional_action(xf, gens[k]), gens, id.space);
    if (!e) throw std::domain_error("d" + names[k] + "/dt is not a polynomial in the Jacobi variables");
    id.induced[k] = *e;
  }
  return id;
}

std::optional<TodaScaling> match_catalog_toda(const JacobiBlock& block, XFlowForm form) {
  const SystemId target = block.type == 'B' ? SystemId::toda_b(block.rank) : SystemId::toda_c(block.rank);
  const GField tf = to_gaussian(special_field(target, Special::flow, 2));
  const int n = static_cast<int>(block.matrix.space()->size());
  const GField xf = to_gaussian(x_flow(n, form));
  const auto& xs = xf.space();
  const int r = block.rank;
  static const int alphas[][2] = {{4, 1}, {-4, 1}, {2, 1}, {-2, 1}, {1, 1}, {-1, 1}, {8, 1},
                                  {-8, 1}, {1, 2}, {-1, 2}, {1, 4}, {-1, 4}};
  static const int betas[][2] = {{-2, 1}, {2, 1}, {-1, 1}, {1, 1}, {-4, 1}, {4, 1}, {-1, 2}, {1, 2}};
  for (const auto& al : alphas)
    for (const auto& be : betas) {
      const Rational alpha(al[0], al[1]);
      const Rational beta(be[0], be[1]);
      // target variables are a1..ar, b1..br
      std::vector<GPoly> images;
      for (int i = 0; i < r; ++i) images.push_back(block.matrix(i, i + 1) * block.matrix(i, i + 1) * Gaussian(alpha));
      for (int i = 0; i < r; ++i) images.push_back(block.matrix(i, i) * Gaussian(beta));
      bool ok = true;
      for (std::size_t k = 0; k < images.size() && ok; ++k)
        ok = directional_action(xf, images[k]) == compose(tf[k], images, xs);
      if (ok) return TodaScaling{target, alpha, beta};
    }
  return std::nullopt;
}

double spectral_mismatch(const MoserSplit& split, const std::vector<double>& x) {
  using C = std::complex<double>;
  std::vector<C> pt(x.begin(), x.end());
  auto numeric = [&](const GMatrix& m) {
    Eigen::MatrixXcd out(m.size(), m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j)
        out(i, j) = eval_numeric<Gaussian, C>(m(i, j), std::span<const C>(pt));
    return out;
  };
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(numeric(split.lax), false);
  std::vector<C> squares;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) squares.push_back(es.eigenvalues()(k) * es.eigenvalues()(k));
  double worst = 0.0;
  for (const JacobiBlock* b : {&split.odd_kept, &split.even_kept}) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eb(numeric(b->matrix), false);
    const Eigen::VectorXcd& mu = eb.eigenvalues();
    // Eigenvalues of a defective cluster are only accurate to a root of the
    // rounding error, but the cluster mean is not; compare means.
    const double radius = 1e-6 * std::max(1.0, mu.cwiseAbs().maxCoeff());
    std::vector<int> cluster(mu.size(), -1);
    int clusters = 0;
    for (Eigen::Index k = 0; k < mu.size(); ++k) {
      if (cluster[k] >= 0) continue;
      cluster[k] = clusters;
      std::vector<Eigen::Index> todo{k};
      while (!todo.empty()) {
        const Eigen::Index p = todo.back();
        todo.pop_back();
        for (Eigen::Index q = 0; q < mu.size(); ++q)
          if (cluster[q] < 0 && std::abs(mu(p) - mu(q)) < radius) {
            cluster[q] = clusters;
            todo.push_back(q);
          }
      }
      ++clusters;
    }
    std::vector<bool> used(squares.size(), false);
    for (int c = 0; c < clusters; ++c) {
      C mean{};
      int size = 0;
      for (Eigen::Index k = 0; k < mu.size(); ++k)
        if (cluster[k] == c) {
          mean += mu(k);
          ++size;
        }
      mean /= static_cast<double>(size);
      C picked{};
      for (int m = 0; m < size; ++m) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t at = squares.size();
        for (std::size_t s = 0; s < squares.size(); ++s)
          if (!used[s] && std::abs(squares[s] - mean) < best) {
            best = std::abs(squares[s] - mean);
            at = s;
          }
        if (at == squares.size()) return std::numeric_limits<double>::infinity();
        used[at] = true;
        picked += squares[at];
      }
      worst = std::max(worst, std::abs(picked / static_cast<double>(size) - mean));
    }
  }
  return worst;
}

nlohmann::json to_json(const JacobiBlock& block) {
  return {{"parity", block.parity},
          {"indices", block.indices},
          {"type", std::string(1, block.type) + std::to_string(block.rank)},
          {"size", block.matrix.size()},
          {"real", block.real},
          {"matrix", to_json(block.matrix)}};
}

nlohmann::json to_json(const JacobiIdentification& id) {
  nlohmann::json vars = nlohmann::json::object();
  for (std::size_t i = 0; i < id.a_of_x.size(); ++i) vars["A" + std::to_string(i + 1)] = to_string(id.a_of_x[i]);
  for (std::size_t i = 0; i < id.b_of_x.size(); ++i) vars["B" + std::to_string(i + 1)] = to_string(id.b_of_x[i]);
  nlohmann::json eqs = nlohmann::json::object();
  for (std::size_t k = 0; k < id.space->size(); ++k) eqs[id.space->name(k)] = to_string(id.induced[k]);
  return {{"variables", vars}, {"equations", eqs}};
}

}  // namespace hamlat
