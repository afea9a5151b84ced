// Poisson reduction to the fixed-point set of a finite group of linear
// Poisson symmetries: average, bracket, restrict.
#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "hamlat/linear_map.hpp"
#include "hamlat/poisson.hpp"

namespace hamlat {

/// A finite group of scaled permutations, closed under composition.
template <class K>
class FiniteGroupAction {
 public:
  /// Closure of the generators (the identity is always included).
  static FiniteGroupAction generate(const std::vector<LinearMap<K>>& generators) {
    if (generators.empty()) throw std::invalid_argument("group needs at least one generator");
    const auto& space = generators.front().space();
    FiniteGroupAction G;
    G.elements_.push_back(LinearMap<K>::identity(space));
    std::deque<std::size_t> todo{0};
    while (!todo.empty()) {
      const LinearMap<K> g = G.elements_[todo.front()];
      todo.pop_front();
      for (const auto& s : generators) {
        LinearMap<K> h = s.compose(g);
        if (std::find(G.elements_.begin(), G.elements_.end(), h) == G.elements_.end()) {
          if (G.elements_.size() > 4096) throw std::domain_error("group is too large");
          G.elements_.push_back(h);
          todo.push_back(G.elements_.size() - 1);
        }
      }
    }
    for (const auto& s : generators)
      if (G.order() % static_cast<std::size_t>(s.order()) != 0)
        throw std::invalid_argument("declared order of '" + s.name() + "' does not divide the group order");
    return G;
  }

  static FiniteGroupAction trivial(VarSpacePtr space) {
    FiniteGroupAction G;
    G.elements_.push_back(LinearMap<K>::identity(std::move(space)));
    return G;
  }

  const std::vector<LinearMap<K>>& elements() const { return elements_; }
  std::size_t order() const { return elements_.size(); }
  const VarSpacePtr& space() const { return elements_.front().space(); }

 private:
  FiniteGroupAction() = default;
  std::vector<LinearMap<K>> elements_;
};

/// Linear chart of the fixed-point set. Reduced coordinate r is the ambient
/// coordinate proj[r]; the section sets x_t = lambda[t] * y[rep[t]], or 0
/// when rep[t] is empty.
template <class K>
struct FixedPointChart {
  VarSpacePtr ambient;
  VarSpacePtr reduced;
  std::vector<std::optional<std::size_t>> rep;
  std::vector<K> lambda;
  std::vector<std::size_t> proj;

  /// p restricted to the fixed set, as a polynomial in reduced coordinates.
  BasicPoly<K> restrict_poly(const BasicPoly<K>& p) const {
    if (!same_space(p.space(), ambient)) throw std::invalid_argument("polynomial is not on the ambient space");
    BasicPoly<K> out(reduced);
    Exponents f(reduced->size());
    for (const auto& [e, c] : p.terms()) {
      std::fill(f.begin(), f.end(), 0);
      K coeff = c;
      bool vanishes = false;
      for (std::size_t t = 0; t < e.size(); ++t) {
        if (e[t] == 0) continue;
        if (!rep[t]) {
          if (e[t] < 0) throw std::domain_error("negative power of a coordinate that vanishes on the fixed set");
          vanishes = true;
          break;
        }
        f[*rep[t]] += e[t];
        coeff *= ipow(lambda[t], e[t]);
      }
      if (!vanishes) out.add_term(f, coeff);
    }
    return out;
  }

  /// f composed with the projection (y_r -> x_{proj[r]}).
  BasicPoly<K> pullback(const BasicPoly<K>& f) const {
    if (!same_space(f.space(), reduced)) throw std::invalid_argument("polynomial is not on the reduced space");
    BasicPoly<K> out(ambient);
    Exponents g(ambient->size());
    for (const auto& [e, c] : f.terms()) {
      std::fill(g.begin(), g.end(), 0);
      for (std::size_t r = 0; r < e.size(); ++r) g[proj[r]] = e[r];
      out.add_term(g, c);
    }
    return out;
  }

  /// Whether the field, restricted to the fixed set, is tangent to it.
  bool is_tangent(const VectorField<K>& X) const {
    for (std::size_t t = 0; t < ambient->size(); ++t) {
      BasicPoly<K> v = restrict_poly(X[t]);
      if (!rep[t]) {
        if (!v.is_zero()) return false;
        continue;
      }
      if (v != restrict_poly(X[proj[*rep[t]]]) * lambda[t]) return false;
    }
    return true;
  }
};

/// Computes the fixed-point chart of G. Representatives are the first
/// coordinate of each orbit in ambient order, and reduced coordinates take
/// their names. If `reduced` is given it must carry exactly those names.
template <class K>
FixedPointChart<K> fixed_point_chart(const FiniteGroupAction<K>& G, VarSpacePtr reduced = nullptr) {
  const VarSpacePtr& space = G.space();
  const std::size_t m = space->size();
  // pos[g][s] = t with source_g(t) = s
  std::vector<std::vector<std::size_t>> pos(G.order(), std::vector<std::size_t>(m));
  for (std::size_t g = 0; g < G.order(); ++g)
    for (std::size_t t = 0; t < m; ++t) pos[g][G.elements()[g].source(t)] = t;

  FixedPointChart<K> chart;
  chart.ambient = space;
  chart.rep.assign(m, std::nullopt);
  chart.lambda.assign(m, K(0));
  std::vector<bool> seen(m, false);
  std::vector<std::string> names;
  for (std::size_t r = 0; r < m; ++r) {
    if (seen[r]) continue;
    std::vector<std::size_t> orbit{r};
    std::vector<std::optional<K>> val(m);
    val[r] = FieldTraits<K>::one();
    seen[r] = true;
    bool consistent = true;
    for (std::size_t q = 0; q < orbit.size(); ++q) {
      const std::size_t s = orbit[q];
      for (std::size_t g = 0; g < G.order(); ++g) {
        const std::size_t t = pos[g][s];
        K want = G.elements()[g].scale(t) * *val[s];
        if (!val[t]) {
          val[t] = want;
          seen[t] = true;
          orbit.push_back(t);
        } else if (*val[t] != want) {
          consistent = false;
        }
      }
    }
    if (!consistent) continue;
    const std::size_t idx = names.size();
    names.push_back(space->name(r));
    chart.proj.push_back(r);
    for (std::size_t t : orbit) {
      chart.rep[t] = idx;
      chart.lambda[t] = *val[t];
    }
  }
  if (reduced) {
    if (reduced->names() != names) throw std::invalid_argument("reduced space does not match the fixed-point chart");
    chart.reduced = std::move(reduced);
  } else {
    chart.reduced = make_space(names);
  }
  return chart;
}

template <class K>
FixedPointChart<K> identity_chart(const VarSpacePtr& space) {
  FixedPointChart<K> chart;
  chart.ambient = space;
  chart.reduced = space;
  for (std::size_t t = 0; t < space->size(); ++t) {
    chart.rep.emplace_back(t);
    chart.lambda.push_back(FieldTraits<K>::one());
    chart.proj.push_back(t);
  }
  return chart;
}

/// Mean of F o g over the group.
template <class K>
BasicPoly<K> invariant_average(const BasicPoly<K>& F, const FiniteGroupAction<K>& G) {
  BasicPoly<K> sum(F.space());
  for (const auto& g : G.elements()) sum += subst_linear(F, g);
  K inv = FieldTraits<K>::one();
  inv /= K(static_cast<long>(G.order()));
  return sum * inv;
}

class NotPoissonAction : public std::runtime_error {
 public:
  NotPoissonAction(std::string element, nlohmann::json diff)
      : std::runtime_error("action is not Poisson for this tensor"),
        element_(std::move(element)),
        diff_(std::move(diff)) {}
  const std::string& element() const { return element_; }
  const nlohmann::json& diff() const { return diff_; }

 private:
  std::string element_;
  nlohmann::json diff_;
};

/// Entries (i<j) where the tensors differ, as {"i","j","expected","got"}.
template <class K>
nlohmann::json tensor_diff(const PoissonTensor<K>& expected, const PoissonTensor<K>& got) {
  if (!same_space(expected.space(), got.space())) throw std::invalid_argument("tensors live on different spaces");
  nlohmann::json d = nlohmann::json::array();
  for (std::size_t i = 0; i < got.dim(); ++i)
    for (std::size_t j = i + 1; j < got.dim(); ++j)
      if (expected(i, j) != got(i, j))
        d.push_back({{"i", i},
                     {"j", j},
                     {"vars", {got.space()->name(i), got.space()->name(j)}},
                     {"expected", to_string(expected(i, j))},
                     {"got", to_string(got(i, j))}});
  return d;
}

/// Throws NotPoissonAction unless every group element preserves pi.
template <class K>
void require_poisson_action(const PoissonTensor<K>& pi, const FiniteGroupAction<K>& G) {
  for (const auto& g : G.elements()) {
    if (g.is_identity()) continue;
    PoissonTensor<K> pushed = pushforward_bivector(g, pi);
    if (pushed != pi) throw NotPoissonAction(g.name(), tensor_diff(pi, pushed));
  }
}

/// Reduced tensor: {y_r, y_s}_N = restriction of {avg(x_{proj r}), avg(x_{proj s})}.
template <class K>
PoissonTensor<K> reduced_bracket(const PoissonTensor<K>& pi, const FiniteGroupAction<K>& G,
                                 const FixedPointChart<K>& chart) {
  if (!same_space(pi.space(), G.space()) || !same_space(pi.space(), chart.ambient))
    throw std::invalid_argument("tensor, group and chart must share the ambient space");
  require_poisson_action(pi, G);
  const std::size_t r = chart.reduced->size();
  std::vector<BasicPoly<K>> lifts;
  lifts.reserve(r);
  for (std::size_t a = 0; a < r; ++a)
    lifts.push_back(invariant_average(BasicPoly<K>::var(chart.ambient, chart.proj[a]), G));
  PoissonTensor<K> out(chart.reduced, pi.degree());
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a + 1; b < r; ++b) out.set(a, b, chart.restrict_poly(bracket(pi, lifts[a], lifts[b])));
  return out;
}

/// {"ok": bool, "diff": [...]} plus "error" when the action is not Poisson.
template <class K>
nlohmann::json verify_reduction(const PoissonTensor<K>& pi, const FiniteGroupAction<K>& G,
                                const FixedPointChart<K>& chart, const PoissonTensor<K>& expected) {
  try {
    PoissonTensor<K> got = reduced_bracket(pi, G, chart);
    nlohmann::json diff = tensor_diff(rebase(expected, chart.reduced), got);
    return {{"ok", diff.empty()}, {"diff", std::move(diff)}};
  } catch (const NotPoissonAction& ex) {
    return {{"ok", false}, {"error", ex.what()}, {"element", ex.element()}, {"diff", ex.diff()}};
  }
}

}  // namespace hamlat
