#include "hamlat/flows.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>

namespace hamlat {

namespace {

bool finite(const std::vector<double>& x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

void axpy(std::vector<double>& out, const std::vector<double>& x, double a, const std::vector<double>& k) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * k[i];
}

struct Rk4 {
  const CompiledField& f;
  std::vector<double> k1, k2, k3, k4, tmp;

  explicit Rk4(const CompiledField& field)
      : f(field), k1(field.dim()), k2(field.dim()), k3(field.dim()), k4(field.dim()), tmp(field.dim()) {}

  void step(std::vector<double>& x, double h) {
    f(x, k1);
    axpy(tmp, x, h / 2, k1);
    f(tmp, k2);
    axpy(tmp, x, h / 2, k2);
    f(tmp, k3);
    axpy(tmp, x, h, k3);
    f(tmp, k4);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
};

std::size_t step_count(double t_end, double h) {
  if (!(h > 0)) throw std::invalid_argument("step size must be positive");
  if (!(t_end >= 0)) throw std::invalid_argument("end time must be non-negative");
  return static_cast<std::size_t>(std::ceil(t_end / h - 1e-9));
}

std::vector<std::vector<double>> numeric_matrix(const std::vector<std::vector<CompiledPoly>>& entries,
                                                const std::vector<double>& x) {
  std::vector<std::vector<double>> M(entries.size(), std::vector<double>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i)
    for (std::size_t j = 0; j < entries.size(); ++j) M[i][j] = entries[i][j](x);
  return M;
}

}  // namespace

CompiledField::CompiledField(const Field& f) : CompiledField(f.components()) {}

CompiledField::CompiledField(const std::vector<Poly>& polys) {
  for (const auto& p : polys) {
    std::vector<Term> terms;
    for (const auto& [e, c] : p.terms()) {
      Term t{c.get_d(), {}};
      for (std::size_t v = 0; v < e.size(); ++v)
        if (e[v] != 0) t.factors.emplace_back(v, e[v]);
      terms.push_back(std::move(t));
    }
    comps_.push_back(std::move(terms));
  }
}

void CompiledField::operator()(const std::vector<double>& x, std::vector<double>& out) const {
  out.resize(comps_.size());
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    double sum = 0.0;
    for (const auto& t : comps_[i]) {
      double v = t.coeff;
      for (const auto& [var, e] : t.factors) {
        double p = 1.0;
        for (int k = 0; k < std::abs(e); ++k) p *= x[var];
        v *= e > 0 ? p : 1.0 / p;
      }
      sum += v;
    }
    out[i] = sum;
  }
}

std::vector<double> CompiledField::operator()(const std::vector<double>& x) const {
  std::vector<double> out;
  (*this)(x, out);
  return out;
}

CompiledPoly::CompiledPoly(const Poly& p) : field_(std::vector<Poly>{p}) {}

double CompiledPoly::operator()(const std::vector<double>& x) const { return field_(x)[0]; }

Trajectory integrate(const Field& f, const std::vector<double>& x0, double t_end, double h) {
  if (x0.size() != f.dim()) throw std::invalid_argument("initial point has wrong dimension");
  const std::size_t steps = step_count(t_end, h);
  const CompiledField cf(f);
  Rk4 rk(cf);
  Trajectory traj{f.space(), h, {0.0}, {x0}};
  traj.t.reserve(steps + 1);
  traj.x.reserve(steps + 1);
  std::vector<double> x = x0;
  double t = 0.0;
  for (std::size_t s = 0; s < steps; ++s) {
    const double dt = std::min(h, t_end - t);
    rk.step(x, dt);
    if (!finite(x)) throw IntegrationError("state became non-finite after t = " + std::to_string(t), t);
    t = s + 1 == steps ? t_end : static_cast<double>(s + 1) * h;
    traj.t.push_back(t);
    traj.x.push_back(x);
  }
  return traj;
}

std::vector<double> flow_to(const CompiledField& f, std::vector<double> x, double t_end, double h) {
  const std::size_t steps = step_count(t_end, h);
  Rk4 rk(f);
  double t = 0.0;
  for (std::size_t s = 0; s < steps; ++s) {
    const double dt = std::min(h, t_end - t);
    rk.step(x, dt);
    if (!finite(x)) throw IntegrationError("state became non-finite after t = " + std::to_string(t), t);
    t += dt;
  }
  return x;
}

LaxMatrix lax_rhs(const SystemId& sys, int k) {
  if (k < 0) throw std::invalid_argument("Lax flow index must be non-negative");
  const LaxMatrix L = lax(sys);
  return commutator(L, matrix_power(L, k).strictly_upper());
}

namespace {

/// For each coordinate, a Lax entry equal to +-coordinate.
std::vector<std::pair<std::pair<std::size_t, std::size_t>, Rational>> coordinate_entries(const SystemId& sys) {
  const LaxMatrix L = lax(sys);
  const auto& space = L.space();
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, Rational>> where;
  for (std::size_t v = 0; v < space->size(); ++v) {
    const Poly x = Poly::var(space, v);
    bool found = false;
    for (std::size_t i = 0; i < L.size() && !found; ++i)
      for (std::size_t j = 0; j < L.size() && !found; ++j) {
        if (L(i, j) == x) {
          where.push_back({{i, j}, Rational(1)});
          found = true;
        } else if (L(i, j) == -x) {
          where.push_back({{i, j}, Rational(-1)});
          found = true;
        }
      }
    if (!found) throw std::logic_error("coordinate " + space->name(v) + " does not appear in the Lax matrix");
  }
  return where;
}

}  // namespace

Field lax_field(const SystemId& sys, int k) {
  const LaxMatrix R = lax_rhs(sys, k);
  Field f(R.space());
  const auto where = coordinate_entries(sys);
  for (std::size_t v = 0; v < where.size(); ++v) f[v] = R(where[v].first.first, where[v].first.second) * where[v].second;
  return f;
}

std::vector<std::pair<std::size_t, std::size_t>> lax_template_defects(const SystemId& sys, int k) {
  const LaxMatrix L = lax(sys);
  const LaxMatrix R = lax_rhs(sys, k);
  const Field f = lax_field(sys, k);
  std::vector<std::pair<std::size_t, std::size_t>> bad;
  for (std::size_t i = 0; i < L.size(); ++i)
    for (std::size_t j = 0; j < L.size(); ++j)
      if (R(i, j) != directional_action(f, L(i, j))) bad.emplace_back(i, j);
  return bad;
}

std::vector<int> monitored_hamiltonians(const SystemId& sys) {
  std::vector<int> ks;
  const int top = std::min<int>(static_cast<int>(sys.lax_size()), 6);
  for (int k = 1; k <= top; ++k)
    if (!hamiltonian(sys, k).is_zero()) ks.push_back(k);
  return ks;
}

std::vector<double> charpoly(const std::vector<std::vector<double>>& A) {
  const std::size_t n = A.size();
  std::vector<double> c(n);
  std::vector<std::vector<double>> M(n, std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> AM(n, std::vector<double>(n));
  double prev = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{k-1} I, c_k = -tr(A M_k) / k
    for (std::size_t i = 0; i < n; ++i) M[i][i] += prev;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) s += A[i][l] * M[l][j];
        AM[i][j] = s;
      }
    double tr = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += AM[i][i];
    c[k - 1] = -tr / static_cast<double>(k);
    prev = c[k - 1];
    M = AM;
  }
  return c;
}

DriftReport monitors(const Trajectory& traj, const SystemId& sys) {
  if (!same_space(traj.space, variables(sys))) throw std::invalid_argument("trajectory does not belong to this system");
  DriftReport r;
  r.ks = monitored_hamiltonians(sys);
  std::vector<CompiledPoly> hs;
  for (int k : r.ks) hs.emplace_back(hamiltonian(sys, k));
  const LaxMatrix L = lax(sys);
  std::vector<std::vector<CompiledPoly>> entries(L.size());
  for (std::size_t i = 0; i < L.size(); ++i)
    for (std::size_t j = 0; j < L.size(); ++j) entries[i].emplace_back(L(i, j));

  r.h_drift.assign(hs.size(), {});
  r.charpoly_drift.assign(L.size(), {});
  if (traj.x.empty()) return r;
  std::vector<double> h0;
  for (const auto& h : hs) h0.push_back(h(traj.x.front()));
  const std::vector<double> c0 = charpoly(numeric_matrix(entries, traj.x.front()));
  for (const auto& x : traj.x) {
    for (std::size_t k = 0; k < hs.size(); ++k) {
      const double d = std::abs(hs[k](x) - h0[k]);
      r.h_drift[k].push_back(d);
      r.max_h_drift = std::max(r.max_h_drift, d);
    }
    const std::vector<double> c = charpoly(numeric_matrix(entries, x));
    for (std::size_t k = 0; k < c.size(); ++k) {
      const double d = std::abs(c[k] - c0[k]);
      r.charpoly_drift[k].push_back(d);
      r.max_charpoly_drift = std::max(r.max_charpoly_drift, d);
    }
  }
  return r;
}

double commutation_check(const std::vector<Field>& flows, const std::vector<double>& x0, double s, double t,
                         double h) {
  if (flows.size() < 2) throw std::invalid_argument("commutation check needs at least two flows");
  std::vector<CompiledField> cf;
  for (const auto& f : flows) {
    if (f.dim() != x0.size()) throw std::invalid_argument("flow dimension does not match the initial point");
    cf.emplace_back(f);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < cf.size(); ++i)
    for (std::size_t j = i + 1; j < cf.size(); ++j) {
      const auto p = flow_to(cf[i], flow_to(cf[j], x0, t, h), s, h);
      const auto q = flow_to(cf[j], flow_to(cf[i], x0, s, h), t, h);
      for (std::size_t k = 0; k < p.size(); ++k) worst = std::max(worst, std::abs(p[k] - q[k]));
    }
  return worst;
}

void write_csv(std::ostream& os, const Trajectory& traj, const DriftReport& report, const SystemId& sys,
               std::size_t every) {
  if (every == 0) throw std::invalid_argument("decimation factor must be positive");
  const auto& names = variables(sys)->names();
  os << "t";
  for (const auto& n : names) os << ',' << n;
  for (int k : report.ks) os << ",H" << k;
  for (std::size_t c = 0; c < report.charpoly_drift.size(); ++c) os << ",dc" << c + 1;
  os << '\n';
  std::vector<CompiledPoly> hs;
  for (int k : report.ks) hs.emplace_back(hamiltonian(sys, k));
  const auto old = os.precision(17);
  for (std::size_t s = 0; s < traj.x.size(); ++s) {
    if (s % every != 0 && s + 1 != traj.x.size()) continue;
    os << traj.t[s];
    for (double v : traj.x[s]) os << ',' << v;
    for (const auto& h : hs) os << ',' << h(traj.x[s]);
    for (const auto& d : report.charpoly_drift) os << ',' << (s < d.size() ? d[s] : 0.0);
    os << '\n';
  }
  os.precision(old);
}

std::vector<double> random_point(const SystemId& sys, std::uint64_t seed, double lo_a, double hi_a, double lo_b,
                                 double hi_b) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ua(lo_a, hi_a);
  std::uniform_real_distribution<double> ub(lo_b, hi_b);
  const auto& space = variables(sys);
  std::vector<double> x;
  for (const auto& name : space->names()) x.push_back(name[0] == 'a' ? ua(rng) : ub(rng));
  return x;
}

}  // namespace hamlat
