// Fixed-step RK4 integration of lattice flows, Lax right-hand sides and
// conservation monitors.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "hamlat/catalog.hpp"
#include "hamlat/matrix.hpp"
#include "hamlat/poisson.hpp"

namespace hamlat {

/// A rational polynomial field flattened for fast double evaluation.
class CompiledField {
 public:
  explicit CompiledField(const Field& f);
  /// Evaluates several polynomials on a common space at once.
  explicit CompiledField(const std::vector<Poly>& polys);
  std::size_t dim() const { return comps_.size(); }
  void operator()(const std::vector<double>& x, std::vector<double>& out) const;
  std::vector<double> operator()(const std::vector<double>& x) const;

 private:
  struct Term {
    double coeff;
    std::vector<std::pair<std::size_t, int>> factors;
  };
  std::vector<std::vector<Term>> comps_;
};

/// Same flattening for a single polynomial.
class CompiledPoly {
 public:
  explicit CompiledPoly(const Poly& p);
  double operator()(const std::vector<double>& x) const;

 private:
  CompiledField field_;
};

struct Trajectory {
  VarSpacePtr space;
  double h = 0.0;
  std::vector<double> t;
  std::vector<std::vector<double>> x;
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double last_time) : std::runtime_error(what), last_time_(last_time) {}
  double last_valid_time() const { return last_time_; }

 private:
  double last_time_;
};

/// Classical RK4 with step h on [0, t_end]; the last step is shortened to land
/// on t_end. Throws IntegrationError when the state stops being finite.
Trajectory integrate(const Field& f, const std::vector<double>& x0, double t_end, double h);

/// Endpoint only (no storage).
std::vector<double> flow_to(const CompiledField& f, std::vector<double> x, double t_end, double h);

/// [L, (L^k)_+] with (.)_+ the strictly upper-triangular part.
LaxMatrix lax_rhs(const SystemId& sys, int k);

/// Reads x' off lax_rhs at the Lax entries that hold each coordinate.
Field lax_field(const SystemId& sys, int k);

/// Entries (row, col) of lax_rhs that differ from the time derivative of L
/// along lax_field (empty when the Lax equation stays in the phase space).
std::vector<std::pair<std::size_t, std::size_t>> lax_template_defects(const SystemId& sys, int k);

/// Hamiltonians H_k (1 <= k <= min(Lax size, 6)) that are not identically
/// zero on the system.
std::vector<int> monitored_hamiltonians(const SystemId& sys);

/// Characteristic polynomial det(lambda I - M) = lambda^n + c_1 lambda^{n-1}
/// + ... + c_n; returns c_1..c_n (Faddeev-LeVerrier).
std::vector<double> charpoly(const std::vector<std::vector<double>>& M);

struct DriftReport {
  std::vector<int> ks;
  std::vector<std::vector<double>> h_drift;         // [k][step]
  std::vector<std::vector<double>> charpoly_drift;  // [coefficient][step]
  double max_h_drift = 0.0;
  double max_charpoly_drift = 0.0;
};

DriftReport monitors(const Trajectory& traj, const SystemId& sys);

/// Largest component of |Phi^i_s Phi^j_t x0 - Phi^j_t Phi^i_s x0| over pairs
/// i < j.
double commutation_check(const std::vector<Field>& flows, const std::vector<double>& x0, double s, double t,
                         double h);

/// `t,<vars>,<H_k>,<charpoly drifts>`, one row every `every` steps (the last
/// step is always written).
void write_csv(std::ostream& os, const Trajectory& traj, const DriftReport& report, const SystemId& sys,
               std::size_t every = 1);

/// Deterministic initial data: a_i uniform in [lo_a, hi_a], b_i uniform in
/// [lo_b, hi_b].
std::vector<double> random_point(const SystemId& sys, std::uint64_t seed, double lo_a, double hi_a, double lo_b,
                                 double hi_b);

}  // namespace hamlat
