// Concrete Toda and Volterra structures: Lax operators, Hamiltonians,
// Poisson tensors, special vector fields and symmetry maps.
#pragma once

#include <string>
#include <string_view>

#include "hamlat/linear_map.hpp"
#include "hamlat/matrix.hpp"
#include "hamlat/poisson.hpp"

namespace hamlat {

enum class Family { toda, volterra };
enum class Kind { A, B, C };

/// "toda-a:n" (n x n Lax), "toda-b:n" and "volterra-b:n" (2n+1), "toda-c:n"
/// (2n), "volterra-a:N" (N x N). "volterra-c:n" is accepted as an alias of
/// "volterra-b:n".
struct SystemId {
  Family family = Family::toda;
  Kind kind = Kind::A;
  int n = 1;

  static SystemId parse(std::string_view text);
  static SystemId toda_a(int n) { return {Family::toda, Kind::A, n}; }
  static SystemId toda_b(int n) { return {Family::toda, Kind::B, n}; }
  static SystemId toda_c(int n) { return {Family::toda, Kind::C, n}; }
  static SystemId volterra_a(int N) { return {Family::volterra, Kind::A, N}; }
  static SystemId volterra_b(int n) { return {Family::volterra, Kind::B, n}; }

  std::string str() const;
  /// Size of the Lax matrix.
  std::size_t lax_size() const;

  friend bool operator==(const SystemId&, const SystemId&) = default;
};

/// Sign convention for the higher brackets. `hierarchy` makes the ladder and
/// deformation relations hold; `printed` is the other common
/// convention (the cubic Toda and quartic Volterra brackets differ by an
/// overall sign).
enum class Normalization { hierarchy, printed };

/// Ordered variable list; repeated calls return the same shared object.
VarSpacePtr variables(const SystemId& sys);

LaxMatrix lax(const SystemId& sys);

/// H_k = tr(L^k) / k.
Poly hamiltonian(const SystemId& sys, int k);

/// Supported: toda-a 1,2,3; toda-b 1,3; toda-c 1,3; volterra-a 2,4; volterra-b 4.
Tensor tensor(const SystemId& sys, int k, Normalization norm = Normalization::hierarchy);

enum class Special {
  Z0,                // Euler field (toda-a)
  Z1,                // master symmetry (toda-a)
  flow,              // pi_low dH_k, pi_low the lowest catalog bracket
  bn_volterra_flow,  // the B_n-Volterra system (volterra-b)
  km,                // Kac-van Moerbeke lattice written out (volterra-a)
  toda_system,       // Toda equations written out (toda-a)
};

/// `k` is used by Special::flow only. With Normalization::printed the Z0 and
/// Z1 fields take the unweighted forms (sum of a d/da + b d/db, and
/// coefficient 1+2i), which fail the deformation relations.
Field special_field(const SystemId& sys, Special which, int k = 0,
                    Normalization norm = Normalization::hierarchy);

enum class SymmetryName { psi, phi_toda, phi_c, phi_volterra };

/// psi, phi_toda, phi_c act on toda-a systems (phi_toda needs odd size,
/// phi_c even size); phi_volterra acts on volterra-a of odd size.
LinearMap<Rational> symmetry(SymmetryName name, const SystemId& sys);
SymmetryName parse_symmetry(std::string_view text);
std::string to_string(SymmetryName name);

/// The order-4 map (a_i, b_i) -> (-a_{2n+1-i}, i b_{2n+2-i}) on toda-a:2n+1.
LinearMap<Gaussian> phi_tilde(int n);

/// I_4 = 1/4 sum_{i<n} (2 a_i^2 + a_i a_{i+1}) on volterra-b:n.
Poly i4_hamiltonian(int n);

/// Trivial extension of a Volterra tensor on volterra-a:N to toda-a:N, with
/// every b_i a Casimir.
Tensor extend_to_toda(const Tensor& volterra, int N);

}  // namespace hamlat
