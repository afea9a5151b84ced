// Root-system data and the generalized Volterra systems built from it:
// the system in b_i, the edge variables x_ij and their Lotka-Volterra form.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hamlat/poisson.hpp"

namespace hamlat {

enum class RootType { A, B, C, D };

RootType parse_root_type(std::string_view text);
char to_char(RootType t);

/// Simple roots in the standard Euclidean realization, the lowest root and
/// the marks. The Euclidean dot product stands in for the Killing form; only
/// its zero pattern and the integer relation are used.
struct RootData {
  RootType type = RootType::A;
  int n = 1;
  std::vector<std::vector<int>> simple;  // omega_1..omega_n
  std::vector<int> lowest;               // omega_0
  std::vector<std::vector<Rational>> gram;
  std::vector<int> marks;  // k_0..k_n, k_0 = 1
  std::size_t root_count = 0;
};

/// Marks are found by generating all roots with simple reflections, taking
/// the root of minimal height and solving k_0 w_0 + sum k_i w_i = 0 exactly.
RootData root_data(RootType type, int n);

/// Residual sum_i k_i w_i (including i = 0); all zero for valid data.
std::vector<int> mark_relation_residual(const RootData& rd);

/// c_ij in {-1, 0, 1}: 0 on the diagonal or when <w_i,w_j> = 0, otherwise
/// the sign of j - i.
std::vector<std::vector<int>> sign_matrix(const RootData& rd);

/// Variables b1..bn.
VarSpacePtr b_space(const RootData& rd);

/// db_i/dt = -sum_j k_j c_ij / b_j (Laurent polynomials).
Field b_system_rhs(const RootData& rd);

struct Edge {
  std::size_t i;  // 0-based, i < j
  std::size_t j;
  std::string name;  // "x1_2"
};

std::vector<Edge> edges(const RootData& rd);
VarSpacePtr x_space(const RootData& rd);

/// Full antisymmetric x matrix at a point; throws std::domain_error if some
/// b_i is zero.
std::vector<std::vector<Rational>> x_transform(const RootData& rd, const std::vector<Rational>& b);
std::vector<std::vector<double>> x_transform(const RootData& rd, const std::vector<double>& b);

/// x_ij = c_ij / (b_i b_j) as Laurent polynomials in the b's, one per edge.
std::vector<Poly> x_of_b(const RootData& rd);

/// dx_ij/dt = x_ij sum_s k_s (x_is + x_js) on the edge variables.
Field x_system_rhs(const RootData& rd);

/// d/dt x_ij(b) along the b-system minus the x-system composed with x(b);
/// empty when the chain rule identity holds.
std::vector<std::string> chain_rule_defects(const RootData& rd);

/// Lotka-Volterra interaction matrix M with X_e = x_e sum_f M_ef x_f.
/// Throws std::invalid_argument if the field does not have that form.
std::vector<std::vector<Rational>> lv_matrix(const Field& f);

/// A relabelling and diagonal scaling a_{order[e]} = scale[e] * x_e taking
/// the edge system to the target.
struct LvMatch {
  std::vector<std::size_t> order;
  std::vector<Rational> scale;
};

/// Tries the identity and the reversed edge order; returns the first
/// consistent scaling.
std::optional<LvMatch> match_lotka_volterra(const Field& edge_system, const Field& target);

nlohmann::json to_json(const RootData& rd);

}  // namespace hamlat
