// Moser's squaring construction for the B_n-Volterra lattice in the
// variables a_i = -2 x_i^2: the symmetric x-Lax matrix, its square, the two
// parity blocks and the Toda systems they carry.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hamlat/catalog.hpp"
#include "hamlat/matrix.hpp"
#include "hamlat/poisson.hpp"

namespace hamlat {

/// x1..xn.
VarSpacePtr x_variables(int n);

/// Symmetric N x N matrix (N = 2n+1) with super- and subdiagonal
/// (x1..xn, I*xn..I*x1). Throws std::invalid_argument for even N or N < 3.
GMatrix x_lax(int N);

/// Checks L_B(i,i+1) L_B(i+1,i) = -2 L_x(i,i+1) L_x(i+1,i) under a_i = -2 x_i^2
/// for the volterra-b Lax matrix, so L_B is conjugate to sqrt(-2) L_x by a
/// diagonal matrix. Returns the offending positions (empty on success).
std::vector<std::size_t> x_lax_product_defects(int n);

enum class XFlowForm {
  corrected,  // x_i' = x_i (x_{i+1}^2 - x_{i-1}^2), x_0 = 0, x_{n+1}^2 := -x_n^2
  printed,    // interior line with the opposite sign (inconsistent with the Lax equation)
};

Field x_flow(int n, XFlowForm form = XFlowForm::corrected);

/// d(-2 x_i^2)/dt along x_flow minus the B_n-Volterra field at a_i = -2 x_i^2;
/// all zero when the flows agree.
std::vector<Poly> x_flow_chain_defects(int n, XFlowForm form = XFlowForm::corrected);

struct JacobiBlock {
  std::string parity;                // "odd_kept" or "even_kept"
  std::vector<std::size_t> indices;  // kept rows/columns, 1-based
  char type = 'B';                   // 'B' for odd size, 'C' for even size
  int rank = 0;
  GMatrix matrix;
  bool real = false;  // every entry has rational coefficients
};

struct MoserSplit {
  int N = 0;
  GMatrix lax;
  GMatrix square;
  bool parity_invariant = false;  // (odd, even) entries of L^2 vanish
  JacobiBlock odd_kept;
  JacobiBlock even_kept;
};

/// Throws std::invalid_argument for even N or N < 5.
MoserSplit square_and_split(int N);

/// Toda variables read off a block: B_i = M(i,i), A_i = M(i,i+1) for
/// i = 1..rank, and the induced o.d.e. expressed in (A_1..A_r, B_1..B_r).
struct JacobiIdentification {
  VarSpacePtr space;             // A1..Ar, B1..Br
  std::vector<GPoly> a_of_x;     // A_i(x)
  std::vector<GPoly> b_of_x;     // B_i(x)
  GField induced;                // on `space`
};

/// Throws std::domain_error when some derivative is not a polynomial in
/// (A, B).
JacobiIdentification identify_jacobi(const JacobiBlock& block, XFlowForm form = XFlowForm::corrected);

/// A scaling a_i = alpha A_i^2, b_i = beta B_i under which the block's x-level
/// flow matches the catalog Toda flow pi_1 dH_2 of the same type and rank.
struct TodaScaling {
  SystemId target;
  Rational alpha;
  Rational beta;
};

std::optional<TodaScaling> match_catalog_toda(const JacobiBlock& block, XFlowForm form = XFlowForm::corrected);

/// At a real point x: the largest distance between the mean of a cluster of
/// block eigenvalues and the mean of as many unused squared eigenvalues of L.
/// Infinity if a block has more eigenvalues than L.
double spectral_mismatch(const MoserSplit& split, const std::vector<double>& x);

nlohmann::json to_json(const JacobiBlock& block);
nlohmann::json to_json(const JacobiIdentification& id);

}  // namespace hamlat
