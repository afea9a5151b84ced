// Exact Gaussian elimination over Q or Q[i].
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "hamlat/scalar.hpp"

namespace hamlat::detail {

/// Solves A y = rhs (A is rows x cols). Returns nullopt when the system is
/// inconsistent; free variables are set to zero. `rank` receives rank(A).
template <class K>
std::optional<std::vector<K>> solve_linear(std::vector<std::vector<K>> A, std::vector<K> rhs, std::size_t& rank) {
  const std::size_t rows = A.size();
  const std::size_t cols = rows ? A[0].size() : 0;
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && is_zero(A[p][c])) ++p;
    if (p == rows) continue;
    std::swap(A[p], A[r]);
    std::swap(rhs[p], rhs[r]);
    for (std::size_t q = 0; q < rows; ++q) {
      if (q == r || is_zero(A[q][c])) continue;
      K f = A[q][c];
      f /= A[r][c];
      for (std::size_t k = c; k < cols; ++k) {
        K t = f;
        t *= A[r][k];
        A[q][k] -= t;
      }
      K t = f;
      t *= rhs[r];
      rhs[q] -= t;
    }
    pivot_col.push_back(c);
    ++r;
  }
  rank = r;
  for (std::size_t q = r; q < rows; ++q)
    if (!is_zero(rhs[q])) return std::nullopt;
  std::vector<K> y(cols, K(0));
  for (std::size_t q = 0; q < r; ++q) {
    y[pivot_col[q]] = rhs[q];
    y[pivot_col[q]] /= A[q][pivot_col[q]];
  }
  return y;
}

}  // namespace hamlat::detail
