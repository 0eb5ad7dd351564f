#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tverberg/errors.hpp"
#include "tverberg/rational.hpp"

namespace tverberg::lp {

using Matrix = std::vector<std::vector<Rational>>;

/// Finds x >= 0 with A x = b, or reports infeasibility, in exact arithmetic.
///
/// Phase-one simplex: one artificial variable per row, minimize their sum.
/// Bland's rule (smallest entering index, smallest leaving basic index on
/// ratio ties) guarantees termination. Redundant rows are harmless; their
/// artificials stay basic at zero.
inline std::optional<std::vector<Rational>> find_nonnegative_solution(const Matrix& A,
                                                                      const std::vector<Rational>& b) {
  const std::size_t m = A.size();
  if (b.size() != m) throw InvalidInput("lp: row count mismatch between A and b");
  const std::size_t n = m == 0 ? 0 : A.front().size();
  for (const auto& row : A)
    if (row.size() != n) throw InvalidInput("lp: ragged constraint matrix");
  if (m == 0) return std::vector<Rational>(n, Rational(0));

  const std::size_t cols = n + m;  // originals, then artificials
  const std::size_t rhs = cols;
  Matrix T(m + 1, std::vector<Rational>(cols + 1, Rational(0)));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = b[i] < 0;
    for (std::size_t j = 0; j < n; ++j) T[i][j] = flip ? Rational(-A[i][j]) : A[i][j];
    T[i][rhs] = flip ? Rational(-b[i]) : b[i];
    T[i][n + i] = 1;
    basis[i] = n + i;
  }
  // Reduced costs of the phase-one objective (sum of artificials).
  Rational& objective = T[m][rhs];
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) T[m][j] -= T[i][j];
    objective -= T[i][rhs];
  }

  while (true) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j) {
      if (T[m][j] < 0) {
        enter = j;
        break;
      }
    }
    if (enter == cols) break;

    std::size_t leave = m;
    Rational best_ratio;
    for (std::size_t i = 0; i < m; ++i) {
      if (T[i][enter] <= 0) continue;
      Rational ratio = T[i][rhs] / T[i][enter];
      if (leave == m || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = std::move(ratio);
      }
    }
    if (leave == m)
      throw InternalConsistencyError("lp: phase-one objective unbounded (impossible)");

    const Rational pivot = T[leave][enter];
    for (auto& v : T[leave])
      if (v != 0) v /= pivot;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave || T[i][enter] == 0) continue;
      const Rational factor = T[i][enter];
      for (std::size_t j = 0; j <= cols; ++j)
        if (T[leave][j] != 0) T[i][j] -= factor * T[leave][j];
    }
    basis[leave] = enter;
  }

  if (objective != 0) return std::nullopt;
  std::vector<Rational> x(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) x[basis[i]] = T[i][rhs];
  return x;
}

}  // namespace tverberg::lp
