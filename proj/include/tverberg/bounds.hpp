#pragma once

// Dimension bounds for almost r-embeddings of simplices and skeleta, and the
// arithmetic consistency checks tying them together. All integer arithmetic;
// ceilings use (a + b - 1) / b for positive operands.

#include <cstdint>
#include <string>

#include "tverberg/errors.hpp"
#include "tverberg/rational.hpp"

namespace tverberg::bounds {

using Int = std::int64_t;

namespace detail {

inline Int ceil_div(Int a, Int b) {
  // b > 0; a may be any sign
  if (a >= 0) return (a + b - 1) / b;
  return -((-a) / b);
}

inline void require(bool condition, const char* what) {
  if (!condition) throw InvalidInput(what);
}

}  // namespace detail

/// N = (d+1)r - r*ceil((d+2)/(r+1)) - 2: the simplex dimension admitting an
/// almost r-embedding into R^d when r is not a prime power.
inline Int tverberg_N(Int r, Int d) {
  detail::require(r >= 2 && d >= 1, "tverberg_N: need r >= 2, d >= 1");
  return (d + 1) * r - r * detail::ceil_div(d + 2, r + 1) - 2;
}

/// (d+1)(r-1), the classical counterexample dimension.
inline Int classic_N(Int r, Int d) {
  detail::require(r >= 2 && d >= 1, "classic_N: need r >= 2, d >= 1");
  return (d + 1) * (r - 1);
}

struct JoinPower {
  Int simplex_dim = 0;
  Int ambient_dim = 0;
  friend bool operator==(const JoinPower&, const JoinPower&) = default;
};

/// k-fold join power: Delta_a -> R^d becomes Delta_{k(a+1)-1} -> R^{k(d+1)-1}.
inline JoinPower bfz_join_power(Int a, Int d, Int k) {
  detail::require(a >= 0 && d >= 0 && k >= 1, "bfz_join_power: need a, d >= 0 and k >= 1");
  return {k * (a + 1) - 1, k * (d + 1) - 1};
}

struct Estimate {
  Rational value;
  bool approximate = true;  // the true integer is only known to be "close to" value
};

/// (d+1)r - (r + 1/2)(d+1)/(r+1), exactly.
inline Estimate frick_F_estimate(Int r, Int d) {
  detail::require(r >= 2 && d >= 1, "frick_F_estimate: need r >= 2, d >= 1");
  const Rational dd(d + 1);
  const Rational rr(r);
  return {dd * rr - (rr + Rational(1, 2)) * dd / (rr + 1), true};
}

/// k + ceil((k+3)/r): every k-complex almost r-embeds here (r not a prime power).
inline Int vkf_dim(Int k, Int r) {
  detail::require(k >= 0 && r >= 2, "vkf_dim: need k >= 0, r >= 2");
  return k + detail::ceil_div(k + 3, r);
}

/// k + ceil((k+1)/(r-1)): general-position dimension for k-complexes.
inline Int general_position_dim(Int k, Int r) {
  detail::require(k >= 0 && r >= 2, "general_position_dim: need k >= 0, r >= 2");
  return k + detail::ceil_div(k + 1, r - 1);
}

/// (k+2)r - 2.
inline Int constraint_N(Int k, Int r) {
  detail::require(k >= 0 && r >= 2, "constraint_N: need k >= 0, r >= 2");
  return (k + 2) * r - 2;
}

/// rd >= (r+1)k + 3.
inline bool mw_codimension_ok(Int r, Int d, Int k) {
  detail::require(r >= 0 && d >= 0 && k >= 0, "mw_codimension_ok: arguments must be >= 0");
  return r * d >= (r + 1) * k + 3;
}

struct Theorem1Decomposition {
  Int k = 0;               // skeleton dimension d - 1 - ceil((d+2)/(r+1))
  Int vkf_target = 0;      // d - 1, the dimension the skeleton is embedded in
  Int vkf_required = 0;    // vkf_dim(k, r) <= vkf_target
  Int constraint = 0;      // constraint_N(k, r) == tverberg_N(r, d)
  bool codimension_ok = false;  // mw_codimension_ok(r, vkf_target, k)
};

/// Reduces the simplex bound in R^d to the skeleton bound in R^{d-1}.
/// Throws InternalConsistencyError if either link of the chain fails.
inline Theorem1Decomposition theorem1_decomposition(Int r, Int d) {
  detail::require(r >= 2 && d >= 3, "theorem1_decomposition: need r >= 2, d >= 3");
  Theorem1Decomposition out;
  out.k = d - 1 - detail::ceil_div(d + 2, r + 1);
  out.vkf_target = d - 1;
  if (out.k < 0)
    throw InternalConsistencyError("theorem1_decomposition: negative k for r=" +
                                   std::to_string(r) + " d=" + std::to_string(d));
  out.vkf_required = vkf_dim(out.k, r);
  out.constraint = constraint_N(out.k, r);
  out.codimension_ok = mw_codimension_ok(r, out.vkf_target, out.k);
  if (out.vkf_target < out.vkf_required)
    throw InternalConsistencyError("theorem1_decomposition: d-1 < vkf_dim(k,r) for r=" +
                                   std::to_string(r) + " d=" + std::to_string(d));
  if (out.constraint != tverberg_N(r, d))
    throw InternalConsistencyError("theorem1_decomposition: constraint_N != tverberg_N for r=" +
                                   std::to_string(r) + " d=" + std::to_string(d));
  return out;
}

struct CorollaryA {
  Int d = 0;
  Int target_dim = 0;
  Int N = 0;
};

/// d = (r+1)q - 1 with q >= r+2: Delta_{(d+1)(r-1)} almost r-embeds in R^{d-1}.
inline CorollaryA corollary_a_check(Int r, Int q) {
  detail::require(r >= 2, "corollary_a_check: need r >= 2");
  if (q < r + 2)
    throw InvalidInput("corollary_a_check: need q >= r+2, got q=" + std::to_string(q) +
                       " r=" + std::to_string(r));
  CorollaryA out;
  out.d = (r + 1) * q - 1;
  out.target_dim = out.d - 1;
  out.N = (out.d + 1) * (r - 1);
  if (out.d * r - r * q - 2 < (r + 1) * q * (r - 1))
    throw InternalConsistencyError("corollary_a_check: inequality fails for r=" +
                                   std::to_string(r) + " q=" + std::to_string(q));
  if (tverberg_N(r, out.target_dim) < out.N)
    throw InternalConsistencyError("corollary_a_check: tverberg_N(r, d-1) < N");
  return out;
}

/// d >= (s+2)r^2 and (d+1)(r-1) <= tverberg_N(r, d-s).
inline bool corollary_b_check(Int r, Int d, Int s) {
  if (r < 2) return false;
  if (d < (s + 2) * r * r) return false;
  if (d - s < 1) return false;
  return (d + 1) * (r - 1) <= tverberg_N(r, d - s);
}

}  // namespace tverberg::bounds
