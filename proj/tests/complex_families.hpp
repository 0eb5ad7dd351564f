#pragma once

// Complexes on n <= 6 vertices encoded as 64-bit face sets: bit m is set when
// the face with vertex mask m is present. Used by the brute-force tests.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <numeric>
#include <unordered_set>
#include <vector>

#include "tverberg/complexes.hpp"

namespace family {

using FaceSet = std::uint64_t;

/// Every downward-closed face set on vertices {0..n-1}, including the empty one.
template <class Fn>
void for_each_complex(int n, Fn&& fn) {
  const int full = (1 << n) - 1;
  std::vector<int> order;
  for (int size = 1; size <= n; ++size)
    for (int m = 1; m <= full; ++m)
      if (std::popcount(static_cast<unsigned>(m)) == size) order.push_back(m);
  auto rec = [&](auto&& self, std::size_t i, FaceSet set) -> void {
    if (i == order.size()) {
      fn(set);
      return;
    }
    const int m = order[i];
    self(self, i + 1, set);
    for (int v = 0; v < n; ++v) {
      const int facet = m & ~(1 << v);
      if ((m >> v & 1) && facet != 0 && !(set >> facet & 1)) return;
    }
    self(self, i + 1, set | (FaceSet{1} << m));
  };
  rec(rec, 0, 0);
}

inline tverberg::SimplicialComplex to_complex(FaceSet set, int n) {
  std::vector<tverberg::Face> maximal;
  for (int m = 1; m < (1 << n); ++m) {
    if (!(set >> m & 1)) continue;
    bool is_max = true;
    for (int v = 0; v < n && is_max; ++v)
      if (!(m >> v & 1) && (set >> (m | 1 << v) & 1)) is_max = false;
    if (!is_max) continue;
    tverberg::Face f;
    for (int v = 0; v < n; ++v)
      if (m >> v & 1) f.push_back(v);
    maximal.push_back(std::move(f));
  }
  return tverberg::SimplicialComplex(n, std::move(maximal));
}

inline FaceSet relabel(FaceSet set, const std::array<int, 6>& perm, int n) {
  FaceSet out = 0;
  for (FaceSet s = set; s; s &= s - 1) {
    const int m = std::countr_zero(s);
    int image = 0;
    for (int v = 0; v < n; ++v)
      if (m >> v & 1) image |= 1 << perm[static_cast<std::size_t>(v)];
    out |= FaceSet{1} << image;
  }
  return out;
}

/// Minimum relabeled face set over all labelings that list vertices by
/// decreasing signature (faces of each size through the vertex). Isomorphic
/// complexes get the same value.
inline FaceSet canonical_form(FaceSet set, int n) {
  std::array<std::uint64_t, 6> sig{};
  for (FaceSet s = set; s; s &= s - 1) {
    const int m = std::countr_zero(s);
    const int size = std::popcount(static_cast<unsigned>(m));
    for (int v = 0; v < n; ++v)
      if (m >> v & 1) sig[static_cast<std::size_t>(v)] += std::uint64_t{1} << (8 * (size - 1));
  }
  std::array<int, 6> byrank{};
  std::iota(byrank.begin(), byrank.begin() + n, 0);
  std::sort(byrank.begin(), byrank.begin() + n, [&](int a, int b) { return sig[a] > sig[b]; });

  std::vector<std::pair<int, int>> groups;  // [begin, end) of equal signatures
  for (int i = 0; i < n;) {
    int j = i;
    while (j < n && sig[byrank[j]] == sig[byrank[i]]) ++j;
    groups.push_back({i, j});
    i = j;
  }
  FaceSet best = ~FaceSet{0};
  std::array<int, 6> order = byrank;
  auto rec = [&](auto&& self, std::size_t g) -> void {
    if (g == groups.size()) {
      std::array<int, 6> perm{};
      for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(order[i])] = i;
      best = std::min(best, relabel(set, perm, n));
      return;
    }
    auto first = order.begin() + groups[g].first;
    auto last = order.begin() + groups[g].second;
    std::sort(first, last);
    do self(self, g + 1);
    while (std::next_permutation(first, last));
  };
  rec(rec, 0);
  return best;
}

/// One face set per isomorphism class of complexes on n vertices.
inline std::vector<FaceSet> isomorphism_classes(int n) {
  std::unordered_set<FaceSet> seen;
  std::vector<FaceSet> reps;
  for_each_complex(n, [&](FaceSet set) {
    const FaceSet c = canonical_form(set, n);
    if (seen.insert(c).second) reps.push_back(c);
  });
  return reps;
}

/// Brute-force ordered tuple counts by dimension sum, over the full product
/// of face lists (no pruning).
inline std::vector<std::uint64_t> brute_tuple_counts(FaceSet set, int r) {
  std::vector<int> faces;
  for (FaceSet s = set; s; s &= s - 1) faces.push_back(std::countr_zero(s));
  std::vector<std::uint64_t> by_dim;
  const std::size_t F = faces.size();
  auto bump = [&](int dim) {
    if (by_dim.size() <= static_cast<std::size_t>(dim)) by_dim.resize(static_cast<std::size_t>(dim) + 1);
    ++by_dim[static_cast<std::size_t>(dim)];
  };
  auto dim_of = [](int m) { return std::popcount(static_cast<unsigned>(m)) - 1; };
  if (r == 2) {
    for (std::size_t a = 0; a < F; ++a)
      for (std::size_t b = 0; b < F; ++b)
        if (!(faces[a] & faces[b])) bump(dim_of(faces[a]) + dim_of(faces[b]));
  } else if (r == 3) {
    for (std::size_t a = 0; a < F; ++a)
      for (std::size_t b = 0; b < F; ++b)
        for (std::size_t c = 0; c < F; ++c)
          if (!(faces[a] & faces[b]) && !(faces[a] & faces[c]) && !(faces[b] & faces[c]))
            bump(dim_of(faces[a]) + dim_of(faces[b]) + dim_of(faces[c]));
  }
  return by_dim;
}

inline std::vector<std::uint64_t> as_vector(const tverberg::DeletedProductStats& stats) {
  std::vector<std::uint64_t> out;
  for (const auto& [dim, count] : stats.cells_by_dim) {
    if (out.size() <= static_cast<std::size_t>(dim)) out.resize(static_cast<std::size_t>(dim) + 1);
    out[static_cast<std::size_t>(dim)] = count;
  }
  return out;
}

}  // namespace family
