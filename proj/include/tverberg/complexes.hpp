#pragma once

// Abstract simplicial complexes on numbered vertices, joins, and the cells
// sigma_1 x ... x sigma_r of the deleted product (pairwise disjoint faces).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "tverberg/errors.hpp"

namespace tverberg {

/// Sorted, duplicate-free vertex list.
using Face = std::vector<int>;

inline int face_dim(const Face& f) { return static_cast<int>(f.size()) - 1; }

inline bool faces_disjoint(const Face& a, const Face& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return false;
    if (*i < *j)
      ++i;
    else
      ++j;
  }
  return true;
}

/// Order used for face enumeration: by dimension, then lexicographically.
inline bool face_less(const Face& a, const Face& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  /// Canonicalizes `faces`: sorts each, drops duplicates and any face
  /// contained in another. Throws InvalidInput on empty faces, repeated
  /// vertices, or vertices outside [0, num_vertices).
  SimplicialComplex(int num_vertices, std::vector<Face> faces) : num_vertices_(num_vertices) {
    if (num_vertices < 0) throw InvalidInput("complex: negative vertex count");
    for (auto& f : faces) {
      if (f.empty()) throw InvalidInput("complex: empty face");
      std::sort(f.begin(), f.end());
      if (std::adjacent_find(f.begin(), f.end()) != f.end())
        throw InvalidInput("complex: repeated vertex in a face");
      if (f.front() < 0 || f.back() >= num_vertices)
        throw InvalidInput("complex: vertex out of range [0, " + std::to_string(num_vertices) +
                           ")");
    }
    // Larger faces first so containment only needs to look backwards.
    std::sort(faces.begin(), faces.end(), [](const Face& a, const Face& b) {
      if (a.size() != b.size()) return a.size() > b.size();
      return a < b;
    });
    faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
    for (const auto& f : faces) {
      const bool covered = std::any_of(maximal_.begin(), maximal_.end(), [&](const Face& m) {
        return std::includes(m.begin(), m.end(), f.begin(), f.end());
      });
      if (!covered) maximal_.push_back(f);
    }
    std::sort(maximal_.begin(), maximal_.end(), face_less);
  }

  int num_vertices() const { return num_vertices_; }
  const std::vector<Face>& maximal_faces() const { return maximal_; }

  /// -1 for the empty complex.
  int dimension() const {
    int dim = -1;
    for (const auto& m : maximal_) dim = std::max(dim, face_dim(m));
    return dim;
  }

  /// Nonempty sorted `face` is a subset of some maximal face.
  bool contains(const Face& face) const {
    if (face.empty()) return false;
    return std::any_of(maximal_.begin(), maximal_.end(), [&](const Face& m) {
      return std::includes(m.begin(), m.end(), face.begin(), face.end());
    });
  }

  /// Every nonempty face, ordered by (dimension, lex).
  std::vector<Face> faces() const {
    std::set<Face> all;
    for (const auto& m : maximal_) {
      const std::size_t n = m.size();
      if (n >= 63) throw InvalidInput("complex: maximal face too large to enumerate");
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        Face f;
        for (std::size_t i = 0; i < n; ++i)
          if ((mask >> i) & 1U) f.push_back(m[i]);
        all.insert(std::move(f));
      }
    }
    std::vector<Face> out(all.begin(), all.end());
    std::sort(out.begin(), out.end(), face_less);
    return out;
  }

  friend bool operator==(const SimplicialComplex&, const SimplicialComplex&) = default;

 private:
  int num_vertices_ = 0;
  std::vector<Face> maximal_;
};

/// The k-skeleton of Delta_N: all (k+1)-subsets of {0..N}.
inline SimplicialComplex simplex_skeleton(int N, int k) {
  if (N < 0 || k < 0 || k > N)
    throw InvalidInput("simplex_skeleton: need 0 <= k <= N, got N=" + std::to_string(N) +
                       " k=" + std::to_string(k));
  std::vector<Face> faces;
  Face f(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) f[static_cast<std::size_t>(i)] = i;
  while (true) {
    faces.push_back(f);
    int i = k;
    while (i >= 0 && f[static_cast<std::size_t>(i)] == N - k + i) --i;
    if (i < 0) break;
    ++f[static_cast<std::size_t>(i)];
    for (int j = i + 1; j <= k; ++j)
      f[static_cast<std::size_t>(j)] = f[static_cast<std::size_t>(j) - 1] + 1;
  }
  return SimplicialComplex(N + 1, std::move(faces));
}

inline SimplicialComplex full_simplex(int N) { return simplex_skeleton(N, N); }

/// K * L with L's vertices shifted by K.num_vertices(). Maximal faces are
/// unions of one maximal face from each factor.
inline SimplicialComplex join_complexes(const SimplicialComplex& K, const SimplicialComplex& L) {
  const int shift = K.num_vertices();
  std::vector<Face> faces;
  if (K.maximal_faces().empty() || L.maximal_faces().empty()) {
    for (const auto& a : K.maximal_faces()) faces.push_back(a);
    for (const auto& b : L.maximal_faces()) {
      Face f = b;
      for (int& v : f) v += shift;
      faces.push_back(std::move(f));
    }
  } else {
    for (const auto& a : K.maximal_faces()) {
      for (const auto& b : L.maximal_faces()) {
        Face f = a;
        for (int v : b) f.push_back(v + shift);
        faces.push_back(std::move(f));
      }
    }
  }
  return SimplicialComplex(K.num_vertices() + L.num_vertices(), std::move(faces));
}

/// Ordered r-tuple of pairwise vertex-disjoint nonempty faces.
struct DisjointTuple {
  std::vector<Face> faces;
  int dimension() const {
    int sum = 0;
    for (const auto& f : faces) sum += face_dim(f);
    return sum;
  }
  friend bool operator==(const DisjointTuple&, const DisjointTuple&) = default;
  friend auto operator<=>(const DisjointTuple&, const DisjointTuple&) = default;
};

struct EnumerationOptions {
  /// Only tuples with strictly increasing face indices: one representative
  /// per Sigma_r orbit, namely the first one in the ordered enumeration.
  bool unordered = false;
  /// Restricts the first face index to [first_begin, first_end).
  std::size_t first_begin = 0;
  std::size_t first_end = std::numeric_limits<std::size_t>::max();
};

/// Backtracking enumeration of disjoint face tuples.
///
/// Faces are indexed in (dimension, lex) order and tuples are produced in
/// lexicographic order of their index sequences. Vertex sets are tracked as
/// 64-bit masks when the complex has at most 64 vertices, otherwise by
/// sorted-list intersection.
class TupleEnumerator {
 public:
  explicit TupleEnumerator(const SimplicialComplex& K) : faces_(K.faces()) {
    use_masks_ = K.num_vertices() <= 64;
    if (use_masks_) {
      masks_.reserve(faces_.size());
      for (const auto& f : faces_) {
        std::uint64_t m = 0;
        for (int v : f) m |= std::uint64_t{1} << v;
        masks_.push_back(m);
      }
    }
  }

  const std::vector<Face>& faces() const { return faces_; }
  const Face& face(std::size_t index) const { return faces_[index]; }

  DisjointTuple tuple(std::span<const std::size_t> indices) const {
    DisjointTuple t;
    for (auto i : indices) t.faces.push_back(faces_[i]);
    return t;
  }

  /// Calls `visit(std::span<const std::size_t>)` on each tuple of face
  /// indices; `visit` returns false to stop. Returns false iff stopped.
  template <class Visitor>
  bool for_each(int r, Visitor&& visit, const EnumerationOptions& opts = {}) const {
    if (r < 1) throw InvalidInput("tuple enumeration: r must be >= 1");
    std::vector<std::size_t> stack(static_cast<std::size_t>(r));
    if (use_masks_) return recurse_masks(0, 0, stack, visit, opts);
    std::vector<int> used;
    return recurse_lists(0, used, stack, visit, opts);
  }

 private:
  template <class Visitor>
  bool recurse_masks(std::size_t depth, std::uint64_t used, std::vector<std::size_t>& stack,
                     Visitor& visit, const EnumerationOptions& opts) const {
    const std::size_t r = stack.size();
    std::size_t begin = 0;
    std::size_t end = faces_.size();
    if (depth == 0) {
      begin = opts.first_begin;
      end = std::min(end, opts.first_end);
    } else if (opts.unordered) {
      begin = stack[depth - 1] + 1;
    }
    for (std::size_t i = begin; i < end; ++i) {
      if (masks_[i] & used) continue;
      stack[depth] = i;
      if (depth + 1 == r) {
        if (!visit(std::span<const std::size_t>(stack))) return false;
      } else if (!recurse_masks(depth + 1, used | masks_[i], stack, visit, opts)) {
        return false;
      }
    }
    return true;
  }

  template <class Visitor>
  bool recurse_lists(std::size_t depth, std::vector<int>& used, std::vector<std::size_t>& stack,
                     Visitor& visit, const EnumerationOptions& opts) const {
    const std::size_t r = stack.size();
    std::size_t begin = 0;
    std::size_t end = faces_.size();
    if (depth == 0) {
      begin = opts.first_begin;
      end = std::min(end, opts.first_end);
    } else if (opts.unordered) {
      begin = stack[depth - 1] + 1;
    }
    for (std::size_t i = begin; i < end; ++i) {
      if (!faces_disjoint(faces_[i], used)) continue;
      stack[depth] = i;
      if (depth + 1 == r) {
        if (!visit(std::span<const std::size_t>(stack))) return false;
      } else {
        std::vector<int> next;
        next.reserve(used.size() + faces_[i].size());
        std::merge(used.begin(), used.end(), faces_[i].begin(), faces_[i].end(),
                   std::back_inserter(next));
        if (!recurse_lists(depth + 1, next, stack, visit, opts)) return false;
      }
    }
    return true;
  }

  std::vector<Face> faces_;
  std::vector<std::uint64_t> masks_;
  bool use_masks_ = true;
};

/// All ordered r-tuples of pairwise disjoint nonempty faces, in enumeration order.
inline std::vector<DisjointTuple> disjoint_tuples(const SimplicialComplex& K, int r) {
  if (r < 2) throw InvalidInput("disjoint_tuples: r must be >= 2");
  TupleEnumerator en(K);
  std::vector<DisjointTuple> out;
  en.for_each(r, [&](std::span<const std::size_t> idx) {
    out.push_back(en.tuple(idx));
    return true;
  });
  return out;
}

struct DeletedProductStats {
  std::map<int, std::uint64_t> cells_by_dim;  // sum of face dimensions -> count
  std::optional<int> dimension;               // nullopt when there are no cells

  std::uint64_t total() const {
    std::uint64_t n = 0;
    for (const auto& [dim, count] : cells_by_dim) n += count;
    return n;
  }
};

inline DeletedProductStats deleted_product_stats(const SimplicialComplex& K, int r) {
  if (r < 2) throw InvalidInput("deleted_product_stats: r must be >= 2");
  TupleEnumerator en(K);
  std::vector<int> dims;
  dims.reserve(en.faces().size());
  for (const auto& f : en.faces()) dims.push_back(face_dim(f));
  DeletedProductStats stats;
  en.for_each(r, [&](std::span<const std::size_t> idx) {
    int dim = 0;
    for (auto i : idx) dim += dims[i];
    ++stats.cells_by_dim[dim];
    return true;
  });
  if (!stats.cells_by_dim.empty()) stats.dimension = stats.cells_by_dim.rbegin()->first;
  return stats;
}

/// Applies a coordinate permutation: result[perm[i]] = tuple[i].
inline DisjointTuple permute_tuple(const DisjointTuple& t, std::span<const int> perm) {
  DisjointTuple out;
  out.faces.resize(t.faces.size());
  for (std::size_t i = 0; i < t.faces.size(); ++i)
    out.faces[static_cast<std::size_t>(perm[i])] = t.faces[i];
  return out;
}

/// True iff no nontrivial coordinate permutation fixes any enumerated tuple.
/// A permutation fixes (F_1..F_r) only if it maps each position to one holding
/// an equal face, so freeness is equivalent to all F_i being distinct.
inline bool verify_free_action(const SimplicialComplex& K, int r) {
  if (r < 2) throw InvalidInput("verify_free_action: r must be >= 2");
  TupleEnumerator en(K);
  bool free = true;
  en.for_each(r, [&](std::span<const std::size_t> idx) {
    for (std::size_t i = 0; i < idx.size() && free; ++i)
      for (std::size_t j = i + 1; j < idx.size(); ++j)
        if (en.face(idx[i]) == en.face(idx[j])) {
          free = false;
          break;
        }
    return free;
  });
  return free;
}

}  // namespace tverberg
