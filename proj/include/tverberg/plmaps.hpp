#pragma once

// Simplexwise-linear maps K -> R^d with exact rational vertex images, joins
// of such maps, and the exact checker for the almost r-embedding property:
// no r pairwise disjoint faces whose images share a common point.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "tverberg/complexes.hpp"
#include "tverberg/errors.hpp"
#include "tverberg/exact_lp.hpp"
#include "tverberg/random.hpp"
#include "tverberg/rational.hpp"

namespace tverberg {

using Point = std::vector<Rational>;

class PLMap {
 public:
  PLMap() = default;

  /// `coords[v]` is the image of vertex v and must have `d` entries.
  PLMap(SimplicialComplex complex, int d, std::vector<Point> coords)
      : complex_(std::move(complex)), d_(d), coords_(std::move(coords)) {
    if (d_ < 0) throw InvalidInput("map: negative target dimension");
    if (coords_.size() != static_cast<std::size_t>(complex_.num_vertices()))
      throw InvalidInput("map: expected " + std::to_string(complex_.num_vertices()) +
                         " vertex images, got " + std::to_string(coords_.size()));
    for (const auto& p : coords_)
      if (p.size() != static_cast<std::size_t>(d_))
        throw InvalidInput("map: vertex image has wrong dimension");
  }

  const SimplicialComplex& complex() const { return complex_; }
  int d() const { return d_; }
  const std::vector<Point>& coords() const { return coords_; }
  const Point& image(int v) const { return coords_.at(static_cast<std::size_t>(v)); }

 private:
  SimplicialComplex complex_;
  int d_ = 0;
  std::vector<Point> coords_;
};

/// Exact affine combination sum_j bary[j] * f(face[j]).
inline Point eval(const PLMap& f, const Face& face, std::span<const Rational> bary) {
  if (bary.size() != face.size())
    throw InvalidInput("eval: need one barycentric coordinate per face vertex");
  if (!f.complex().contains(face)) throw InvalidInput("eval: face not in the complex");
  Rational sum = 0;
  for (const auto& c : bary) {
    if (c < 0) throw InvalidInput("eval: negative barycentric coordinate");
    sum += c;
  }
  if (sum != 1) throw InvalidInput("eval: barycentric coordinates must sum to 1");
  Point out(static_cast<std::size_t>(f.d()), Rational(0));
  for (std::size_t j = 0; j < face.size(); ++j) {
    if (bary[j] == 0) continue;
    const Point& p = f.image(face[j]);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += bary[j] * p[c];
  }
  return out;
}

/// Common point of several convex hulls, with convex coefficients per hull.
struct IntersectionCore {
  Point point;
  std::vector<std::vector<Rational>> barycentric;
};

/// Decides whether conv(point_sets[0]) n ... n conv(point_sets[r-1]) is
/// nonempty by exact LP feasibility over all barycentric coefficients.
inline std::optional<IntersectionCore> simplices_intersect(
    const std::vector<std::vector<Point>>& point_sets, int d) {
  if (point_sets.size() < 2) throw InvalidInput("simplices_intersect: need at least two sets");
  std::size_t nvars = 0;
  for (const auto& set : point_sets) {
    if (set.empty()) throw InvalidInput("simplices_intersect: empty point set");
    for (const auto& p : set)
      if (p.size() != static_cast<std::size_t>(d))
        throw InvalidInput("simplices_intersect: point dimension mismatch");
    nvars += set.size();
  }
  const std::size_t r = point_sets.size();
  const std::size_t du = static_cast<std::size_t>(d);
  lp::Matrix A;
  std::vector<Rational> b;
  std::vector<std::size_t> offset(r);
  for (std::size_t i = 0, o = 0; i < r; o += point_sets[i].size(), ++i) offset[i] = o;

  // Convexity: each hull's coefficients sum to 1.
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<Rational> row(nvars, Rational(0));
    for (std::size_t j = 0; j < point_sets[i].size(); ++j) row[offset[i] + j] = 1;
    A.push_back(std::move(row));
    b.emplace_back(1);
  }
  // Agreement: hull 0's point equals hull i's point, coordinatewise.
  for (std::size_t i = 1; i < r; ++i) {
    for (std::size_t c = 0; c < du; ++c) {
      std::vector<Rational> row(nvars, Rational(0));
      for (std::size_t j = 0; j < point_sets[0].size(); ++j) row[offset[0] + j] = point_sets[0][j][c];
      for (std::size_t j = 0; j < point_sets[i].size(); ++j)
        row[offset[i] + j] -= point_sets[i][j][c];
      A.push_back(std::move(row));
      b.emplace_back(0);
    }
  }

  auto x = lp::find_nonnegative_solution(A, b);
  if (!x) return std::nullopt;
  IntersectionCore core;
  core.barycentric.resize(r);
  for (std::size_t i = 0; i < r; ++i)
    core.barycentric[i].assign(x->begin() + static_cast<std::ptrdiff_t>(offset[i]),
                               x->begin() + static_cast<std::ptrdiff_t>(offset[i] + point_sets[i].size()));
  core.point.assign(du, Rational(0));
  for (std::size_t j = 0; j < point_sets[0].size(); ++j)
    for (std::size_t c = 0; c < du; ++c) core.point[c] += core.barycentric[0][j] * point_sets[0][j][c];
  return core;
}

/// A tuple of disjoint faces whose images share `point`.
struct IntersectionWitness {
  DisjointTuple tuple;
  Point point;
  std::vector<std::vector<Rational>> barycentric;  // per face, aligned with its vertices
};

/// Re-verifies every exact identity of a witness against the map, from scratch.
inline bool verify_witness(const PLMap& f, const IntersectionWitness& w) {
  const auto& faces = w.tuple.faces;
  if (faces.size() < 2 || w.barycentric.size() != faces.size()) return false;
  if (w.point.size() != static_cast<std::size_t>(f.d())) return false;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    if (!f.complex().contains(faces[i])) return false;
    for (std::size_t j = i + 1; j < faces.size(); ++j)
      if (!faces_disjoint(faces[i], faces[j])) return false;
    const auto& lam = w.barycentric[i];
    if (lam.size() != faces[i].size()) return false;
    Rational sum = 0;
    Point p(static_cast<std::size_t>(f.d()), Rational(0));
    for (std::size_t j = 0; j < lam.size(); ++j) {
      if (lam[j] < 0) return false;
      sum += lam[j];
      const Point& img = f.image(faces[i][j]);
      for (std::size_t c = 0; c < p.size(); ++c) p[c] += lam[j] * img[c];
    }
    if (sum != 1 || p != w.point) return false;
  }
  return true;
}

struct CheckOptions {
  unsigned threads = 1;
  /// Only test inclusion-maximal tuples. Sound by monotonicity (a failing
  /// tuple's disjoint supertuples fail too), but the witness reported is then
  /// the first failing maximal tuple rather than the first failing tuple.
  bool maximal_only = false;
};

struct Verdict {
  bool pass = true;
  std::optional<IntersectionWitness> witness;
  std::uint64_t tuples_checked = 0;
};

namespace detail {

inline std::optional<IntersectionWitness> test_tuple(const PLMap& f, const TupleEnumerator& en,
                                                     std::span<const std::size_t> idx) {
  std::vector<std::vector<Point>> sets;
  sets.reserve(idx.size());
  for (auto i : idx) {
    std::vector<Point> pts;
    for (int v : en.face(i)) pts.push_back(f.image(v));
    sets.push_back(std::move(pts));
  }
  auto core = simplices_intersect(sets, f.d());
  if (!core) return std::nullopt;
  return IntersectionWitness{en.tuple(idx), std::move(core->point), std::move(core->barycentric)};
}

inline bool is_maximal_tuple(const SimplicialComplex& K, const TupleEnumerator& en,
                             std::span<const std::size_t> idx) {
  std::vector<bool> used(static_cast<std::size_t>(K.num_vertices()), false);
  for (auto i : idx)
    for (int v : en.face(i)) used[static_cast<std::size_t>(v)] = true;
  for (auto i : idx) {
    for (int v = 0; v < K.num_vertices(); ++v) {
      if (used[static_cast<std::size_t>(v)]) continue;
      Face grown = en.face(i);
      grown.insert(std::upper_bound(grown.begin(), grown.end(), v), v);
      if (K.contains(grown)) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Decides whether f is an almost r-embedding.
///
/// Each Sigma_r orbit of disjoint tuples is tested once, through its
/// increasing-index representative. On failure the witness is the first
/// failing tuple of `disjoint_tuples(K, r)`; this is independent of the
/// thread count.
inline Verdict almost_r_embedding_check(const PLMap& f, int r, const CheckOptions& opts = {}) {
  if (r < 2) throw InvalidInput("almost_r_embedding_check: r must be >= 2");
  const TupleEnumerator en(f.complex());
  const std::size_t nfaces = en.faces().size();
  const unsigned threads = std::max(1U, std::min<unsigned>(opts.threads, static_cast<unsigned>(std::max<std::size_t>(nfaces, 1))));

  std::atomic<std::size_t> next_first{0};
  std::atomic<std::size_t> best_first{std::numeric_limits<std::size_t>::max()};
  std::atomic<std::uint64_t> checked{0};
  std::mutex mu;
  std::optional<IntersectionWitness> best;
  std::size_t best_index = std::numeric_limits<std::size_t>::max();

  auto worker = [&] {
    std::uint64_t local_checked = 0;
    while (true) {
      const std::size_t first = next_first.fetch_add(1);
      if (first >= nfaces || first > best_first.load()) break;
      EnumerationOptions eo;
      eo.unordered = true;
      eo.first_begin = first;
      eo.first_end = first + 1;
      std::optional<IntersectionWitness> found;
      en.for_each(
          r,
          [&](std::span<const std::size_t> idx) {
            if (opts.maximal_only && !detail::is_maximal_tuple(f.complex(), en, idx)) return true;
            ++local_checked;
            found = detail::test_tuple(f, en, idx);
            return !found.has_value();
          },
          eo);
      if (found) {
        std::lock_guard lock(mu);
        if (first < best_index) {
          best_index = first;
          best = std::move(found);
          best_first.store(first);
        }
        break;  // later first indices cannot beat this one
      }
    }
    checked += local_checked;
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  Verdict v;
  v.tuples_checked = checked.load();
  if (best) {
    v.pass = false;
    v.witness = std::move(best);
  }
  return v;
}

/// Linear join: a vertex v of f's complex goes to (f(v), 0, 0) and a vertex w
/// of g's complex to (0, g(w), 1), so lambda x + mu y maps to
/// (lambda f(x), mu g(y), mu).
inline PLMap join_maps(const PLMap& f, const PLMap& g) {
  const int p = f.d();
  const int q = g.d();
  std::vector<Point> coords;
  coords.reserve(f.coords().size() + g.coords().size());
  for (const auto& x : f.coords()) {
    Point y(static_cast<std::size_t>(p + q + 1), Rational(0));
    std::copy(x.begin(), x.end(), y.begin());
    coords.push_back(std::move(y));
  }
  for (const auto& x : g.coords()) {
    Point y(static_cast<std::size_t>(p + q + 1), Rational(0));
    std::copy(x.begin(), x.end(), y.begin() + p);
    y.back() = 1;
    coords.push_back(std::move(y));
  }
  return PLMap(join_complexes(f.complex(), g.complex()), p + q + 1, std::move(coords));
}

/// Delta_n -> R^0.
inline PLMap constant_map(int n) {
  if (n < 0) throw InvalidInput("constant_map: n must be >= 0");
  return PLMap(full_simplex(n), 0, std::vector<Point>(static_cast<std::size_t>(n) + 1));
}

namespace detail {

// Rank of a rational matrix by fraction-exact Gaussian elimination.
inline std::size_t exact_rank(std::vector<std::vector<Rational>> rows) {
  std::size_t rank = 0;
  const std::size_t ncols = rows.empty() ? 0 : rows.front().size();
  for (std::size_t c = 0; c < ncols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t i = rank + 1; i < rows.size(); ++i) {
      if (rows[i][c] == 0) continue;
      const Rational factor = rows[i][c] / rows[rank][c];
      for (std::size_t j = c; j < ncols; ++j) rows[i][j] -= factor * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

}  // namespace detail

/// Points are affinely independent.
inline bool affinely_independent(const std::vector<Point>& pts) {
  if (pts.size() <= 1) return true;
  std::vector<std::vector<Rational>> diffs;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    std::vector<Rational> row(pts[i].size());
    for (std::size_t c = 0; c < row.size(); ++c) row[c] = pts[i][c] - pts[0][c];
    diffs.push_back(std::move(row));
  }
  return detail::exact_rank(std::move(diffs)) == pts.size() - 1;
}

/// Every min(d+1, n) vertex images are affinely independent (hence every
/// smaller subset too).
inline bool in_general_position(const std::vector<Point>& pts, int d) {
  const std::size_t n = pts.size();
  const std::size_t size = std::min(n, static_cast<std::size_t>(d) + 1);
  if (size <= 1) return true;
  std::vector<std::size_t> pick(size);
  for (std::size_t i = 0; i < size; ++i) pick[i] = i;
  while (true) {
    std::vector<Point> subset;
    for (auto i : pick) subset.push_back(pts[i]);
    if (!affinely_independent(subset)) return false;
    std::size_t i = size;
    while (i > 0 && pick[i - 1] == n - size + (i - 1)) --i;
    if (i == 0) return true;
    ++pick[i - 1];
    for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
  }
}

/// Largest vertex count for which random maps are resampled into general position.
inline constexpr int kGeneralPositionMaxVertices = 12;
inline constexpr std::int64_t kRandomNumeratorBound = 100;
inline constexpr std::int64_t kRandomDenominatorBound = 10;

/// Vertex images p/q with p uniform in [-100, 100] and q uniform in [1, 10],
/// drawn from Rng(seed). For complexes with at most 12 vertices the whole
/// configuration is redrawn until it is in general position.
inline PLMap random_rational_map(const SimplicialComplex& K, int d, std::uint64_t seed) {
  if (d < 0) throw InvalidInput("random_rational_map: d must be >= 0");
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(K.num_vertices());
  for (int attempt = 0; attempt < 10'000; ++attempt) {
    std::vector<Point> coords(n, Point(static_cast<std::size_t>(d)));
    for (auto& p : coords)
      for (auto& x : p) {
        const auto num = rng.uniform_int(-kRandomNumeratorBound, kRandomNumeratorBound);
        const auto den = rng.uniform_int(1, kRandomDenominatorBound);
        x = Rational(num, den);
      }
    if (K.num_vertices() > kGeneralPositionMaxVertices || in_general_position(coords, d))
      return PLMap(K, d, std::move(coords));
  }
  throw NonConvergence("random_rational_map: no general-position sample found");
}

}  // namespace tverberg
