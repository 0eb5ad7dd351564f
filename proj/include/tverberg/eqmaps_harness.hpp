#pragma once

// Numerical evidence for the constructed sphere maps: equivariance residuals,
// codomain checks, exact zeros of the homotopy at the orbit centers, local
// degree signs there, a multi-start search for other zeros, and the exact
// winding number in the circle case r = 2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <optional>
#include <thread>
#include <vector>

#include "tverberg/eqmaps.hpp"
#include "tverberg/random.hpp"

namespace tverberg::eqmaps {

/// Worker count from TVERBERG_THREADS, else the hardware concurrency.
inline unsigned thread_count() {
  if (const char* env = std::getenv("TVERBERG_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

/// Runs fn(chunk) for chunk in [0, chunks) across threads. Results must be
/// written per chunk; reductions happen afterwards, so output is independent
/// of the thread count.
template <class Fn>
void parallel_chunks(std::size_t chunks, Fn&& fn) {
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(thread_count(), chunks));
  if (threads <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) fn(c);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t c = t; c < chunks; c += threads) fn(c);
    });
}

inline constexpr std::size_t kChunk = 1024;

inline SpherePoint random_sphere_point(int r, Rng& rng) {
  WVec u(2 * (r - 1));
  for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = rng.normal();
  return normalize(from_coords(u, r));
}

/// Point within chordal distance about `radius` of p, uniform in direction.
inline SpherePoint random_point_near(const SpherePoint& p, double radius, Rng& rng) {
  const WMat frame = tangent_frame(p);
  WVec v(frame.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
  v *= radius * rng.uniform01() / v.norm();
  return move_on_sphere(p, frame, v);
}

/// Every modification layer from the first one to `layer`.
inline std::vector<const MapLayer*> modification_chain(const LayerPtr& layer) {
  std::vector<const MapLayer*> chain;
  for (const MapLayer* l = layer.get(); l && !l->is_identity(); l = l->previous().get())
    chain.push_back(l);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

/// Half the samples uniform on the sphere, half inside a random orbit ball of
/// a random modification layer (where the map differs from the identity).
inline SpherePoint sample_for(const LayerPtr& layer, Rng& rng) {
  const auto chain = modification_chain(layer);
  if (chain.empty() || rng.uniform01() < 0.5) return random_sphere_point(layer->r(), rng);
  const MapLayer* l = chain[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(chain.size()) - 1))];
  const auto masks = orbit_masks(l->r(), l->node().k);
  const auto mask = masks[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(masks.size()) - 1))];
  return random_point_near(orbit_point(l->r(), l->node().k, mask), l->node().radius, rng);
}

/// Adjacent transpositions and the long cycle; together they generate Sigma_r.
inline std::vector<Permutation> generators(int r) {
  std::vector<Permutation> out;
  for (int i = 0; i + 1 < r; ++i) {
    Permutation p(static_cast<std::size_t>(r));
    std::iota(p.begin(), p.end(), 0);
    std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(i) + 1]);
    out.push_back(std::move(p));
  }
  if (r > 2) {
    Permutation cycle(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) cycle[static_cast<std::size_t>(i)] = (i + 1) % r;
    out.push_back(std::move(cycle));
  }
  return out;
}

struct EquivarianceReport {
  double max_residual = 0;        // max |f(sigma x) - sigma f(x)|
  double max_codomain_error = 0;  // max of |row sums| and |norm - 1| of f(x)
  std::size_t samples = 0;
};

inline EquivarianceReport verify_equivariance(const LayerPtr& layer, std::size_t samples,
                                              std::uint64_t seed) {
  const auto gens = generators(layer->r());
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<EquivarianceReport> partial(chunks);
  parallel_chunks(chunks, [&](std::size_t chunk) {
    Rng rng(Rng::substream(seed, chunk));
    auto& rep = partial[chunk];
    const std::size_t end = std::min(samples, (chunk + 1) * kChunk);
    for (std::size_t s = chunk * kChunk; s < end; ++s) {
      const SpherePoint x = sample_for(layer, rng);
      const SpherePoint fx = (*layer)(x);
      rep.max_codomain_error = std::max({rep.max_codomain_error, std::abs(fx.row(0).sum()),
                                         std::abs(fx.row(1).sum()), std::abs(fx.norm() - 1.0)});
      for (const auto& g : gens) {
        const double res = ((*layer)(act(g, x)) - act(g, fx)).norm();
        rep.max_residual = std::max(rep.max_residual, res);
      }
      ++rep.samples;
    }
  });
  EquivarianceReport total;
  for (const auto& p : partial) {
    total.max_residual = std::max(total.max_residual, p.max_residual);
    total.max_codomain_error = std::max(total.max_codomain_error, p.max_codomain_error);
    total.samples += p.samples;
  }
  return total;
}

/// max over orbit centers sigma c of |h_{1/2}(sigma c)|.
inline double max_center_residual(const LayerPtr& layer) {
  if (layer->is_identity()) return 0.0;
  double worst = 0;
  for (const auto& p : orbit(layer->r(), layer->node().k))
    worst = std::max(worst, homotopy_eval(layer, p, 0.5).norm());
  return worst;
}

struct LocalDegreeReport {
  int k = 0;
  Construction construction = Construction::minus;
  int base_local_degree = 0;    // deg of the previous layer at c
  int expected_sign = 0;        // sign(construction) * base_local_degree
  std::vector<int> signs;       // per orbit center, ascending block mask
  bool consistent = false;      // all signs equal
  bool matches_expected = false;
};

/// Signs of the homotopy Jacobian determinant at every (sigma c, 1/2). The
/// degree change of the step is C(r,k) times the common sign.
inline LocalDegreeReport verify_local_degrees(const LayerPtr& layer, double step = kFdStep) {
  if (layer->is_identity()) throw InvalidInput("verify_local_degrees: identity layer");
  LocalDegreeReport rep;
  rep.k = layer->node().k;
  rep.construction = layer->node().construction;
  rep.base_local_degree = local_degree(*layer->previous(), layer->node().center.c, step);
  rep.expected_sign = sign_of(rep.construction) * rep.base_local_degree;
  for (const auto& p : orbit(layer->r(), rep.k))
    rep.signs.push_back(homotopy_local_degree(layer, p, 0.5, step));
  rep.consistent = std::all_of(rep.signs.begin(), rep.signs.end(),
                               [&](int s) { return s == rep.signs.front(); });
  rep.matches_expected = rep.consistent && rep.signs.front() == rep.expected_sign;
  return rep;
}

struct ZeroSearchReport {
  double min_norm = std::numeric_limits<double>::infinity();
  SpherePoint argmin_x;
  double argmin_t = 0;
  std::size_t starts = 0;
};

inline constexpr double kExcludedRadiusFraction = 0.1;
inline constexpr double kExcludedTLow = 0.4;
inline constexpr double kExcludedTHigh = 0.6;
inline constexpr int kNewtonIterations = 25;

namespace detail {

inline bool excluded(const MapLayer& layer, const SpherePoint& x, double t) {
  if (t < kExcludedTLow || t > kExcludedTHigh) return false;
  return (x - layer.nearest_center(x)).norm() < kExcludedRadiusFraction * layer.node().radius;
}

// Damped Newton on h_t(x) = 0 over (t, tangent coordinates), rejecting moves
// into the excluded set. Returns the smallest |h| visited.
inline double local_minimize(const LayerPtr& layer, SpherePoint& x, double& t) {
  double best = layer->homotopy(x, t).norm();
  const double max_step = 0.25 * layer->node().radius;
  constexpr double h = 1e-6;
  for (int iter = 0; iter < kNewtonIterations && best > 1e-14; ++iter) {
    const WMat frame = tangent_frame(x);
    const Eigen::Index n = frame.cols();
    const WVec h0 = to_coords(layer->homotopy(x, t));
    WMat J(n + 1, n + 1);
    const double tp = std::min(1.0, t + h);
    const double tm = std::max(0.0, t - h);
    J.col(0) = (to_coords(layer->homotopy(x, tp)) - to_coords(layer->homotopy(x, tm))) / (tp - tm);
    for (Eigen::Index i = 0; i < n; ++i) {
      WVec v = WVec::Zero(n);
      v(i) = h;
      J.col(i + 1) =
          (to_coords(layer->homotopy(move_on_sphere(x, frame, v), t)) - h0) / h;
    }
    Eigen::FullPivLU<WMat> lu(J);
    WVec delta = lu.isInvertible() ? WVec(-lu.solve(h0)) : WVec(-J.transpose() * h0);
    if (!delta.allFinite() || delta.norm() == 0.0) break;
    if (delta.norm() > max_step) delta *= max_step / delta.norm();

    bool improved = false;
    double alpha = 1.0;
    for (int ls = 0; ls < 10; ++ls, alpha *= 0.5) {
      const double t2 = std::clamp(t + alpha * delta(0), 0.0, 1.0);
      const SpherePoint x2 = move_on_sphere(x, frame, alpha * delta.tail(n));
      if (excluded(*layer, x2, t2)) continue;
      const double val = layer->homotopy(x2, t2).norm();
      if (val < best) {
        best = val;
        x = x2;
        t = t2;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return best;
}

}  // namespace detail

/// Multi-start minimization of |h_t(x)| over the sphere times [0,1], outside
/// the neighborhoods (ball of radius R/10 around sigma c) x [0.4, 0.6] of the
/// expected zeros. Evidence, not proof: a minimum well above zero means no
/// other zero was found.
inline ZeroSearchReport verify_no_spurious_zeros(const LayerPtr& layer, std::size_t starts,
                                                 std::uint64_t seed) {
  ZeroSearchReport total;
  if (layer->is_identity()) {
    total.min_norm = 1.0;
    total.argmin_x = center_point(layer->r(), 1).c;
    total.starts = starts;
    return total;
  }
  const std::size_t chunks = (starts + kChunk - 1) / kChunk;
  std::vector<ZeroSearchReport> partial(chunks);
  parallel_chunks(chunks, [&](std::size_t chunk) {
    Rng rng(Rng::substream(seed, chunk));
    auto& rep = partial[chunk];
    const auto masks = orbit_masks(layer->r(), layer->node().k);
    const std::size_t end = std::min(starts, (chunk + 1) * kChunk);
    for (std::size_t s = chunk * kChunk; s < end; ++s) {
      SpherePoint x;
      double t;
      do {
        if (rng.uniform01() < 0.1) {
          x = random_sphere_point(layer->r(), rng);
        } else {
          const auto mask = masks[static_cast<std::size_t>(
              rng.uniform_int(0, static_cast<std::int64_t>(masks.size()) - 1))];
          x = random_point_near(orbit_point(layer->r(), layer->node().k, mask),
                                layer->node().radius, rng);
        }
        t = rng.uniform01();
      } while (detail::excluded(*layer, x, t));
      const double val = detail::local_minimize(layer, x, t);
      if (val < rep.min_norm) {
        rep.min_norm = val;
        rep.argmin_x = x;
        rep.argmin_t = t;
      }
      ++rep.starts;
    }
  });
  for (auto& p : partial) {
    total.starts += p.starts;
    if (p.min_norm < total.min_norm) {
      total.min_norm = p.min_norm;
      total.argmin_x = p.argmin_x;
      total.argmin_t = p.argmin_t;
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Circle case.

/// For r = 2 the sphere is a circle: rows (cos a, -cos a)/sqrt2, (sin a, -sin a)/sqrt2.
inline SpherePoint circle_point(double angle) {
  SpherePoint x(2, 2);
  const double s = 1.0 / std::numbers::sqrt2;
  x << std::cos(angle) * s, -std::cos(angle) * s, std::sin(angle) * s, -std::sin(angle) * s;
  return x;
}

inline double circle_angle(const SpherePoint& x) { return std::atan2(x(1, 0), x(0, 0)); }

inline constexpr std::size_t kWindingMaxSamples = std::size_t{1} << 20;

/// Degree of a self-map of the r = 2 circle. Starts from 4096 uniform angles
/// and bisects every interval whose image turns by pi/4 or more, or whose
/// endpoint angular speed times its width reaches pi/4 (so a full turn
/// between two samples is not mistaken for none); fails if that needs more
/// than 2^20 samples. The accumulated turning is then an exact multiple of
/// 2 pi up to rounding.
template <class Map>
long winding_number_r2(const Map& f) {
  constexpr double quarter = std::numbers::pi / 4;
  constexpr double h = 1e-7;
  auto wrap = [](double a) {
    while (a > std::numbers::pi) a -= 2 * std::numbers::pi;
    while (a <= -std::numbers::pi) a += 2 * std::numbers::pi;
    return a;
  };
  struct Node {
    double angle;
    double image;
    double speed;
  };
  auto image_at = [&](double a) { return circle_angle(f(circle_point(a))); };
  auto node_at = [&](double a) {
    const double speed = std::abs(wrap(image_at(a + h) - image_at(a - h))) / (2 * h);
    return Node{a, image_at(a), speed};
  };
  std::vector<Node> todo;
  const std::size_t initial = 4096;
  std::size_t samples = initial;
  double total = 0;
  for (std::size_t i = 0; i < initial; ++i) {
    const double a0 = 2 * std::numbers::pi * static_cast<double>(i) / initial;
    const double a1 = 2 * std::numbers::pi * static_cast<double>(i + 1) / initial;
    // depth-first refinement of [a0, a1]
    todo.clear();
    todo.push_back(node_at(a1));
    Node left = node_at(a0);
    while (!todo.empty()) {
      const Node right = todo.back();
      const double step = wrap(right.image - left.image);
      const double width = right.angle - left.angle;
      if (std::abs(step) < quarter && std::max(left.speed, right.speed) * width < quarter) {
        total += step;
        left = right;
        todo.pop_back();
        continue;
      }
      if (++samples > kWindingMaxSamples)
        throw NonConvergence("winding_number_r2: refinement exceeded 2^20 samples");
      todo.push_back(node_at(0.5 * (left.angle + right.angle)));
    }
  }
  const double turns = total / (2 * std::numbers::pi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 1e-6)
    throw NumericalDegeneracy("winding_number_r2: total turning is not a multiple of 2 pi");
  return static_cast<long>(rounded);
}

inline long winding_number_r2(const LayerPtr& layer) {
  if (layer->r() != 2) throw InvalidInput("winding_number_r2: requires r = 2");
  return winding_number_r2(*layer);
}

// ---------------------------------------------------------------------------
// Whole-map verification.

inline constexpr double kEquivarianceTolerance = 1e-9;
inline constexpr double kCenterTolerance = 1e-9;
inline constexpr double kSpuriousFloor = 1e-3;

struct VerificationOptions {
  std::size_t samples = 10'000;  // equivariance samples
  std::size_t starts = 10'000;   // zero-search starts per step
  std::uint64_t seed = 0;
};

struct StepVerification {
  LocalDegreeReport degrees;
  LocalDegreeReport alternate;  // other construction on the same base layer
  bool opposite = false;
  double center_residual = 0;
  ZeroSearchReport zeros;

  bool pass() const {
    return degrees.matches_expected && alternate.matches_expected && opposite &&
           center_residual < kCenterTolerance && zeros.min_norm > kSpuriousFloor;
  }
};

struct MapVerification {
  std::vector<StepVerification> steps;
  EquivarianceReport equivariance;
  std::optional<long> winding;  // r = 2 only
  bool winding_matches_ledger = true;

  bool pass() const {
    if (equivariance.max_residual >= kEquivarianceTolerance ||
        equivariance.max_codomain_error >= kEquivarianceTolerance || !winding_matches_ledger)
      return false;
    return std::all_of(steps.begin(), steps.end(), [](const auto& s) { return s.pass(); });
  }
};

inline StepVerification verify_step(const LayerPtr& layer, std::size_t starts, std::uint64_t seed) {
  StepVerification out;
  out.degrees = verify_local_degrees(layer);
  const auto other = layer->node().construction == Construction::minus ? Construction::plus
                                                                       : Construction::minus;
  out.alternate = verify_local_degrees(modify(layer->previous(), layer->node().k, other));
  out.opposite = out.degrees.consistent && out.alternate.consistent &&
                 out.degrees.signs.front() == -out.alternate.signs.front();
  out.center_residual = max_center_residual(layer);
  out.zeros = verify_no_spurious_zeros(layer, starts, seed);
  return out;
}

inline MapVerification verify_built_map(const BuiltMap& built, const VerificationOptions& opts) {
  MapVerification out;
  for (std::size_t i = 0; i < built.layers.size(); ++i)
    out.steps.push_back(verify_step(built.layers[i], opts.starts, Rng::substream(opts.seed, 1 + i)));
  out.equivariance = verify_equivariance(built.map, opts.samples, opts.seed);
  if (built.map->r() == 2) {
    out.winding = winding_number_r2(built.map);
    out.winding_matches_ledger = BigInt(*out.winding) == built.ledger.final_degree();
  }
  return out;
}

}  // namespace tverberg::eqmaps
