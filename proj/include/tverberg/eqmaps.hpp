#pragma once

// Sigma_r-equivariant self-maps of the sphere S of 2 x r matrices with zero
// row sums and unit Frobenius norm (a sphere of dimension 2r-3), built from
// the identity by local modifications around the orbit of a two-valued
// center. Each modification changes the degree by +-C(r,k).

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "tverberg/errors.hpp"
#include "tverberg/numbercert.hpp"

namespace tverberg::eqmaps {

/// Largest r supported by the fixed-capacity storage below.
inline constexpr int kMaxR = 16;

/// 2 x r matrix; no heap allocation for r <= kMaxR.
using Mat2 = Eigen::Matrix<double, 2, Eigen::Dynamic, Eigen::ColMajor, 2, kMaxR>;
using SpherePoint = Mat2;
/// Coordinates in an orthonormal basis of the zero-row-sum space (dim 2r-2).
using WVec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 2 * kMaxR, 1>;
using WMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 2 * kMaxR,
                           2 * kMaxR>;

/// sigma[i] is the image of column i.
using Permutation = std::vector<int>;

inline void check_r(int r) {
  if (r < 2 || r > kMaxR)
    throw InvalidInput("eqmaps: r must lie in [2, " + std::to_string(kMaxR) + "], got " +
                       std::to_string(r));
}

inline void check_rk(int r, int k) {
  check_r(r);
  if (k < 1 || k > r - 1)
    throw InvalidInput("eqmaps: k must lie in [1, r-1], got k=" + std::to_string(k));
}

/// Column i of x becomes column sigma[i] of the result.
inline SpherePoint act(const Permutation& sigma, const SpherePoint& x) {
  if (sigma.size() != static_cast<std::size_t>(x.cols()))
    throw InvalidInput("act: permutation size differs from r");
  SpherePoint y(2, x.cols());
  for (Eigen::Index i = 0; i < x.cols(); ++i) y.col(sigma[static_cast<std::size_t>(i)]) = x.col(i);
  return y;
}

inline Permutation compose(const Permutation& a, const Permutation& b) {  // a after b
  Permutation out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = a[static_cast<std::size_t>(b[i])];
  return out;
}

/// Row sums vanish and the norm is 1, within `tol`.
inline bool is_sphere_point(const SpherePoint& x, double tol = 1e-12) {
  return std::abs(x.row(0).sum()) <= tol && std::abs(x.row(1).sum()) <= tol &&
         std::abs(x.norm() - 1.0) <= tol;
}

/// Central projection onto the sphere.
inline SpherePoint normalize(const Mat2& y, double min_norm = 1e-9) {
  const double n = y.norm();
  if (!(n > min_norm))
    throw NumericalDegeneracy("central projection of a vector with norm " + std::to_string(n));
  return y / n;
}

// ---------------------------------------------------------------------------
// Coordinates on the zero-row-sum space W.

/// Helmert basis vector j (1-based) of the zero-sum hyperplane of R^r.
inline double helmert(int j, int i) {
  const double s = 1.0 / std::sqrt(static_cast<double>(j) * (j + 1));
  if (i < j) return s;
  if (i == j) return -j * s;
  return 0.0;
}

inline WVec to_coords(const Mat2& x) {
  const int r = static_cast<int>(x.cols());
  WVec u(2 * (r - 1));
  for (int row = 0; row < 2; ++row)
    for (int j = 1; j < r; ++j) {
      double s = 0;
      for (int i = 0; i <= j; ++i) s += helmert(j, i) * x(row, i);
      u(row * (r - 1) + j - 1) = s;
    }
  return u;
}

inline Mat2 from_coords(const WVec& u, int r) {
  Mat2 x = Mat2::Zero(2, r);
  for (int row = 0; row < 2; ++row)
    for (int j = 1; j < r; ++j) {
      const double a = u(row * (r - 1) + j - 1);
      for (int i = 0; i <= j; ++i) x(row, i) += a * helmert(j, i);
    }
  return x;
}

/// Orthonormal frame e_1..e_n of the tangent space at x, oriented so that
/// det[x, e_1, ..., e_n] > 0 in W-coordinates. Returned as columns.
inline WMat tangent_frame(const SpherePoint& x) {
  const WVec u = to_coords(x);
  const Eigen::Index n = u.size();
  WMat seed = WMat::Identity(n, n);
  seed.col(0) = u;
  Eigen::HouseholderQR<WMat> qr(seed);
  WMat Q = qr.householderQ() * WMat::Identity(n, n);
  if (Q.col(0).dot(u) < 0) Q.col(0) = -Q.col(0);
  WMat frame = Q.rightCols(n - 1);
  WMat full(n, n);
  full.col(0) = u;
  full.rightCols(n - 1) = frame;
  if (full.determinant() < 0) frame.col(0) = -frame.col(0);
  return frame;
}

// ---------------------------------------------------------------------------
// Orbit centers.

struct CenterData {
  SpherePoint c;            // first row M/|M|, second row 0
  SpherePoint c1;           // rows swapped
  std::uint64_t orbit_size = 0;  // C(r,k)
};

/// M = (k-r repeated k times, k repeated r-k times), c = (M/|M|; 0).
inline CenterData center_point(int r, int k) {
  check_rk(r, k);
  const double norm = std::sqrt(static_cast<double>(k) * (r - k) * r);
  CenterData out;
  out.c = SpherePoint::Zero(2, r);
  for (int i = 0; i < r; ++i) out.c(0, i) = (i < k ? k - r : k) / norm;
  out.c1 = SpherePoint::Zero(2, r);
  out.c1.row(1) = out.c.row(0);
  out.orbit_size = numbercert::binomial(r, k).convert_to<std::uint64_t>();
  return out;
}

/// Distance from c to its nearest distinct orbit point (one swap of a
/// (k-r)-entry with a k-entry): sqrt(2r / (k(r-k))).
inline double orbit_min_distance(int r, int k) {
  check_rk(r, k);
  return std::sqrt(2.0 * r / (static_cast<double>(k) * (r - k)));
}

/// Ball radius: a third of the minimal orbit distance, so distinct orbit
/// balls are separated by at least R.
inline double safe_radius(int r, int k) { return orbit_min_distance(r, k) / 3.0; }

inline constexpr double kPlateauFraction = 0.25;

inline double smoothstep5(double s) {
  s = std::clamp(s, 0.0, 1.0);
  return s * s * s * (s * (6.0 * s - 15.0) + 10.0);
}

/// 1 for t <= R/4, 0 for t >= R, quintic smoothstep between.
inline double bump_profile(double t, double R) {
  const double inner = kPlateauFraction * R;
  return smoothstep5((R - t) / (R - inner));
}

/// The columns of x's first row holding its k smallest entries, as a bitmask.
/// The orbit point of c whose (k-r)-block sits on these columns maximizes
/// <x, sigma c>, hence is the nearest one.
inline std::uint32_t nearest_block(const SpherePoint& x, int k) {
  const int r = static_cast<int>(x.cols());
  std::array<int, kMaxR> idx{};
  std::iota(idx.begin(), idx.begin() + r, 0);
  std::nth_element(idx.begin(), idx.begin() + k, idx.begin() + r,
                   [&](int a, int b) { return x(0, a) < x(0, b) || (x(0, a) == x(0, b) && a < b); });
  std::uint32_t mask = 0;
  for (int i = 0; i < k; ++i) mask |= 1U << idx[static_cast<std::size_t>(i)];
  return mask;
}

/// Permutation taking c (block on columns 0..k-1) to the orbit point whose
/// block is `mask`; order within each block is preserved.
inline Permutation block_permutation(int r, int k, std::uint32_t mask) {
  Permutation sigma(static_cast<std::size_t>(r));
  int in = 0;
  int out = k;
  for (int col = 0; col < r; ++col) {
    if ((mask >> col) & 1U)
      sigma[static_cast<std::size_t>(in++)] = col;
    else
      sigma[static_cast<std::size_t>(out++)] = col;
  }
  return sigma;
}

/// The orbit point with its (k-r)-block on `mask`.
inline SpherePoint orbit_point(int r, int k, std::uint32_t mask) {
  const double norm = std::sqrt(static_cast<double>(k) * (r - k) * r);
  SpherePoint p = SpherePoint::Zero(2, r);
  for (int i = 0; i < r; ++i) p(0, i) = (((mask >> i) & 1U) ? k - r : k) / norm;
  return p;
}

/// Bitmasks of all k-subsets of r columns, ascending.
inline std::vector<std::uint32_t> orbit_masks(int r, int k) {
  check_rk(r, k);
  std::vector<std::uint32_t> out;
  for (std::uint32_t m = 0; m < (1U << r); ++m)
    if (std::popcount(m) == k) out.push_back(m);
  return out;
}

inline std::vector<SpherePoint> orbit(int r, int k) {
  std::vector<SpherePoint> out;
  for (auto m : orbit_masks(r, k)) out.push_back(orbit_point(r, k, m));
  return out;
}

/// Sigma_r-invariant bump around the orbit of a center c whose second row is
/// zero: the profile of the chordal distance from x to the nearest orbit point.
inline double bump_rho(const SpherePoint& x, const SpherePoint& c, double R) {
  if (x.cols() != c.cols()) throw InvalidInput("bump_rho: size mismatch");
  const int r = static_cast<int>(x.cols());
  // Rearrangement: pair the sorted entries of x's first row with c's.
  std::array<int, kMaxR> xi{};
  std::array<double, kMaxR> cv{};
  std::iota(xi.begin(), xi.begin() + r, 0);
  std::sort(xi.begin(), xi.begin() + r, [&](int a, int b) { return x(0, a) < x(0, b); });
  for (int i = 0; i < r; ++i) cv[static_cast<std::size_t>(i)] = c(0, i);
  std::sort(cv.begin(), cv.begin() + r);
  SpherePoint nearest = SpherePoint::Zero(2, r);
  for (int i = 0; i < r; ++i) nearest(0, xi[static_cast<std::size_t>(i)]) = cv[static_cast<std::size_t>(i)];
  return bump_profile((x - nearest).norm(), R);
}

// ---------------------------------------------------------------------------
// Map layers.

enum class Construction { minus = -1, plus = 1 };

inline int sign_of(Construction c) { return static_cast<int>(c); }
inline const char* to_string(Construction c) { return c == Construction::minus ? "minus" : "plus"; }

struct ModificationNode {
  int k = 0;
  Construction construction = Construction::minus;
  CenterData center;
  double radius = 0;
  double plateau_fraction = kPlateauFraction;
  /// Support fraction of the reflection homotopy: phi_t = g where rho >= 1/3,
  /// phi_t = id where rho <= 1/4.
  double blend_low = 0.25;
  double blend_high = 1.0 / 3.0;
};

class MapLayer;
using LayerPtr = std::shared_ptr<const MapLayer>;

/// One layer of the equivariant self-map; immutable and reentrant.
class MapLayer {
 public:
  static LayerPtr identity(int r) {
    check_r(r);
    return LayerPtr(new MapLayer(r));
  }

  int r() const { return r_; }
  bool is_identity() const { return previous_ == nullptr; }
  const ModificationNode& node() const { return node_; }
  const LayerPtr& previous() const { return previous_; }
  int depth() const { return previous_ ? previous_->depth() + 1 : 0; }

  SpherePoint operator()(const SpherePoint& x) const {
    if (is_identity()) return x;
    const Local loc = locate(x);
    if (!loc.inside) return (*previous_)(x);
    return normalize(raw(x, 1.0, loc));
  }

  /// h_t(x) in the ambient zero-row-sum space; f_prev(x) outside the orbit
  /// balls. For the identity layer, x itself.
  Mat2 homotopy(const SpherePoint& x, double t) const {
    if (is_identity()) return x;
    const Local loc = locate(x);
    if (!loc.inside) return (*previous_)(x);
    return raw(x, t, loc);
  }

  /// Orbit point nearest to x (only meaningful for non-identity layers).
  SpherePoint nearest_center(const SpherePoint& x) const {
    return orbit_point(r_, node_.k, nearest_block(x, node_.k));
  }

  double rho(const SpherePoint& x) const {
    if (is_identity()) return 0.0;
    return locate(x).rho;
  }

  /// Reflection homotopy phi_t, equal to the identity outside the orbit balls.
  SpherePoint phi(const SpherePoint& x, double t) const {
    if (is_identity()) return x;
    const Local loc = locate(x);
    if (!loc.inside) return x;
    return phi_local(x, t, loc);
  }

 private:
  friend LayerPtr modify(const LayerPtr&, int, Construction);

  explicit MapLayer(int r) : r_(r) {}

  struct Local {
    bool inside = false;
    std::uint32_t mask = 0;
    SpherePoint center;
    double rho = 0;
  };

  Local locate(const SpherePoint& x) const {
    Local loc;
    loc.mask = nearest_block(x, node_.k);
    loc.center = orbit_point(r_, node_.k, loc.mask);
    const double dist = (x - loc.center).norm();
    loc.inside = dist < node_.radius;
    loc.rho = loc.inside ? bump_profile(dist, node_.radius) : 0.0;
    return loc;
  }

  SpherePoint phi_local(const SpherePoint& x, double t, const Local& loc) const {
    const double lambda =
        smoothstep5((loc.rho - node_.blend_low) / (node_.blend_high - node_.blend_low));
    const double s = std::min(3.0 * t, 1.0) * lambda;
    if (s == 0.0) return x;
    // Reflection across the hyperplane orthogonal to the row-swapped center.
    Mat2 companion = Mat2::Zero(2, r_);
    companion.row(1) = loc.center.row(0);
    const Mat2 gx = x - 2.0 * (x.cwiseProduct(companion).sum()) * companion;
    return normalize((1.0 - s) * x + s * gx);
  }

  Mat2 raw(const SpherePoint& x, double t, const Local& loc) const {
    const SpherePoint f_center = act(block_permutation(r_, node_.k, loc.mask), f_at_c_);
    if (node_.construction == Construction::minus)
      return (*previous_)(x) - 2.0 * t * loc.rho * f_center;
    return (*previous_)(phi_local(x, t, loc)) - 2.0 * t * loc.rho * f_center;
  }

  int r_;
  ModificationNode node_;
  LayerPtr previous_;
  SpherePoint f_at_c_;  // previous layer at the base center c
};

inline LayerPtr modify(const LayerPtr& f, int k, Construction construction) {
  if (!f) throw InvalidInput("modify: null layer");
  check_rk(f->r(), k);
  auto layer = std::shared_ptr<MapLayer>(new MapLayer(f->r()));
  layer->node_.k = k;
  layer->node_.construction = construction;
  layer->node_.center = center_point(f->r(), k);
  layer->node_.radius = safe_radius(f->r(), k);
  layer->previous_ = f;
  layer->f_at_c_ = (*f)(layer->node_.center.c);
  return layer;
}

/// x -> normalize(f(x) - 2 rho(x) f(sigma c)) on the orbit ball around sigma c.
inline LayerPtr modify_minus(const LayerPtr& f, int k) { return modify(f, k, Construction::minus); }

/// x -> normalize(f(phi_1(x)) - 2 rho(x) f(sigma c)), phi_1 the reflection
/// across (sigma c_1)^perp on the inner ball.
inline LayerPtr modify_plus(const LayerPtr& f, int k) { return modify(f, k, Construction::plus); }

/// h_t(x) of the layer's modification step.
inline Mat2 homotopy_eval(const LayerPtr& layer, const SpherePoint& x, double t) {
  if (t < 0.0 || t > 1.0) throw InvalidInput("homotopy_eval: t must lie in [0, 1]");
  return layer->homotopy(x, t);
}

// ---------------------------------------------------------------------------
// Local degrees by finite differences.

inline constexpr double kFdStep = 1e-5;
inline constexpr double kDetThreshold = 1e-8;
inline constexpr int kFdHalvings = 4;

/// Point normalize(x + sum_i v_i e_i) for tangent coordinates v.
inline SpherePoint move_on_sphere(const SpherePoint& x, const WMat& frame, const WVec& v) {
  const WVec u = to_coords(x) + frame * v;
  return normalize(from_coords(u, static_cast<int>(x.cols())));
}

namespace detail {

template <class Fn>
int determinant_sign(Fn&& build_matrix, double step) {
  for (int attempt = 0; attempt <= kFdHalvings; ++attempt) {
    const WMat m = build_matrix(step);
    const double det = m.fullPivLu().determinant();
    if (std::abs(det) > kDetThreshold) return det > 0 ? 1 : -1;
    step *= 0.5;
  }
  throw NumericalDegeneracy("finite-difference determinant too small to sign");
}

}  // namespace detail

/// Sign of det[f(x), Df e_1, ..., Df e_n] for a positive frame at x: the
/// local degree of f at x when x is a regular point.
template <class Map>
int local_degree(const Map& f, const SpherePoint& x, double step = kFdStep) {
  const WMat frame = tangent_frame(x);
  const Eigen::Index n = frame.cols();
  return detail::determinant_sign(
      [&](double h) {
        WMat m(n + 1, n + 1);
        m.col(0) = to_coords(f(x));
        for (Eigen::Index i = 0; i < n; ++i) {
          WVec v = WVec::Zero(n);
          v(i) = h;
          const WVec plus = to_coords(f(move_on_sphere(x, frame, v)));
          const WVec minus = to_coords(f(move_on_sphere(x, frame, -v)));
          m.col(i + 1) = (plus - minus) / (2 * h);
        }
        return m;
      },
      step);
}

/// Sign of det[dh/dt, D_x h e_1, ..., D_x h e_n] at (x, t).
inline int homotopy_local_degree(const LayerPtr& layer, const SpherePoint& x, double t,
                                 double step = kFdStep) {
  const WMat frame = tangent_frame(x);
  const Eigen::Index n = frame.cols();
  return detail::determinant_sign(
      [&](double h) {
        WMat m(n + 1, n + 1);
        m.col(0) = (to_coords(layer->homotopy(x, t + h)) - to_coords(layer->homotopy(x, t - h))) /
                   (2 * h);
        for (Eigen::Index i = 0; i < n; ++i) {
          WVec v = WVec::Zero(n);
          v(i) = h;
          const WVec plus = to_coords(layer->homotopy(move_on_sphere(x, frame, v), t));
          const WVec minus = to_coords(layer->homotopy(move_on_sphere(x, frame, -v), t));
          m.col(i + 1) = (plus - minus) / (2 * h);
        }
        return m;
      },
      step);
}

// ---------------------------------------------------------------------------
// Plans and the degree ledger.

struct LedgerEntry {
  int k = 0;
  int sign = 0;           // requested direction of the degree change
  BigInt delta;           // sign * C(r,k)
  Construction construction = Construction::minus;
  int base_local_degree = 1;  // measured local degree of the previous layer at c
};

/// Running degree: starts at 1 (identity), changes by delta per step.
struct DegreeLedger {
  std::vector<LedgerEntry> steps;
  std::vector<BigInt> running{BigInt(1)};

  const BigInt& final_degree() const { return running.back(); }
};

struct BuiltMap {
  LayerPtr map;
  DegreeLedger ledger;
  std::vector<LayerPtr> layers;  // layers[i] is the map after step i
};

/// Applies each plan step to the running map.
///
/// A step (k, sign) must change the degree by sign * C(r,k). The minus
/// construction changes it by -C(r,k) * deg_c f and the plus construction by
/// +C(r,k) * deg_c f, where deg_c f is the local degree of the current map at
/// c. The construction is therefore chosen as sign * deg_c f, with deg_c f
/// measured by finite differences.
inline BuiltMap build_from_plan(const numbercert::ModificationPlan& plan) {
  numbercert::validate_plan(plan);
  check_r(static_cast<int>(plan.r));
  const int r = static_cast<int>(plan.r);
  BuiltMap out;
  out.map = MapLayer::identity(r);
  for (const auto& step : plan.steps) {
    const CenterData center = center_point(r, step.k);
    const int base = local_degree(*out.map, center.c);
    const auto construction = step.sign * base > 0 ? Construction::plus : Construction::minus;
    out.map = modify(out.map, step.k, construction);
    out.layers.push_back(out.map);

    LedgerEntry e;
    e.k = step.k;
    e.sign = step.sign;
    e.delta = step.sign * numbercert::binomial(r, step.k);
    e.construction = construction;
    e.base_local_degree = base;
    out.ledger.running.push_back(out.ledger.running.back() + e.delta);
    out.ledger.steps.push_back(std::move(e));
  }
  if (out.ledger.final_degree() != plan.final_degree())
    throw InternalConsistencyError("build_from_plan: ledger disagrees with plan");
  return out;
}

}  // namespace tverberg::eqmaps
