// Acceptance gate: one line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "complex_families.hpp"
#include "oracles.hpp"
#include "tverberg/bounds.hpp"
#include "tverberg/commands.hpp"
#include "tverberg/complexes.hpp"
#include "tverberg/eqmaps.hpp"
#include "tverberg/eqmaps_harness.hpp"
#include "tverberg/numbercert.hpp"
#include "tverberg/plmaps.hpp"

using namespace tverberg;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what;
      pass = false;
    }
  }
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  std::function<void(Outcome&)> run;
};

// 1
void bounds_reproduction(Outcome& out) {
  const auto a = cli::cmd_bounds({6, 54, {}, {}, {}});
  out.expect(a.outputs["tverberg_N"] == 280, "tverberg_N(6,54) == 280");
  out.expect(a.outputs["classic_N"] == 275, "classic_N(6,54) == 275");
  const auto b = cli::cmd_bounds({6, 55, {}, {}, {}});
  out.expect(b.outputs["classic_N"] == 280, "classic_N(6,55) == 280");
  const auto c = bounds::corollary_a_check(6, 8);
  out.expect(c.d == 55 && c.target_dim == 54 && c.N == 280, "corollary_a_check(6,8) == (55,54,280)");
  out.detail << "N(6,54)=" << bounds::tverberg_N(6, 54) << " classic(6,54)=" << bounds::classic_N(6, 54)
             << " corollary_a(6,8)=(" << c.d << "," << c.target_dim << "," << c.N << ")";
}

// 2
void theorem1_sweep(Outcome& out) {
  long cases = 0;
  for (bounds::Int r = 2; r <= 50; ++r)
    for (bounds::Int d = 3; d <= 1000; ++d) {
      try {
        const auto t = bounds::theorem1_decomposition(r, d);
        out.expect(bounds::constraint_N(t.k, r) == bounds::tverberg_N(r, d),
                   "constraint_N == tverberg_N at r=" + std::to_string(r) + " d=" + std::to_string(d));
      } catch (const std::exception& e) {
        out.expect(false, e.what());
      }
      ++cases;
    }
  out.detail << cases << " (r,d) pairs";
}

// 3
void gcd_prime_power(Outcome& out) {
  int non_prime_powers = 0;
  for (int r = 2; r <= 500; ++r) {
    const bool unit = numbercert::binomial_gcd(r) == 1;
    const bool pp = numbercert::is_prime_power(r).has_value();
    out.expect(unit == !pp, "gcd/prime-power at r=" + std::to_string(r));
    out.expect(oracle::gcd_of_inner_binomials(r) == numbercert::binomial_gcd(r),
               "gcd oracle at r=" + std::to_string(r));
    out.expect(pp == (oracle::distinct_prime_factors(r) == 1), "prime-power oracle at r=" + std::to_string(r));
    if (r <= 100 && !pp) {
      ++non_prime_powers;
      out.expect(numbercert::bezout_certificate(r).checksum() == -1, "checksum at r=" + std::to_string(r));
    }
  }
  out.detail << non_prime_powers << " certificates checked";
}

// 4
void radon_oracle(Outcome& out) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto f = random_rational_map(full_simplex(3), 2, seed);
    const auto v = almost_r_embedding_check(f, 2);
    const bool ok = !v.pass && v.witness && verify_witness(f, *v.witness) &&
                    oracle::planar_witness_holds(f, *v.witness);
    out.expect(ok, "Radon seed " + std::to_string(seed));
  }
  out.detail << "100 instances";
}

// 5
void tverberg_r3(Outcome& out) {
  std::uint64_t tuples = 0;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto f = random_rational_map(full_simplex(6), 2, seed);
    CheckOptions opts;
    opts.threads = eqmaps::thread_count();
    const auto v = almost_r_embedding_check(f, 3, opts);
    tuples += v.tuples_checked;
    const bool ok = !v.pass && v.witness && verify_witness(f, *v.witness) &&
                    oracle::planar_witness_holds(f, *v.witness);
    out.expect(ok, "Tverberg seed " + std::to_string(seed));
  }
  out.detail << "25 instances, " << tuples << " tuples checked";
}

// 6
void k5_oracle(Outcome& out) {
  const auto K5 = simplex_skeleton(4, 1);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto f = random_rational_map(K5, 2, seed);
    std::vector<oracle::P2> pts;
    for (const auto& p : f.coords()) pts.push_back(oracle::to_p2(p));
    const auto crossings = oracle::k5_crossings(pts);
    const auto v = almost_r_embedding_check(f, 2);
    bool ok = !crossings.empty() && !v.pass && v.witness && verify_witness(f, *v.witness);
    if (ok) {
      const auto& faces = v.witness->tuple.faces;
      ok = faces[0].size() == 2 && faces[1].size() == 2;
      if (ok) {
        const std::pair<std::pair<int, int>, std::pair<int, int>> pair{{faces[0][0], faces[0][1]},
                                                                       {faces[1][0], faces[1][1]}};
        ok = std::find(crossings.begin(), crossings.end(), pair) != crossings.end();
      }
    }
    out.expect(ok, "K5 seed " + std::to_string(seed));
  }
  out.detail << "50 drawings";
}

// 7
void join_preservation(Outcome& out) {
  const auto f = random_rational_map(full_simplex(2), 2, 1);
  const auto g = random_rational_map(full_simplex(2), 2, 2);
  out.expect(almost_r_embedding_check(f, 2).pass, "f passes");
  out.expect(almost_r_embedding_check(g, 2).pass, "g passes");
  const auto j = join_maps(f, g);
  out.expect(j.complex() == full_simplex(5) && j.d() == 5, "join is Delta_5 -> R^5");
  const auto v = almost_r_embedding_check(j, 2);
  out.expect(v.pass, "join passes");
  out.detail << v.tuples_checked << " tuples checked";
}

// 8
void circle_degrees(Outcome& out) {
  struct Case {
    const char* plan;
    long expected;
  };
  for (const Case c : {Case{"", 1}, Case{"1:-", -1}, Case{"1:+", 3}, Case{"1:-,1:-", -3}}) {
    const auto built = eqmaps::build_from_plan(numbercert::parse_plan(2, c.plan));
    const long w = eqmaps::winding_number_r2(built.map);
    out.expect(w == c.expected && BigInt(w) == built.ledger.final_degree(),
               std::string("winding after [") + c.plan + "]");
    out.detail << "[" << c.plan << "]=" << w << " ";
  }
}

// 9
void degree_zero_r6(Outcome& out) {
  const auto plan = numbercert::certificate_to_plan(numbercert::bezout_certificate(6));
  const auto built = eqmaps::build_from_plan(plan);
  out.expect(built.ledger.final_degree() == 0, "ledger ends at 0");
  eqmaps::VerificationOptions opts;
  opts.samples = 10'000;
  opts.starts = 100'000;
  const auto ver = eqmaps::verify_built_map(built, opts);
  out.expect(ver.equivariance.max_residual < 1e-9, "equivariance residual < 1e-9");
  std::size_t signs = 0;
  double worst_center = 0, min_zero = INFINITY;
  for (const auto& s : ver.steps) {
    signs += s.degrees.signs.size();
    worst_center = std::max(worst_center, s.center_residual);
    min_zero = std::min(min_zero, s.zeros.min_norm);
    out.expect(s.center_residual < 1e-9, "homotopy zero at every center");
    out.expect(s.degrees.consistent && s.degrees.matches_expected, "signs consistent within step");
    out.expect(s.opposite && s.alternate.consistent, "plus/minus signs opposite");
    out.expect(s.zeros.min_norm > 1e-3, "spurious-zero minimum > 1e-3");
  }
  out.expect(signs == 41, "41 local signs");
  out.expect(ver.pass(), "verification passes");
  out.detail << "ledger=" << built.ledger.final_degree() << " residual=" << ver.equivariance.max_residual
             << " center=" << worst_center << " signs=" << signs << " min|H|=" << min_zero;
}

// 10
void deleted_product_equivalence(Outcome& out) {
  std::size_t classes = 0;
  for (int n = 1; n <= 6; ++n) {
    for (const auto set : family::isomorphism_classes(n)) {
      ++classes;
      const auto K = family::to_complex(set, n);
      for (int r = 2; r <= 3; ++r) {
        out.expect(family::as_vector(deleted_product_stats(K, r)) == family::brute_tuple_counts(set, r),
                   "counts n=" + std::to_string(n) + " set=" + std::to_string(set));
        out.expect(verify_free_action(K, r), "free action n=" + std::to_string(n));
      }
    }
  }
  out.detail << classes << " complexes (one per isomorphism class)";
}

// 11
void asymptotic_comparison(Outcome& out) {
  const auto N = bounds::tverberg_N(6, 699);
  const auto F = bounds::frick_F_estimate(6, 699).value;
  const auto C = bounds::classic_N(6, 699);
  out.expect(N == 3592, "tverberg_N(6,699) == 3592");
  out.expect(C == 3500, "classic_N(6,699) == 3500");
  out.expect(Rational(N) > F && F > Rational(C), "N > F > classic");
  out.expect(std::lround(F.convert_to<double>()) == 3550, "F rounds to 3550");
  out.detail << "N=" << N << " F=" << F << " (~" << F.convert_to<double>() << ") classic=" << C;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "bounds reproduction", 1, bounds_reproduction},
      {2, "theorem-1 consistency sweep", 10, theorem1_sweep},
      {3, "gcd / prime-power equivalence", 5, gcd_prime_power},
      {4, "Radon oracle", 5, radon_oracle},
      {5, "Tverberg r=3 oracle", 120, tverberg_r3},
      {6, "K5 oracle", 10, k5_oracle},
      {7, "join preservation", 60, join_preservation},
      {8, "circle degrees", 5, circle_degrees},
      {9, "degree-zero construction r=6", 600, degree_zero_r6},
      {10, "deleted-product brute-force equivalence", 30, deleted_product_equivalence},
      {11, "asymptotic comparison", 1, asymptotic_comparison},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = out.pass && in_time;
    failures += !pass;
    std::printf("[%s] %2d %-42s %8.3f s (limit %g s)%s  %s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                secs, c.limit_s, in_time ? "" : " TIMEOUT", out.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
