#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "tverberg/bounds.hpp"
#include "tverberg/numbercert.hpp"

using namespace tverberg;
using namespace tverberg::bounds;

namespace {

Int N_ref(Int r, Int d) { return (d + 1) * r - r * oracle::ceil_by_loop(d + 2, r + 1) - 2; }

}  // namespace

TEST_CASE("tverberg_N and classic_N examples") {
  CHECK(tverberg_N(6, 54) == 280);
  CHECK(tverberg_N(6, 55) == 280);
  CHECK(tverberg_N(6, 699) == 3592);
  CHECK(classic_N(6, 55) == 280);
  CHECK(classic_N(6, 54) == 275);
  CHECK(classic_N(2, 1) == 2);
  CHECK_THROWS_AS(tverberg_N(1, 5), InvalidInput);
  CHECK_THROWS_AS(classic_N(2, 0), InvalidInput);
}

TEST_CASE("tverberg_N matches loop-ceiling reference") {
  for (Int r = 2; r <= 30; ++r)
    for (Int d = 1; d <= 400; ++d) REQUIRE(tverberg_N(r, d) == N_ref(r, d));
}

TEST_CASE("bfz_join_power examples") {
  CHECK(bfz_join_power(2, 2, 2) == JoinPower{5, 5});
  CHECK(bfz_join_power(280, 55, 2) == JoinPower{561, 111});
  for (Int a = 0; a < 20; ++a)
    for (Int d = 0; d < 20; ++d) CHECK(bfz_join_power(a, d, 1) == JoinPower{a, d});
}

TEST_CASE("frick_F_estimate examples") {
  CHECK(frick_F_estimate(6, 55).value == 284);
  CHECK(frick_F_estimate(6, 699).value == 3550);
  CHECK(frick_F_estimate(6, 54).value == Rational(6 * 55) - Rational(13, 2) * 55 / 7);
  for (Int r = 2; r < 10; ++r)
    for (Int d = 1; d < 50; ++d) CHECK(frick_F_estimate(r, d).approximate);
}

TEST_CASE("skeleton bound examples") {
  CHECK(vkf_dim(9, 6) == 11);
  CHECK(vkf_dim(15, 6) == 18);
  CHECK(vkf_dim(0, 2) == 2);
  CHECK(general_position_dim(15, 6) == 19);
  CHECK(general_position_dim(1, 2) == 3);
  CHECK(general_position_dim(9, 6) == 11);
  CHECK(constraint_N(45, 6) == 280);
  CHECK(constraint_N(0, 2) == 2);
  CHECK(constraint_N(9, 6) == 64);
  CHECK(mw_codimension_ok(6, 53, 45));
  CHECK_FALSE(mw_codimension_ok(2, 2, 1));
  CHECK(mw_codimension_ok(6, 11, 9));
}

TEST_CASE("vkf_dim never exceeds general_position_dim") {
  for (Int r = 2; r <= 30; ++r)
    for (Int k = 0; k <= 300; ++k) {
      REQUIRE(vkf_dim(k, r) == k + oracle::ceil_by_loop(k + 3, r));
      REQUIRE(vkf_dim(k, r) <= general_position_dim(k, r) + 1);
    }
}

TEST_CASE("theorem1_decomposition examples") {
  const auto a = theorem1_decomposition(6, 54);
  CHECK(a.k == 45);
  CHECK(a.vkf_target == 53);
  CHECK(a.constraint == 280);
  CHECK(a.codimension_ok);

  const auto b = theorem1_decomposition(6, 19);
  CHECK(b.k == 15);
  CHECK(b.vkf_target == 18);
  CHECK(b.vkf_required == 18);
  CHECK(b.constraint == 100);

  const auto c = theorem1_decomposition(2, 3);
  CHECK(c.k == 0);
  CHECK(c.vkf_target == 2);
  CHECK(c.vkf_required == 2);
  CHECK(c.constraint == 2);

  CHECK_THROWS_AS(theorem1_decomposition(6, 2), InvalidInput);
}

TEST_CASE("theorem1_decomposition consistent over the whole sweep") {
  for (Int r = 2; r <= 50; ++r)
    for (Int d = 3; d <= 1000; ++d) {
      const auto t = theorem1_decomposition(r, d);
      REQUIRE(t.constraint == tverberg_N(r, d));
      REQUIRE(constraint_N(t.k, r) == N_ref(r, d));
      REQUIRE(t.vkf_required <= t.vkf_target);
    }
}

TEST_CASE("corollary_a_check examples") {
  const auto a = corollary_a_check(6, 8);
  CHECK(a.d == 55);
  CHECK(a.target_dim == 54);
  CHECK(a.N == 280);
  const auto b = corollary_a_check(6, 9);
  CHECK(b.d == 62);
  CHECK(b.target_dim == 61);
  CHECK(b.N == 315);
  CHECK_THROWS_AS(corollary_a_check(6, 7), InvalidInput);
}

TEST_CASE("corollary_a_check holds for all admissible q") {
  for (Int r = 2; r <= 30; ++r)
    for (Int q = r + 2; q <= r + 200; ++q) {
      const auto c = corollary_a_check(r, q);
      REQUIRE(N_ref(r, c.target_dim) >= c.N);
    }
}

TEST_CASE("corollary_b_check examples") {
  CHECK(corollary_b_check(6, 108, 1));
  CHECK(classic_N(6, 108) == 545);
  CHECK(tverberg_N(6, 107) == 550);
  CHECK(corollary_b_check(6, 72, 0));
  CHECK_FALSE(corollary_b_check(6, 71, 0));
}

TEST_CASE("tverberg_N is nondecreasing in d") {
  for (Int r = 2; r <= 20; ++r) {
    Int prev = tverberg_N(r, 1);
    for (Int d = 2; d <= 10'000; ++d) {
      const Int cur = tverberg_N(r, d);
      REQUIRE(cur >= prev);
      prev = cur;
    }
  }
}

TEST_CASE("tverberg_N beats classic_N for d >= 2r^2 off prime powers") {
  for (Int r = 2; r <= 30; ++r) {
    if (numbercert::is_prime_power(r)) continue;
    for (Int d = 2 * r * r; d <= 2 * r * r + 3000; ++d) REQUIRE(tverberg_N(r, d) >= classic_N(r, d));
  }
}

TEST_CASE("tverberg_N(6, d) exceeds the rounded F estimate for d >= 600") {
  for (Int d = 600; d <= 20'000; d += 7) {
    const Rational F = frick_F_estimate(6, d).value;
    const Rational shifted = F + Rational(1, 2);
    const BigInt rounded = numerator(shifted) / denominator(shifted);  // floor(F + 1/2), F > 0
    REQUIRE(BigInt(tverberg_N(6, d)) > rounded);
  }
}

TEST_CASE("tverberg_N <= dr - 2 when r < d") {
  for (Int r = 2; r <= 40; ++r)
    for (Int d = r + 1; d <= 2000; ++d) REQUIRE(tverberg_N(r, d) <= d * r - 2);
}

TEST_CASE("asymptotic ordering at d = 699") {
  CHECK(tverberg_N(6, 699) == 3592);
  CHECK(frick_F_estimate(6, 699).value == 3550);
  CHECK(classic_N(6, 699) == 3500);
}
