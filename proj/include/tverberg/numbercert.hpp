#pragma once

// Number theory behind the degree bookkeeping: prime powers, binomial
// coefficients, and integer combinations of C(r,1..r-1) summing to -1.

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tverberg/errors.hpp"
#include "tverberg/rational.hpp"

namespace tverberg::numbercert {

struct PrimePower {
  std::int64_t p = 0;
  int m = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Returns (p, m) with r = p^m, or nullopt. Trial division.
inline std::optional<PrimePower> is_prime_power(std::int64_t r) {
  if (r < 2) throw InvalidInput("is_prime_power: r must be >= 2, got " + std::to_string(r));
  std::int64_t p = 0;
  std::int64_t n = r;
  for (std::int64_t q = 2; q <= n / q; ++q) {
    if (n % q == 0) {
      p = q;
      break;
    }
  }
  if (p == 0) return PrimePower{r, 1};  // r itself is prime
  int m = 0;
  while (n % p == 0) {
    n /= p;
    ++m;
  }
  if (n != 1) return std::nullopt;
  return PrimePower{p, m};
}

inline BigInt binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n)
    throw InvalidInput("binomial: need 0 <= k <= n, got n=" + std::to_string(n) +
                       " k=" + std::to_string(k));
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;  // exact: result is C(n-k+i, i)
  }
  return result;
}

/// gcd of C(r,k) for k = 1..r-1, computed directly from the coefficients.
inline BigInt binomial_gcd(std::int64_t r) {
  if (r < 2) throw InvalidInput("binomial_gcd: r must be >= 2, got " + std::to_string(r));
  BigInt g = 0;
  BigInt c = 1;
  // C(r,k) = C(r,r-k), so k <= r/2 already covers every coefficient.
  for (std::int64_t k = 1; k <= r / 2; ++k) {
    c = c * (r - k + 1) / k;
    g = boost::multiprecision::gcd(g, c);
    if (g == 1) break;
  }
  return g;
}

/// Raised when r is a prime power: every C(r,k) is divisible by p.
class CertificateImpossible : public InvalidInput {
 public:
  CertificateImpossible(std::int64_t r, BigInt gcd)
      : InvalidInput("no certificate for r=" + std::to_string(r) +
                     ": gcd of binomial coefficients is " + gcd.str()),
        r_(r),
        gcd_(std::move(gcd)) {}

  std::int64_t r() const { return r_; }
  const BigInt& gcd() const { return gcd_; }

 private:
  std::int64_t r_;
  BigInt gcd_;
};

/// Integers a_1..a_{r-1}; a certificate proper satisfies sum a_k C(r,k) = -1.
/// `coeffs[i]` holds a_{i+1}. An empty coefficient list means all zeros.
struct BezoutCertificate {
  std::int64_t r = 0;
  std::vector<BigInt> coeffs;

  BigInt checksum() const {
    BigInt sum = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      if (coeffs[i] != 0) sum += coeffs[i] * binomial(r, static_cast<std::int64_t>(i) + 1);
    return sum;
  }

  bool well_formed() const {
    return r >= 2 && (coeffs.empty() || coeffs.size() == static_cast<std::size_t>(r - 1));
  }

  bool valid() const { return well_formed() && checksum() == -1; }
};

namespace detail {

// (g, u, v) with g = u*a + v*b, g >= 0.
inline std::tuple<BigInt, BigInt, BigInt> extended_gcd(BigInt a, BigInt b) {
  BigInt u0 = 1, u1 = 0, v0 = 0, v1 = 1;
  while (b != 0) {
    BigInt q = a / b;
    BigInt t = a - q * b;
    a = std::move(b);
    b = std::move(t);
    t = u0 - q * u1;
    u0 = std::move(u1);
    u1 = std::move(t);
    t = v0 - q * v1;
    v0 = std::move(v1);
    v1 = std::move(t);
  }
  if (a < 0) return {-a, -u0, -v0};
  return {a, u0, v0};
}

// Coefficients in {-1,0,1} over k <= r/2 with sum -1, smallest support
// first, then lexicographic in (positions, signs with - before +).
inline std::optional<std::vector<BigInt>> small_support_search(std::int64_t r,
                                                               std::int64_t half) {
  std::vector<std::int64_t> values(static_cast<std::size_t>(half));
  for (std::int64_t k = 1; k <= half; ++k)
    values[static_cast<std::size_t>(k - 1)] = binomial(r, k).convert_to<std::int64_t>();

  std::vector<std::size_t> pos;
  for (std::size_t weight = 1; weight <= values.size(); ++weight) {
    pos.resize(weight);
    for (std::size_t i = 0; i < weight; ++i) pos[i] = i;
    while (true) {
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << weight); ++mask) {
        std::int64_t sum = 0;
        for (std::size_t i = 0; i < weight; ++i) {
          const bool plus = (mask >> (weight - 1 - i)) & 1U;
          sum += plus ? values[pos[i]] : -values[pos[i]];
        }
        if (sum == -1) {
          std::vector<BigInt> coeffs(static_cast<std::size_t>(r - 1), BigInt(0));
          for (std::size_t i = 0; i < weight; ++i)
            coeffs[pos[i]] = ((mask >> (weight - 1 - i)) & 1U) ? 1 : -1;
          return coeffs;
        }
      }
      // next combination of positions
      std::size_t i = weight;
      while (i > 0 && pos[i - 1] == values.size() - weight + (i - 1)) --i;
      if (i == 0) break;
      ++pos[i - 1];
      for (std::size_t j = i; j < weight; ++j) pos[j] = pos[j - 1] + 1;
    }
  }
  return std::nullopt;
}

// Largest r/2 for which the {-1,0,1} search is attempted (3^12 sign patterns).
inline constexpr std::int64_t kSmallSearchMaxHalf = 12;

}  // namespace detail

/// Integer certificate that -1 lies in the Z-span of C(r,1..r-1).
///
/// Small r get a {-1,0,1}-valued certificate of minimal support when one
/// exists; otherwise iterated extended Euclid over C(r,1..r/2) is used.
/// Throws CertificateImpossible for prime powers.
inline BezoutCertificate bezout_certificate(std::int64_t r) {
  const BigInt g = binomial_gcd(r);
  if (g != 1) throw CertificateImpossible(r, g);

  const std::int64_t half = r / 2;
  BezoutCertificate cert{r, {}};
  if (half <= detail::kSmallSearchMaxHalf) {
    if (auto found = detail::small_support_search(r, half)) {
      cert.coeffs = std::move(*found);
      return cert;
    }
  }

  cert.coeffs.assign(static_cast<std::size_t>(r - 1), BigInt(0));
  BigInt acc = r;  // C(r,1)
  cert.coeffs[0] = 1;
  BigInt c = r;
  for (std::int64_t k = 2; k <= half && acc != 1; ++k) {
    c = c * (r - k + 1) / k;
    auto [next, u, v] = detail::extended_gcd(acc, c);
    for (std::int64_t j = 0; j < k - 1; ++j) cert.coeffs[static_cast<std::size_t>(j)] *= u;
    cert.coeffs[static_cast<std::size_t>(k - 1)] = v;
    acc = next;
  }
  for (auto& a : cert.coeffs) a = -a;
  if (cert.checksum() != -1)
    throw InternalConsistencyError("bezout_certificate: checksum mismatch for r=" +
                                   std::to_string(r));
  return cert;
}

struct PlanStep {
  int k = 0;
  int sign = 0;  // +1 or -1
  friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

/// Ordered degree modifications; each step changes the degree by sign*C(r,k).
struct ModificationPlan {
  std::int64_t r = 0;
  std::vector<PlanStep> steps;
  BigInt target_degree = 1;

  /// 1 + sum sign*C(r,k); equals target_degree for a consistent plan.
  BigInt final_degree() const {
    BigInt deg = 1;
    for (const auto& s : steps) deg += s.sign * binomial(r, s.k);
    return deg;
  }
};

inline void validate_plan(const ModificationPlan& plan) {
  if (plan.r < 2) throw InvalidInput("plan: r must be >= 2");
  for (const auto& s : plan.steps) {
    if (s.k < 1 || s.k > plan.r - 1)
      throw InvalidInput("plan: step k=" + std::to_string(s.k) + " outside [1, r-1]");
    if (s.sign != 1 && s.sign != -1) throw InvalidInput("plan: sign must be +1 or -1");
  }
}

/// |a_k| steps of sign(a_k), in ascending k. The declared target is
/// 1 + sum a_k C(r,k), which is 0 for a genuine certificate.
inline ModificationPlan certificate_to_plan(const BezoutCertificate& cert) {
  if (!cert.well_formed())
    throw InvalidInput("certificate_to_plan: expected r >= 2 and r-1 coefficients");
  ModificationPlan plan;
  plan.r = cert.r;
  for (std::size_t i = 0; i < cert.coeffs.size(); ++i) {
    const BigInt& a = cert.coeffs[i];
    if (a == 0) continue;
    if (abs(a) > 1'000'000)
      throw InvalidInput("certificate_to_plan: coefficient too large to linearize");
    const int sign = a > 0 ? 1 : -1;
    const auto count = abs(a).convert_to<std::int64_t>();
    for (std::int64_t j = 0; j < count; ++j)
      plan.steps.push_back({static_cast<int>(i) + 1, sign});
  }
  plan.target_degree = 1 + cert.checksum();
  return plan;
}

/// Parses "1:-,2:-,3:+" (also accepts "+1"/"-1" and spaces).
inline ModificationPlan parse_plan(std::int64_t r, const std::string& text) {
  ModificationPlan plan;
  plan.r = r;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    std::string item = text.substr(start, end - start);
    std::erase(item, ' ');
    start = end + 1;
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw InvalidInput("plan step '" + item + "' lacks ':'");
    PlanStep step;
    step.k = static_cast<int>(parse_bigint(item.substr(0, colon)).convert_to<std::int64_t>());
    const std::string s = item.substr(colon + 1);
    if (s == "-" || s == "-1")
      step.sign = -1;
    else if (s == "+" || s == "+1" || s == "1")
      step.sign = 1;
    else
      throw InvalidInput("plan step '" + item + "' has bad sign");
    plan.steps.push_back(step);
  }
  validate_plan(plan);
  plan.target_degree = plan.final_degree();
  return plan;
}

}  // namespace tverberg::numbercert
