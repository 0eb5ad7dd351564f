#pragma once

#include <cstdint>
#include <regex>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "tverberg/errors.hpp"

namespace tverberg {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt parse_bigint(std::string_view text) {
  static const std::regex pattern(R"([+-]?[0-9]+)");
  std::string s(text);
  if (!std::regex_match(s, pattern)) throw InvalidInput("not an integer: '" + s + "'");
  if (s.front() == '+') s.erase(0, 1);
  return BigInt(s);
}

/// Accepts "p", "p/q" with q != 0. The result is in lowest terms.
inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_bigint(text));
  const BigInt num = parse_bigint(text.substr(0, slash));
  const BigInt den = parse_bigint(text.substr(slash + 1));
  if (den == 0) throw InvalidInput("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

inline std::string to_string(const BigInt& value) { return value.str(); }

/// "p" when the denominator is 1, otherwise "p/q" with q > 0.
inline std::string to_string(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace tverberg
