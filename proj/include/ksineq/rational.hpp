/**
 * Exact rational scalar used throughout the library.
 *
 * All polytope geometry and bound derivations run in arbitrary-precision
 * rational arithmetic (GMP via boost::multiprecision), so quantities like
 * 5/6 or 1/2 are reproduced as equalities rather than approximations.
 */

#ifndef KSINEQ_RATIONAL_HPP
#define KSINEQ_RATIONAL_HPP

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace ksineq {

using Rational = boost::multiprecision::mpq_rational;
using BigInt   = boost::multiprecision::mpz_int;

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/**
 * Parse "a" or "a/b" (optionally signed) into a canonical rational.
 * Guarantees lowest terms and a positive denominator.
 */
inline Rational parse_rational(std::string_view text) {
  auto bad = [&] { throw ParseError("invalid rational literal: '" + std::string(text) + "'"); };
  if (text.empty()) bad();
  const auto slash = text.find('/');
  auto parse_int = [&](std::string_view s) -> BigInt {
    bool negative = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
      negative = (s[0] == '-');
      s.remove_prefix(1);
    }
    if (s.empty()) bad();
    for (const char c : s)
      if (c < '0' || c > '9') bad();
    BigInt value{std::string(s)};
    return negative ? BigInt(-value) : value;
  };
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  BigInt num = parse_int(text.substr(0, slash));
  BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) bad();
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rational(num, den);  // canonicalizes the gcd
}

/// Canonical text form: "n" for integers, "n/d" otherwise (d > 0).
inline std::string to_string(const Rational& q) { return q.str(); }

inline double to_double(const Rational& q) { return q.template convert_to<double>(); }

}  // namespace ksineq

#endif  // KSINEQ_RATIONAL_HPP
