#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace dchain {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt factorial(unsigned n);
BigInt binomial(unsigned n, unsigned k);

/// Renders integers as "7" and non-integers as "7/2".
std::string to_string(const Rational& q);
std::string to_string(const BigInt& v);

/// Parses "3", "-2", "3/2" or "1.5" (decimal halves only need finite digits).
Rational parse_rational(const std::string& text);

inline bool is_integral(const Rational& q) { return boost::multiprecision::denominator(q) == 1; }

}  // namespace dchain
