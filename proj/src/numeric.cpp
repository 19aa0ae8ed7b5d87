#include "dchain/numeric.hpp"

#include "dchain/error.hpp"

#include <cctype>

namespace dchain {

BigInt factorial(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

std::string to_string(const BigInt& v) { return v.str(); }

std::string to_string(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

BigInt parse_integer(const std::string& text, const std::string& whole) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) negative = text[i++] == '-';
  if (i == text.size()) throw ParseError("expected a number in '" + whole + "'", 0);
  BigInt v = 0;
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i])))
      throw ParseError("invalid number '" + whole + "'", i);
    v = v * 10 + (text[i] - '0');
  }
  return negative ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (auto slash = text.find('/'); slash != std::string::npos) {
    BigInt num = parse_integer(text.substr(0, slash), text);
    BigInt den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw ParseError("zero denominator in '" + text + "'", slash);
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string::npos) {
    std::string frac = text.substr(dot + 1);
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt whole = parse_integer(text.substr(0, dot) + frac, text);
    return Rational(whole, scale);
  }
  return Rational(parse_integer(text, text));
}

}  // namespace dchain
