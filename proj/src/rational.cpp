#include "steercert/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "steercert/error.hpp"

namespace steercert {

namespace {

using boost::multiprecision::cpp_int;

cpp_int parse_integer(std::string_view s, std::string_view whole) {
  std::size_t i = 0;
  bool negative = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    negative = s[i] == '-';
    ++i;
  }
  if (i == s.size()) throw ParseError("malformed rational '" + std::string(whole) + "'");
  cpp_int v = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
      throw ParseError("malformed rational '" + std::string(whole) + "'");
    }
    v = v * 10 + (s[i] - '0');
  }
  return negative ? cpp_int(-v) : v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(s, text));
  cpp_int num = parse_integer(trim(s.substr(0, slash)), text);
  cpp_int den = parse_integer(trim(s.substr(slash + 1)), text);
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  if (den < 0) throw ParseError("signed denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

std::string to_string(const Rational& q) {
  const cpp_int num = boost::multiprecision::numerator(q);
  const cpp_int den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& q) {
  cpp_int num = boost::multiprecision::numerator(q);
  cpp_int den = boost::multiprecision::denominator(q);
  if (num == 0) return 0.0;
  const bool negative = num < 0;
  if (negative) num = -num;

  // quo = floor(num * 2^shift / den) lands in [2^53, 2^55); trim it to 54
  // bits (53 + guard) keeping a sticky bit, then round half to even.
  const long nbits = static_cast<long>(boost::multiprecision::msb(num)) + 1;
  const long dbits = static_cast<long>(boost::multiprecision::msb(den)) + 1;
  long shift = 54 - (nbits - dbits);
  if (shift >= 0) {
    num <<= shift;
  } else {
    den <<= -shift;
  }
  cpp_int quo = num / den;
  bool sticky = (num % den) != 0;
  while (boost::multiprecision::msb(quo) + 1 > 54) {
    sticky = sticky || (quo & 1) != 0;
    quo >>= 1;
    --shift;
  }
  const bool guard = (quo & 1) != 0;
  quo >>= 1;
  --shift;
  if (guard && (sticky || (quo & 1) != 0)) quo += 1;
  const double mant = static_cast<double>(static_cast<unsigned long long>(quo));
  const double out = std::ldexp(mant, static_cast<int>(-shift));
  return negative ? -out : out;
}

Rational exact_rational(double v) {
  if (!std::isfinite(v)) throw InvalidArgument("exact_rational: non-finite value");
  if (v == 0.0) return Rational(0);
  int exp = 0;
  const double frac = std::frexp(v, &exp);  // v = frac * 2^exp, 0.5 <= |frac| < 1
  const auto mant = static_cast<long long>(std::ldexp(frac, 53));
  const int e = exp - 53;
  cpp_int num = mant;
  cpp_int den = 1;
  if (e >= 0) {
    num <<= e;
  } else {
    den <<= -e;
  }
  return Rational(num, den);
}

}  // namespace steercert
