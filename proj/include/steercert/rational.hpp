#pragma once

#include <complex>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace steercert {

using Rational = boost::multiprecision::cpp_rational;

// Parses "p/q", "p" or "-p/q" (decimal integers of any length).
Rational parse_rational(std::string_view text);

// Exact decimal rendering "p/q" (or "p" when q == 1).
std::string to_string(const Rational& q);

// Correctly rounded conversion.
double to_double(const Rational& q);

// Every finite double is a dyadic rational; this returns it exactly.
Rational exact_rational(double v);

// Complex number over the rationals. Used where results must be checked
// with zero rounding error.
struct QComplex {
  Rational re{0};
  Rational im{0};

  QComplex() = default;
  QComplex(Rational r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  QComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  QComplex(int r) : re(r) {}  // NOLINT(google-explicit-constructor)

  QComplex& operator+=(const QComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  QComplex& operator-=(const QComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  QComplex& operator*=(const QComplex& o) {
    Rational r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  friend QComplex operator+(QComplex a, const QComplex& b) { return a += b; }
  friend QComplex operator-(QComplex a, const QComplex& b) { return a -= b; }
  friend QComplex operator*(QComplex a, const QComplex& b) { return a *= b; }
  friend QComplex operator-(const QComplex& a) { return {-a.re, -a.im}; }
  friend bool operator==(const QComplex& a, const QComplex& b) {
    return a.re == b.re && a.im == b.im;
  }

  std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }
};

inline QComplex conj_of(const QComplex& z) { return {z.re, -z.im}; }
inline std::complex<double> conj_of(const std::complex<double>& z) { return std::conj(z); }

}  // namespace steercert
