#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace bft {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;

// Scalar backend selection. Every algorithm in the library is templated on
// one of these two types: Rational gives exact results, Complex gives
// floating-point results with explicit tolerances.
template <class S>
inline constexpr bool is_rational_v = std::is_same_v<S, Rational>;
template <class S>
inline constexpr bool is_complex_v = std::is_same_v<S, Complex>;

struct precondition_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct verification_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline Complex to_complex(const Rational& q) { return Complex(to_double(q), 0.0); }
inline Complex to_complex(const Complex& z) { return z; }

// Canonical "num/den" form; the denominator is always positive and the
// fraction is reduced (cpp_rational maintains both invariants).
inline std::string rational_to_string(const Rational& q) {
  return numerator(q).str() + "/" + denominator(q).str();
}

inline Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(Integer(s));
    Integer num(s.substr(0, slash));
    Integer den(s.substr(slash + 1));
    if (den == 0) throw precondition_error("rational with zero denominator: " + s);
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw precondition_error("malformed rational: " + s);
  }
}

inline bool is_perfect_square(const Integer& n, Integer& root) {
  if (n < 0) return false;
  root = boost::multiprecision::sqrt(n);
  return root * root == n;
}

// q = r*r with r >= 0, when such a rational r exists.
inline std::optional<Rational> rational_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  Integer rn, rd;
  if (!is_perfect_square(numerator(q), rn)) return std::nullopt;
  if (!is_perfect_square(denominator(q), rd)) return std::nullopt;
  return Rational(rn, rd);
}

// Best rational approximation with bounded denominator (continued fractions).
inline Rational rationalize(double x, const Integer& max_den = 1000000) {
  if (!std::isfinite(x)) throw precondition_error("cannot rationalize non-finite value");
  bool neg = x < 0;
  double v = neg ? -x : x;
  // Convergents p/q of the continued fraction of v.
  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(frac);
    if (fl > 9.0e18) break;
    Integer a = static_cast<long long>(fl);
    Integer p2 = a * p1 + p0;
    Integer q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    double rem = frac - fl;
    if (rem < 1e-15 * std::max(1.0, v)) break;
    frac = 1.0 / rem;
  }
  if (q1 == 0) return Rational(0);
  Rational r(p1, q1);
  return neg ? Rational(-r) : r;
}

inline double abs_value(const Complex& z) { return std::abs(z); }
inline double abs_value(double x) { return std::abs(x); }

}  // namespace bft
