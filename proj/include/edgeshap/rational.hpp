#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <cmath>
#include <string>
#include <string_view>

namespace edgeshap {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "p/q", "-p/q" or a decimal integer. Throws ArgumentError.
Rational parse_rational(std::string_view text);

/// Canonical form: "5/3", "-1/2", "9".
std::string to_string(const Rational& value);

/// Shortest decimal string that round-trips to the same double.
std::string format_shortest(double value);

/// Domain behaviour for the two value types a game can be evaluated in.
template <class Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static Rational from_rational(const Rational& r) { return r; }
  static double to_double(const Rational& r) { return r.convert_to<double>(); }
  static bool equal(const Rational& a, const Rational& b, double /*tolerance*/) { return a == b; }
  static bool is_zero(const Rational& a, double /*tolerance*/) { return a == 0; }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double from_rational(const Rational& r) { return r.convert_to<double>(); }
  static double to_double(double d) { return d; }
  /// Relative comparison, scaled by max(1, |a|, |b|).
  static bool equal(double a, double b, double tolerance) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= tolerance * scale;
  }
  static bool is_zero(double a, double tolerance) { return std::abs(a) <= tolerance; }
};

}  // namespace edgeshap

namespace edgeshap {

inline std::string value_string(const Rational& value) { return to_string(value); }
inline std::string value_string(double value) { return format_shortest(value); }

}  // namespace edgeshap
