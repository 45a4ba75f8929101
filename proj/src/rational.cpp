#include "edgeshap/rational.hpp"

#include "edgeshap/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

namespace edgeshap {

namespace {

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const auto numerator = text.substr(0, slash);
  const auto denominator = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_literal(numerator) || !is_integer_literal(denominator) || denominator.front() == '-' ||
      denominator.front() == '+') {
    throw ArgumentError("not a rational literal: '" + std::string(text) + "'");
  }
  const std::string num(numerator.front() == '+' ? numerator.substr(1) : numerator);
  const BigInt den{std::string(denominator)};
  if (den == 0) throw ArgumentError("zero denominator in '" + std::string(text) + "'");
  return Rational(BigInt{num}, den);
}

std::string to_string(const Rational& value) { return value.str(); }

std::string format_shortest(double value) {
  std::array<char, 64> buffer{};
  const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), result.ptr);
}

}  // namespace edgeshap
