#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "agora/errors.hpp"

namespace agora {

using Json = nlohmann::ordered_json;

// Exact arithmetic backend. Arbitrary precision keeps long Monte-Carlo
// accumulations and product probabilities exact without overflow concerns.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

enum class Arithmetic { Rational, Float };

template <class T>
struct NumericTraits;

template <>
struct NumericTraits<Rational> {
  static constexpr Arithmetic mode = Arithmetic::Rational;
  static constexpr bool exact = true;
  static constexpr const char* name = "rational";
};

template <>
struct NumericTraits<double> {
  static constexpr Arithmetic mode = Arithmetic::Float;
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
};

template <class T>
inline constexpr bool is_exact_v = NumericTraits<T>::exact;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.template convert_to<double>(); }

template <class T>
T abs_value(const T& x) {
  if constexpr (is_exact_v<T>) {
    return x < 0 ? T(-x) : x;
  } else {
    return std::abs(x);
  }
}

inline const char* arithmetic_name(Arithmetic a) {
  return a == Arithmetic::Rational ? "rational" : "float";
}

// --- formatting -------------------------------------------------------------

// Shortest round-trip representation.
inline std::string format_number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

// "num/den" in lowest terms, or just "num" for integers.
inline std::string format_number(const Rational& x) {
  if (denominator(x) == 1) return numerator(x).str();
  return numerator(x).str() + "/" + denominator(x).str();
}

// --- parsing ----------------------------------------------------------------

// Exact value of a decimal literal, with optional sign and exponent
// ("-12.345e-2" -> -12345/100000).
inline Rational rational_from_decimal(std::string_view text) {
  std::size_t pos = 0;
  auto fail = [&]() -> Rational {
    throw SchemaError("not a decimal number: '" + std::string(text) + "'");
  };
  if (text.empty()) fail();
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  BigInt digits = 0;
  long long frac_digits = 0;
  bool seen_digit = false, seen_dot = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c >= '0' && c <= '9') {
      digits = digits * 10 + (c - '0');
      if (seen_dot) ++frac_digits;
      seen_digit = true;
    } else if (c == '.') {
      if (seen_dot) fail();
      seen_dot = true;
    } else if (c == 'e' || c == 'E') {
      break;
    } else {
      fail();
    }
  }
  if (!seen_digit) fail();
  long long exponent = 0;
  if (pos < text.size()) {
    ++pos;  // past 'e'
    bool exp_neg = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      exp_neg = text[pos] == '-';
      ++pos;
    }
    if (pos >= text.size()) fail();
    for (; pos < text.size(); ++pos) {
      char c = text[pos];
      if (c < '0' || c > '9') fail();
      exponent = exponent * 10 + (c - '0');
      if (exponent > 100000) fail();
    }
    if (exp_neg) exponent = -exponent;
  }
  BigInt num = digits;
  BigInt den = 1;
  long long net = exponent - frac_digits;
  if (net > 0) {
    num *= boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(net));
  } else if (net < 0) {
    den = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(-net));
  }
  if (negative) num = -num;
  return Rational(num, den);
}

// Accepts "p/q" fractions as well as decimal literals.
inline Rational rational_from_string(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return rational_from_decimal(text);
  Rational num = rational_from_decimal(text.substr(0, slash));
  Rational den = rational_from_decimal(text.substr(slash + 1));
  if (den == 0) throw SchemaError("zero denominator in '" + std::string(text) + "'");
  return num / den;
}

inline double double_from_string(std::string_view text) {
  return to_double(rational_from_string(text));
}

// Numbers in scenario documents may be JSON numbers or strings ("1/3",
// "0.125"). In rational mode a JSON float is read through its shortest
// decimal representation, so the value the author wrote is what is parsed.
template <class T>
T parse_number(const Json& j);

template <>
inline Rational parse_number<Rational>(const Json& j) {
  if (j.is_string()) return rational_from_string(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return Rational(j.get<std::uint64_t>());
  if (j.is_number_float()) return rational_from_decimal(format_number(j.get<double>()));
  throw SchemaError("expected a number, got " + std::string(j.type_name()));
}

template <>
inline double parse_number<double>(const Json& j) {
  if (j.is_string()) return double_from_string(j.get<std::string>());
  if (j.is_number()) return j.get<double>();
  throw SchemaError("expected a number, got " + std::string(j.type_name()));
}

inline Json number_to_json(double x) { return Json(x); }

inline Json number_to_json(const Rational& x) {
  const auto& num = numerator(x);
  if (denominator(x) == 1 && num >= std::numeric_limits<std::int64_t>::min() &&
      num <= std::numeric_limits<std::int64_t>::max()) {
    return Json(num.template convert_to<std::int64_t>());
  }
  return Json(format_number(x));
}

// --- roots ------------------------------------------------------------------

// base^(1/n). The rational version is a high-precision approximation
// (~90 significant digits), exact arithmetic continues from there.
inline double nth_root(double base, int n) { return std::pow(base, 1.0 / n); }

inline Rational nth_root(const Rational& base, int n) {
  if (base < 0) throw InvariantError("nth_root of negative value");
  if (base == 0) return Rational(0);
  using BigFloat = boost::multiprecision::cpp_bin_float_100;
  BigFloat b = BigFloat(numerator(base)) / BigFloat(denominator(base));
  BigFloat r = boost::multiprecision::pow(b, BigFloat(1) / n);
  return rational_from_decimal(r.str(90));
}

}  // namespace agora
