#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lgtrop {

// Exact arbitrary-precision rational. All exponents, valuations and lattice
// data in this library are held exactly; doubles appear only in complex
// coefficients.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Parses "p", "-p", "p/q" (whitespace-trimmed). Throws ParseError on anything else.
Rational parse_rational(std::string_view text);

// Lowest terms, "p" or "p/q".
std::string to_string(const Rational& value);

// Decimal rendering with a fixed number of fraction digits, rounding half away
// from zero. Used for deterministic SVG/JSON float output.
std::string to_decimal_string(const Rational& value, int fraction_digits);

double to_double(const Rational& value);

// Exact 2x2 integer determinant |a b; c d|.
inline std::int64_t det2(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    return a * d - b * c;
}

inline std::int64_t gcd_nonneg(std::int64_t a, std::int64_t b) {
    return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

}  // namespace lgtrop
