#include "lgtrop/rational.hpp"

#include <cctype>

namespace lgtrop {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_integer_token(std::string_view s) {
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = trim(text);
    if (s.empty()) throw ParseError("empty rational literal");
    auto slash = s.find('/');
    if (slash == std::string_view::npos) {
        if (!is_integer_token(s)) throw ParseError("bad rational literal: " + std::string(text));
        return Rational(BigInt(std::string(s)));
    }
    std::string_view num = trim(s.substr(0, slash));
    std::string_view den = trim(s.substr(slash + 1));
    if (!is_integer_token(num) || !is_integer_token(den)) {
        throw ParseError("bad rational literal: " + std::string(text));
    }
    BigInt d{std::string(den)};
    if (d == 0) throw ParseError("zero denominator: " + std::string(text));
    return Rational(BigInt{std::string(num)}, d);
}

std::string to_string(const Rational& value) {
    std::string s = numerator(value).str();
    if (denominator(value) != 1) {
        s += "/";
        s += denominator(value).str();
    }
    return s;
}

std::string to_decimal_string(const Rational& value, int fraction_digits) {
    BigInt scale = 1;
    for (int i = 0; i < fraction_digits; ++i) scale *= 10;
    Rational scaled = value * scale;
    BigInt n = numerator(scaled);
    BigInt d = denominator(scaled);
    bool negative = n < 0;
    if (negative) n = -n;
    // round half away from zero
    BigInt q = (2 * n + d) / (2 * d);
    std::string digits = q.str();
    if (static_cast<int>(digits.size()) <= fraction_digits) {
        digits.insert(0, fraction_digits + 1 - digits.size(), '0');
    }
    std::string out;
    if (negative && q != 0) out += '-';
    out += digits.substr(0, digits.size() - fraction_digits);
    if (fraction_digits > 0) {
        out += '.';
        out += digits.substr(digits.size() - fraction_digits);
    }
    return out;
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

}  // namespace lgtrop
