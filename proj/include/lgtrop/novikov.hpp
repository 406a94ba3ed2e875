#pragma once

#include "lgtrop/rational.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace lgtrop {

using Complex = std::complex<double>;

class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

struct NovikovTerm {
    Rational exponent;
    Complex coeff;
};

// Ambient rings of the Novikov field and its distinguished subsets.
//   lambda      : the whole field
//   lambda0     : val >= 0
//   lambda_plus : val > 0
//   lambda_u    : units of lambda0 with nonzero constant term (C^* + lambda_plus)
enum class NovikovRing { lambda, lambda0, lambda_plus, lambda_u };

// Global numeric configuration for scalar arithmetic.
//   tau:                coefficients with |c| <= tau are pruned to zero.
//   default_expansion:  cutoff used by invert() when the operand carries none.
struct NovikovConfig {
    double tau = 1e-9;
};

NovikovConfig& novikov_config();

// RAII override of the coefficient tolerance for a scope.
class ScopedTau {
public:
    explicit ScopedTau(double tau);
    ~ScopedTau();

private:
    double saved_;
};

// A truncated element of the Novikov field over C in the formal parameter T:
//   sum_i c_i T^(e_i),  e_i strictly increasing exact rationals, c_i nonzero.
//
// Values are immutable: every operation returns a new scalar. A scalar may
// carry a truncation cutoff; terms with exponent >= cutoff are dropped and
// the scalar is marked truncated. Cutoffs propagate through arithmetic as the
// minimum of the operand cutoffs. val() of the zero scalar is reported as
// "infinite" via an empty optional.
class NovikovScalar {
public:
    NovikovScalar() = default;

    static NovikovScalar zero() { return NovikovScalar(); }
    static NovikovScalar constant(Complex c);
    static NovikovScalar monomial(Complex c, Rational exponent);
    // T^e
    static NovikovScalar t_power(Rational exponent) { return monomial(Complex(1.0, 0.0), std::move(exponent)); }
    // Normalizes arbitrary term lists: sorts, merges equal exponents, prunes.
    static NovikovScalar from_terms(std::vector<NovikovTerm> terms,
                                    std::optional<Rational> cutoff = std::nullopt);

    const std::vector<NovikovTerm>& terms() const { return terms_; }
    const std::optional<Rational>& cutoff() const { return cutoff_; }
    bool truncated() const { return cutoff_.has_value(); }
    bool is_zero() const { return terms_.empty(); }

    // Valuation: exponent of the lowest term; empty optional encodes +infinity.
    std::optional<Rational> val() const;
    // Coefficient of the lowest term; throws NumericError on the zero scalar.
    Complex leading_coeff() const;
    Rational leading_exponent() const;
    // Coefficient at an exact exponent (zero if absent).
    Complex coeff_at(const Rational& exponent) const;

    NovikovScalar with_cutoff(Rational cutoff) const;
    // Drops terms with exponent >= cutoff without recording the cutoff.
    NovikovScalar dropped_above(const Rational& cutoff) const;

    NovikovScalar operator-() const;
    NovikovScalar operator+(const NovikovScalar& rhs) const;
    NovikovScalar operator-(const NovikovScalar& rhs) const;
    NovikovScalar operator*(const NovikovScalar& rhs) const;
    NovikovScalar operator*(const Complex& rhs) const;

    // Multiplicative inverse. Throws NumericError on zero. For a scalar with
    // more than one term the inverse is an infinite series; it is expanded up
    // to the operand's cutoff, or up to `fallback_cutoff` relative to the
    // leading exponent when the operand is exact (default: leading exponent
    // negated plus 4 x max(1, |e_max - e_min|)).
    NovikovScalar invert(std::optional<Rational> fallback_cutoff = std::nullopt) const;

    // x^n for integer n; negative n via invert().
    NovikovScalar pow(long long n) const;

    bool in_ring(NovikovRing ring) const;

    // Exact structural equality (same exponents, same coefficient bits).
    bool operator==(const NovikovScalar& rhs) const;

    std::string to_string() const;
    static NovikovScalar parse(std::string_view text);

private:
    std::vector<NovikovTerm> terms_;
    std::optional<Rational> cutoff_;

    void prune_and_truncate();
};

NovikovScalar operator*(const Complex& lhs, const NovikovScalar& rhs);

// |a - b| coefficient-wise within tol, identical exponent support after
// pruning at tol. Used by tests; not an algebraic equality.
bool approx_equal(const NovikovScalar& a, const NovikovScalar& b, double tol);

}  // namespace lgtrop
