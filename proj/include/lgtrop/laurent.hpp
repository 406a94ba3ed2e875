#pragma once

#include "lgtrop/novikov.hpp"

#include <array>
#include <compare>
#include <map>
#include <vector>

namespace lgtrop {

// Monomial exponent z1^p z2^q. Ordered lexicographically so that series
// iteration and serialization are canonical.
struct ExponentVector {
    std::int64_t p = 0;
    std::int64_t q = 0;

    friend auto operator<=>(const ExponentVector&, const ExponentVector&) = default;
    ExponentVector operator+(const ExponentVector& o) const { return {p + o.p, q + o.q}; }
    ExponentVector operator-(const ExponentVector& o) const { return {p - o.p, q - o.q}; }
    ExponentVector operator*(std::int64_t k) const { return {p * k, q * k}; }
};

using ValuationPoint = std::array<Rational, 2>;

inline Rational dot(const ValuationPoint& x, const ExponentVector& v) {
    return x[0] * v.p + x[1] * v.q;
}

// A point of the SYZ fibration chart: z_i = T^{base_i} * unit_i with
// unit_i in Lambda_U.
struct FiberPoint {
    ValuationPoint base;
    std::array<NovikovScalar, 2> units;

    std::array<NovikovScalar, 2> coordinates() const {
        return {NovikovScalar::t_power(base[0]) * units[0], NovikovScalar::t_power(base[1]) * units[1]};
    }
};

class SubstitutionError : public std::runtime_error {
public:
    explicit SubstitutionError(const std::string& what) : std::runtime_error(what) {}
};

class LaurentSeries;

// Monomials attaining the tropical minimum at a point, with their original
// coefficients, and the attained minimum delta.
struct LeadingPart;

// Finite Laurent series in two variables with NovikovScalar coefficients.
// Zero coefficients are never stored.
class LaurentSeries {
public:
    LaurentSeries() = default;

    static LaurentSeries zero() { return LaurentSeries(); }
    static LaurentSeries monomial(ExponentVector v, NovikovScalar c);
    static LaurentSeries from_terms(std::vector<std::pair<ExponentVector, NovikovScalar>> terms);

    const std::map<ExponentVector, NovikovScalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t support_size() const { return terms_.size(); }
    NovikovScalar coeff(const ExponentVector& v) const;
    std::vector<ExponentVector> support() const;

    LaurentSeries operator+(const LaurentSeries& rhs) const;
    LaurentSeries operator-(const LaurentSeries& rhs) const;
    LaurentSeries operator*(const LaurentSeries& rhs) const;
    LaurentSeries operator*(const NovikovScalar& rhs) const;
    LaurentSeries operator-() const;

    // Applies a truncation cutoff to every coefficient.
    LaurentSeries with_cutoff(const Rational& cutoff) const;

    // Full evaluation at a pair of Novikov scalars (components may require
    // inversion for negative exponents; zero coordinates are rejected).
    NovikovScalar eval(const std::array<NovikovScalar, 2>& z) const;
    NovikovScalar eval(const FiberPoint& p) const;

    // W_x(unit coords): multiplies each coefficient by T^{<x, v>}.
    LaurentSeries restrict_at(const ValuationPoint& x) const;

    // min_v val(c_v) + <x, v>; empty for the zero series.
    std::optional<Rational> tropical_value(const ValuationPoint& x) const;

    // Monomials attaining tropical_value(x), with their original coefficients.
    LeadingPart leading_part(const ValuationPoint& x) const;

    // d/dz_axis and z_axis * d/dz_axis (axis is 0 or 1).
    LaurentSeries partial(int axis) const;
    LaurentSeries log_partial(int axis) const;

    // Substitution z_axis := replacement(z1', z2'), other variable unchanged.
    // The replacement must factor as c * z^{v0} * (1 + g) where v0 is its
    // lexicographically smallest support point, c is a nonzero scalar, and
    // every other support point dominates v0 coordinatewise; then negative
    // powers expand binomially with total degree capped at max_degree.
    LaurentSeries substitute(int axis, const LaurentSeries& replacement, int max_degree = 16) const;

    // Vertices of the Newton polytope, counterclockwise, starting from the
    // lexicographically smallest vertex. Size 1/2 for degenerate supports.
    std::vector<ExponentVector> newton_polytope() const;

    bool operator==(const LaurentSeries& rhs) const;

private:
    std::map<ExponentVector, NovikovScalar> terms_;

    void add_in_place(const ExponentVector& v, const NovikovScalar& c);
};

struct LeadingPart {
    LaurentSeries series;
    Rational delta;  // the attained minimum
};

// 2 x (euclidean area) of the polygon with the given vertices (shoelace).
// Accepts hull output; collinear/degenerate input yields 0.
std::int64_t lattice_area2(const std::vector<ExponentVector>& polygon);

// Convex hull of arbitrary lattice points, counterclockwise from lex-min.
std::vector<ExponentVector> convex_hull(std::vector<ExponentVector> points);

// gcd of coordinates: number of lattice points on the segment minus one.
std::int64_t lattice_length(const ExponentVector& v);

}  // namespace lgtrop
