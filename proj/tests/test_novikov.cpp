#include "lgtrop/novikov.hpp"

#include "support/random_gen.hpp"

#include <doctest.h>

using namespace lgtrop;

namespace {

// Independent oracle for 1/(1 - c T^g): plain geometric series accumulated
// term by term, no scalar arithmetic involved.
NovikovScalar geometric_inverse_oracle(Complex c, const Rational& g, const Rational& cutoff) {
    std::vector<NovikovTerm> terms;
    Complex pow(1.0, 0.0);
    for (Rational e(0); e < cutoff; e += g) {
        terms.push_back({e, pow});
        pow *= c;
    }
    return NovikovScalar::from_terms(std::move(terms), cutoff);
}

}  // namespace

TEST_CASE("valuation basics") {
    auto x = NovikovScalar::constant(2.0) + NovikovScalar::monomial(3.0, Rational(1, 2));
    REQUIRE(x.val().has_value());
    CHECK(*x.val() == 0);
    CHECK(x.leading_coeff() == Complex(2.0, 0.0));

    CHECK_FALSE(NovikovScalar::zero().val().has_value());
    CHECK(NovikovScalar::zero().is_zero());

    auto y = NovikovScalar::monomial(Complex(0.0, 1.0), Rational(-3, 4));
    CHECK(*y.val() == Rational(-3, 4));
}

TEST_CASE("terms are kept sorted, merged and pruned") {
    auto x = NovikovScalar::from_terms({{Rational(1), Complex(1.0, 0.0)},
                                        {Rational(0), Complex(2.0, 0.0)},
                                        {Rational(1), Complex(-1.0, 0.0)},
                                        {Rational(2), Complex(1e-12, 0.0)}});
    REQUIRE(x.terms().size() == 1);
    CHECK(x.terms()[0].exponent == 0);
    CHECK(x.terms()[0].coeff == Complex(2.0, 0.0));
}

TEST_CASE("ring membership") {
    auto unit = NovikovScalar::constant(2.0) + NovikovScalar::t_power(Rational(1, 2));
    CHECK(unit.in_ring(NovikovRing::lambda));
    CHECK(unit.in_ring(NovikovRing::lambda0));
    CHECK(unit.in_ring(NovikovRing::lambda_u));
    CHECK_FALSE(unit.in_ring(NovikovRing::lambda_plus));

    auto small = NovikovScalar::t_power(Rational(1, 3));
    CHECK(small.in_ring(NovikovRing::lambda_plus));
    CHECK_FALSE(small.in_ring(NovikovRing::lambda_u));

    auto neg = NovikovScalar::t_power(Rational(-1));
    CHECK(neg.in_ring(NovikovRing::lambda));
    CHECK_FALSE(neg.in_ring(NovikovRing::lambda0));

    CHECK(NovikovScalar::zero().in_ring(NovikovRing::lambda_plus));
    CHECK_FALSE(NovikovScalar::zero().in_ring(NovikovRing::lambda_u));
}

TEST_CASE("valuation under product and sum (property)") {
    testing::Rng rng(20240811);
    for (int i = 0; i < 200; ++i) {
        auto a = rng.scalar();
        auto b = rng.scalar();
        auto prod = a * b;
        if (!a.is_zero() && !b.is_zero() && !prod.is_zero()) {
            CHECK(*prod.val() == *a.val() + *b.val());
        }
        auto sum = a + b;
        if (!sum.is_zero() && !a.is_zero() && !b.is_zero()) {
            Rational lo = std::min(*a.val(), *b.val());
            CHECK(*sum.val() >= lo);
            if (*a.val() != *b.val()) CHECK(*sum.val() == lo);
        }
    }
}

TEST_CASE("field identities hold numerically (property)") {
    testing::Rng rng(77);
    for (int i = 0; i < 100; ++i) {
        auto a = rng.scalar();
        auto b = rng.scalar();
        auto c = rng.scalar();
        CHECK(approx_equal((a + b) + c, a + (b + c), 1e-12));
        CHECK(approx_equal(a * (b + c), a * b + a * c, 1e-9));
        CHECK(approx_equal(a * b, b * a, 1e-12));
    }
}

TEST_CASE("geometric series inverse matches oracle") {
    Complex c(0.5, 0.25);
    Rational g(1, 3);
    Rational cutoff(4);
    // x = 1 - c T^g
    auto x = NovikovScalar::constant(1.0) + NovikovScalar::monomial(-c, g);
    auto inv = x.with_cutoff(cutoff).invert();
    auto oracle = geometric_inverse_oracle(c, g, cutoff);
    CHECK(approx_equal(inv, oracle, 1e-12));
}

TEST_CASE("invert is a two-sided inverse up to the cutoff (property)") {
    testing::Rng rng(4242);
    for (int i = 0; i < 100; ++i) {
        auto a = rng.scalar(3, 0, 4, 3);
        if (a.is_zero()) continue;
        Rational cutoff(6);
        auto trunc = a.with_cutoff(cutoff);
        auto prod = trunc * trunc.invert();
        REQUIRE(!prod.is_zero());
        CHECK(*prod.val() == 0);
        auto err = prod - NovikovScalar::constant(1.0);
        for (const auto& t : err.terms()) {
            CHECK(std::abs(t.coeff) < 1e-7);
        }
    }
}

TEST_CASE("pow matches repeated multiplication and inverts cleanly") {
    testing::Rng rng(99);
    for (int i = 0; i < 50; ++i) {
        auto a = rng.scalar(3, 0, 3, 2);
        if (a.is_zero()) continue;
        a = a.with_cutoff(Rational(8));
        auto p3 = a * a * a;
        CHECK(approx_equal(a.pow(3), p3, 1e-9));
        auto pm2 = a.pow(-2) * a.pow(2);
        auto err = pm2 - NovikovScalar::constant(1.0);
        for (const auto& t : err.terms()) CHECK(std::abs(t.coeff) < 1e-7);
    }
}

TEST_CASE("cutoff propagates through arithmetic") {
    auto a = NovikovScalar::t_power(Rational(1)).with_cutoff(Rational(3));
    auto b = NovikovScalar::t_power(Rational(5, 2));
    // relative precision of `a` is 2, so the product is known modulo T^(11/2)
    auto prod = a * b;
    CHECK(prod.truncated());
    REQUIRE(prod.cutoff().has_value());
    CHECK(*prod.cutoff() == Rational(11, 2));
    REQUIRE(prod.terms().size() == 1);
    CHECK(prod.terms()[0].exponent == Rational(7, 2));

    auto sum = a + b;
    CHECK(sum.truncated());
    CHECK(sum.terms().size() == 2);
}

TEST_CASE("text format round trips") {
    auto x = NovikovScalar::from_terms({{Rational(-1, 2), Complex(1.5, 0.0)},
                                        {Rational(0), Complex(0.0, -2.0)},
                                        {Rational(7, 3), Complex(-1.0, 1e-3)}});
    auto parsed = NovikovScalar::parse(x.to_string());
    CHECK(parsed == x);

    CHECK(NovikovScalar::parse("0").is_zero());
    CHECK(NovikovScalar::parse("1*T^(0)") == NovikovScalar::constant(1.0));
    CHECK(NovikovScalar::parse("2+3i*T^(1/2)") ==
          NovikovScalar::monomial(Complex(2.0, 3.0), Rational(1, 2)));
    CHECK_THROWS_AS(NovikovScalar::parse("T^2"), ParseError);
    CHECK_THROWS_AS(NovikovScalar::parse("1*T^(1/0)"), ParseError);
}

TEST_CASE("tau controls coefficient pruning") {
    ScopedTau guard(1e-3);
    auto x = NovikovScalar::constant(1e-4);
    CHECK(x.is_zero());
    auto y = NovikovScalar::constant(1.0) + NovikovScalar::constant(-1.0 + 5e-4);
    CHECK(y.is_zero());
}

TEST_CASE("invert rejects zero") {
    CHECK_THROWS_AS(NovikovScalar::zero().invert(), NumericError);
}
