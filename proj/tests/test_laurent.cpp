#include "lgtrop/laurent.hpp"

#include "support/random_gen.hpp"

#include <doctest.h>

using namespace lgtrop;

namespace {

NovikovScalar tpow(int num, int den = 1) { return NovikovScalar::t_power(Rational(num, den)); }

// W = z1 + z2 + T^a / (z1 z2), the standard three-term fixture.
LaurentSeries p2_potential(const Rational& a) {
    return LaurentSeries::from_terms({
        {{1, 0}, NovikovScalar::constant(1.0)},
        {{0, 1}, NovikovScalar::constant(1.0)},
        {{-1, -1}, NovikovScalar::t_power(a)},
    });
}

}  // namespace

TEST_CASE("evaluation with negative exponents") {
    auto w = p2_potential(Rational(3));
    // z = (T, T): W = 2T + T^3 * T^-2 = 2T + T
    auto val = w.eval({tpow(1), tpow(1)});
    REQUIRE(val.terms().size() == 1);
    CHECK(val.terms()[0].exponent == 1);
    CHECK(val.terms()[0].coeff == Complex(3.0, 0.0));

    CHECK_THROWS_AS(w.eval({NovikovScalar::zero(), tpow(1)}), NumericError);
}

TEST_CASE("restrict_at shifts coefficient valuations") {
    auto w = p2_potential(Rational(3));
    auto r = w.restrict_at({Rational(1), Rational(1)});
    CHECK(*r.coeff({1, 0}).val() == 1);
    CHECK(*r.coeff({0, 1}).val() == 1);
    CHECK(*r.coeff({-1, -1}).val() == 1);

    // Restriction then evaluation at units equals direct evaluation.
    testing::Rng rng(5150);
    for (int i = 0; i < 20; ++i) {
        Rational x1 = rng.rational(0, 4, 3);
        Rational x2 = rng.rational(0, 4, 3);
        auto u1 = NovikovScalar::constant(rng.complex_unit_box());
        auto u2 = NovikovScalar::constant(rng.complex_unit_box());
        auto direct = w.eval({NovikovScalar::t_power(x1) * u1, NovikovScalar::t_power(x2) * u2});
        auto restricted = w.restrict_at({x1, x2}).eval({u1, u2});
        CHECK(approx_equal(direct, restricted, 1e-9));
    }
}

TEST_CASE("leading part at the central fiber of the three-term potential") {
    Rational a(3);
    auto w = p2_potential(a);
    auto lead = w.leading_part({a / 3, a / 3});
    CHECK(lead.delta == 1);
    CHECK(lead.series.support_size() == 3);

    auto off = w.leading_part({Rational(1, 2), Rational(1, 2)});
    CHECK(off.delta == Rational(1, 2));
    CHECK(off.series.support_size() == 2);  // z1 and z2 tie, the far term lags

    auto chamber = w.leading_part({Rational(1, 4), Rational(1, 2)});
    CHECK(chamber.series.support_size() == 1);
}

TEST_CASE("log_partial equals z d/dz as a series identity") {
    testing::Rng rng(8080);
    for (int i = 0; i < 30; ++i) {
        std::vector<std::pair<ExponentVector, NovikovScalar>> terms;
        int n = rng.uniform_int(1, 6);
        for (int t = 0; t < n; ++t) {
            terms.push_back({{rng.uniform_int(-3, 3), rng.uniform_int(-3, 3)}, rng.scalar()});
        }
        auto w = LaurentSeries::from_terms(std::move(terms));
        for (int axis : {0, 1}) {
            auto lhs = w.log_partial(axis);
            ExponentVector e = axis == 0 ? ExponentVector{1, 0} : ExponentVector{0, 1};
            auto rhs = LaurentSeries::monomial(e, NovikovScalar::constant(1.0)) * w.partial(axis);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("wall-crossing substitution agrees with evaluation") {
    // z1 := z1' (1 + T^(-eps) z2'), the blowup coordinate change.
    Rational eps(1, 4);
    auto repl = LaurentSeries::from_terms({
        {{1, 0}, NovikovScalar::constant(1.0)},
        {{1, 1}, NovikovScalar::t_power(-eps)},
    });
    auto w = LaurentSeries::from_terms({
        {{1, 0}, NovikovScalar::constant(1.0)},
        {{0, 1}, NovikovScalar::constant(1.0)},
        {{-1, -1}, NovikovScalar::t_power(Rational(3))},
        {{-2, 1}, NovikovScalar::monomial(Complex(0.5, 1.0), Rational(2))},
    });
    auto sub = w.substitute(0, repl, 48);

    testing::Rng rng(31337);
    for (int i = 0; i < 15; ++i) {
        // Stay inside the expansion regime: val(z2) - eps >= 3/4.
        Rational x1 = rng.rational(0, 3, 2);
        Rational x2 = rng.rational(1, 3, 1);
        auto cutoff = Rational(10);
        std::array<NovikovScalar, 2> p = {
            (NovikovScalar::t_power(x1) * NovikovScalar::constant(rng.complex_unit_box())).with_cutoff(cutoff),
            (NovikovScalar::t_power(x2) * NovikovScalar::constant(rng.complex_unit_box())).with_cutoff(cutoff),
        };
        auto z1_image = repl.eval(p);
        auto direct = w.eval({z1_image, p[1]});
        auto composed = sub.eval(p);
        CHECK(approx_equal(direct, composed, 1e-7));
    }
}

TEST_CASE("substitution rejects non-invertible leading parts") {
    // No support point of z1 + T*z2 dominates the others coordinatewise,
    // so there is no unit factorization c*z^{v0}*(1 + g).
    auto repl = LaurentSeries::from_terms({
        {{1, 0}, NovikovScalar::constant(1.0)},
        {{0, 1}, NovikovScalar::t_power(Rational(1))},
    });
    auto w = LaurentSeries::monomial({-1, 0}, NovikovScalar::constant(1.0));
    CHECK_THROWS_AS(w.substitute(0, repl), SubstitutionError);
    CHECK_THROWS_AS(w.substitute(0, LaurentSeries::zero()), SubstitutionError);
}

TEST_CASE("newton polytope of standard fixtures") {
    auto p2 = p2_potential(Rational(3)).newton_polytope();
    REQUIRE(p2.size() == 3);
    CHECK(p2[0] == ExponentVector{-1, -1});
    CHECK(lattice_area2(p2) == 3);

    // Hirzebruch-type quadrilateral: hull of the F_1 ray generators
    auto fk = LaurentSeries::from_terms({
        {{1, 0}, NovikovScalar::constant(1.0)},
        {{0, 1}, NovikovScalar::constant(1.0)},
        {{-1, 1}, NovikovScalar::t_power(Rational(1))},
        {{0, -1}, NovikovScalar::t_power(Rational(3))},
    });
    auto hull = fk.newton_polytope();
    REQUIRE(hull.size() == 4);
    CHECK(hull[0] == ExponentVector{-1, 1});
    CHECK(lattice_area2(hull) == 4);

    // collinear support degenerates to a segment
    auto seg = LaurentSeries::from_terms({
        {{0, 1}, NovikovScalar::constant(1.0)},
        {{0, -1}, NovikovScalar::constant(1.0)},
        {{0, 0}, NovikovScalar::constant(1.0)},
    });
    CHECK(seg.newton_polytope().size() == 2);
}

TEST_CASE("series arithmetic cancels exactly") {
    auto w = p2_potential(Rational(2));
    auto diff = w - w;
    CHECK(diff.is_zero());
    auto prod = w * LaurentSeries::monomial({1, 1}, NovikovScalar::constant(1.0));
    CHECK(prod.support_size() == 3);
    CHECK(!prod.coeff({0, 0}).is_zero());
}
