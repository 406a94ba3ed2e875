#include "lgtrop/critical.hpp"

#include "lgtrop/toric.hpp"
#include "lgtrop/tropical.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

using namespace lgtrop;

namespace {

ToricSurfaceModel p2_model(const Rational& a) {
    return make_model({{1, 0}, {0, 1}, {-1, -1}}, {0, 0, a});
}

ToricSurfaceModel fk_model(std::int64_t k, const Rational& a, const Rational& b) {
    return make_model({{1, 0}, {0, 1}, {-1, -k}, {0, -1}}, {0, 0, a, b});
}

ToricSurfaceModel five_ray_model(const Rational& a, const Rational& b, const Rational& c) {
    return make_model({{1, 0}, {0, 1}, {-1, -1}, {0, -1}, {1, -1}}, {0, 0, a, b, c});
}

// The blown up five-ray fixture: three points on the divisor of ray 1, one on
// the divisor of ray 3.
ToricSurfaceModel blown_five_ray() {
    ToricSurfaceModel m = nontoric_blowup(five_ray_model(9, 7, 6), 1,
                                          {Rational(1, 8), Rational(1, 16), Rational(1, 32)});
    return nontoric_blowup(m, 3, {Rational(1, 9)});
}

// Re-evaluation noise scales with the largest coordinate coefficient; terms
// below the double precision floor at that scale are numerical zeros.
void check_residual_against(const LaurentSeries& W, const CriticalPoint& pt) {
    double scale = 1.0;
    for (const auto& c : pt.coords) {
        for (const auto& t : c.terms()) scale = std::max(scale, std::abs(t.coeff));
    }
    for (int axis : {0, 1}) {
        const NovikovScalar r = W.partial(axis).eval(pt.coords);
        bool ok = true;
        for (const auto& t : r.terms()) {
            if (t.exponent < pt.residual_valuation && std::abs(t.coeff) > 1e-11 * scale) ok = false;
        }
        CHECK(ok);
    }
}

void check_pairwise_distinct_values(const std::vector<CriticalPoint>& pts) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            CHECK(!approx_equal(pts[i].critical_value, pts[j].critical_value, 1e-7));
        }
    }
}

int count_at(const std::vector<CriticalPoint>& pts, const ValuationPoint& x) {
    return static_cast<int>(
        std::count_if(pts.begin(), pts.end(), [&](const CriticalPoint& p) { return p.valuation == x; }));
}

}  // namespace

TEST_CASE("solving the triangle model finds the three torus points") {
    const auto m = p2_model(3);
    const SolveResult res = find_all_geometric(m);
    REQUIRE(res.points.size() == 3);
    CHECK(res.summary.toric_count == 3);
    CHECK(res.summary.nontoric_count == 0);
    CHECK(res.summary.nongeometric_count == 0);
    CHECK(res.summary.expected_rank == 3);
    CHECK(res.summary.count_law_holds);
    CHECK(res.summary.diagnostics.empty());
    for (const auto& p : res.points) {
        CHECK(p.valuation == ValuationPoint{Rational(1), Rational(1)});
        CHECK(p.kind == CriticalKind::toric);
        CHECK(p.geometric);
        CHECK(p.morse);
        CHECK(p.origin_type == CriticalOriginType::vertex);
        CHECK(p.residual_valuation >= m.trunc_order);
        check_residual_against(w_min(m), p);
    }
    check_pairwise_distinct_values(res.points);
}

TEST_CASE("solving Hirzebruch models routes the edge and matches the closed form") {
    const Rational a(4);
    const Rational b(1);
    for (std::int64_t k = 0; k <= 3; ++k) {
        CAPTURE(k);
        const Rational A = a - Rational(k) * b / 2;
        const auto m = fk_model(k, a, b);
        const SolveResult res = find_all_geometric(m);
        // At k = 3 the subdivision grows a third cell whose dual vertex
        // carries one extra critical point outside the moment polytope.
        const std::size_t expected = k == 3 ? 5 : 4;
        REQUIRE(res.points.size() == expected);
        CHECK(res.summary.toric_count == 4);
        CHECK(res.summary.nongeometric_count == (k == 3 ? 1 : 0));
        CHECK(res.summary.count_law_holds);
        for (const auto& p : res.points) {
            if (p.origin_type == CriticalOriginType::vertex) {
                CHECK(k == 3);
                CHECK(p.valuation == ValuationPoint{Rational(-1), Rational(2)});
                CHECK(!p.geometric);
                CHECK(p.morse);
                continue;
            }
            CHECK(p.valuation == ValuationPoint{A / 2, b / 2});
            CHECK(p.origin_type == CriticalOriginType::edge);
            CHECK(p.kind == CriticalKind::toric);
            CHECK(p.geometric);
            CHECK(p.morse);
            CHECK(p.residual_valuation >= m.trunc_order);
            check_residual_against(w_min(m), p);
        }
        check_pairwise_distinct_values(res.points);
    }
}

TEST_CASE("a sideways square model is normalized before the edge solver") {
    // Here a < b, so the non-convenient edge joins (1,0) and (-1,0) and the
    // normalization has to rotate the chart.
    const auto m = fk_model(0, Rational(3, 2), 4);
    const SolveResult res = find_all_geometric(m);
    REQUIRE(res.points.size() == 4);
    CHECK(res.summary.count_law_holds);
    for (const auto& p : res.points) {
        CHECK(p.valuation == ValuationPoint{Rational(3, 4), Rational(2)});
        CHECK(p.origin_type == CriticalOriginType::edge);
        CHECK(p.morse);
        check_residual_against(w_min(m), p);
    }
    check_pairwise_distinct_values(res.points);
}

TEST_CASE("the square model at equal sizes hits the coincident value wall") {
    // Two of the four points share the critical value zero when a = b.
    CHECK_THROWS_AS(find_all_geometric(fk_model(0, 3, 3)), GenericityViolation);
}

TEST_CASE("a toric blowup adds one point and preserves the previous ones") {
    const auto m0 = p2_model(3);
    const SolveResult before = find_all_geometric(m0);
    std::vector<ValuationPoint> vals;
    for (const auto& p : before.points) vals.push_back(p.valuation);

    const Rational eta(1, 2);
    const auto m1 = toric_blowup(m0, 0, eta, &vals);
    const SolveResult after = find_all_geometric(m1);
    REQUIRE(after.points.size() == 4);
    CHECK(after.summary.expected_rank == 4);
    CHECK(after.summary.count_law_holds);

    CHECK(count_at(after.points, {eta, eta}) == 1);
    CHECK(count_at(after.points, {Rational(1), Rational(1)}) == 3);

    // The persistent points keep their leading coefficients.
    std::vector<Complex> old_lead, new_lead;
    for (const auto& p : before.points) old_lead.push_back(p.coords[0].leading_coeff());
    for (const auto& p : after.points) {
        if (p.valuation == ValuationPoint{Rational(1), Rational(1)}) {
            new_lead.push_back(p.coords[0].leading_coeff());
            CHECK(p.critical_value.leading_exponent() == Rational(1));
        } else {
            CHECK(p.critical_value.leading_exponent() == eta);
        }
    }
    for (const Complex& c : old_lead) {
        CHECK(std::any_of(new_lead.begin(), new_lead.end(),
                          [&](const Complex& d) { return std::abs(c - d) < 1e-7; }));
    }

    // A size beyond the certified bound is rejected unless overridden.
    CHECK_THROWS_AS(toric_blowup(m0, 0, Rational(2), &vals), SizeBoundViolated);
    const auto forced = toric_blowup(m0, 0, Rational(2), &vals, true);
    CHECK(forced.rays.size() == 4);
}

TEST_CASE("non-toric blowups of the triangle match the product chart closed form") {
    const std::vector<Rational> eps{Rational(1, 2), Rational(1, 3), Rational(1, 4)};
    auto m = nontoric_blowup(p2_model(3), 1, eps);
    m.trunc_order = Rational(10);
    const SolveResult res = find_all_geometric(m);
    REQUIRE(res.points.size() == 6);
    CHECK(res.summary.toric_count == 3);
    CHECK(res.summary.nontoric_count == 3);
    CHECK(res.summary.nongeometric_count == 0);
    CHECK(res.summary.expected_rank == 6);
    CHECK(res.summary.count_law_holds);
    CHECK(res.summary.diagnostics.empty());

    const std::vector<ValuationPoint> expect{{Rational(1, 2), Rational(1, 2)},
                                             {Rational(1, 2), Rational(1, 3)},
                                             {Rational(7, 12), Rational(1, 4)}};
    for (std::size_t i = 0; i < expect.size(); ++i) {
        const auto it = std::find_if(res.points.begin(), res.points.end(),
                                     [&](const CriticalPoint& p) { return p.valuation == expect[i]; });
        REQUIRE(it != res.points.end());
        CHECK(it->kind == CriticalKind::nontoric);
        CHECK(it->geometric);
        CHECK(it->morse);
        // Critical value -T^{eps_i} up to higher order.
        CHECK(it->critical_value.leading_exponent() == eps[i]);
        CHECK(std::abs(it->critical_value.leading_coeff() - Complex(-1.0, 0.0)) < 1e-7);
    }
    CHECK(count_at(res.points, {Rational(1), Rational(1)}) == 3);
    for (const auto& p : res.points) {
        if (p.valuation == ValuationPoint{Rational(1), Rational(1)}) {
            CHECK(p.kind == CriticalKind::toric);
        }
        check_residual_against(w_min(m), p);
    }
    check_pairwise_distinct_values(res.points);
}

TEST_CASE("the blown up five-ray model satisfies the count law with one excluded point") {
    auto m = blown_five_ray();
    m.trunc_order = Rational(8);
    const SolveResult res = find_all_geometric(m);
    REQUIRE(res.points.size() == 10);
    CHECK(res.summary.expected_rank == 9);
    CHECK(res.summary.toric_count == 5);
    CHECK(res.summary.nontoric_count == 4);
    CHECK(res.summary.nongeometric_count == 1);
    CHECK(res.summary.count_law_holds);
    CHECK(res.summary.diagnostics.empty());

    int nongeo = 0;
    for (const auto& p : res.points) {
        CHECK(p.morse);
        CHECK(p.residual_valuation >= Rational(8));
        check_residual_against(w_min(m), p);
        if (!p.geometric) {
            ++nongeo;
            CHECK(p.valuation == ValuationPoint{Rational(1), Rational(71, 9)});
        }
    }
    CHECK(nongeo == 1);
    check_pairwise_distinct_values(res.points);
}

TEST_CASE("duplicate blowup sizes on one divisor violate genericity") {
    auto m = nontoric_blowup(p2_model(3), 1, {Rational(1, 2)});
    m.nontoric_blowups[1] = {Rational(1, 2), Rational(1, 2)};
    CHECK_THROWS_AS(find_all_geometric(m), GenericityViolation);
}

TEST_CASE("admissible perturbations keep the critical points and shift the values") {
    const auto m = p2_model(3);
    const SolveResult base = find_all_geometric(m);

    const LaurentSeries pert =
        LaurentSeries::monomial({0, 0}, NovikovScalar::t_power(Rational(5)));
    const SolveResult moved = find_all_geometric(m, &pert);
    REQUIRE(moved.points.size() == base.points.size());
    for (std::size_t i = 0; i < moved.points.size(); ++i) {
        CHECK(moved.points[i].valuation == base.points[i].valuation);
        CHECK(approx_equal(moved.points[i].coords[0], base.points[i].coords[0], 1e-7));
        CHECK(approx_equal(moved.points[i].coords[1], base.points[i].coords[1], 1e-7));
        // A constant perturbation shifts every critical value by exactly T^5.
        CHECK(approx_equal(moved.points[i].critical_value,
                           base.points[i].critical_value + NovikovScalar::t_power(Rational(5)),
                           1e-7));
    }

    const LaurentSeries low =
        LaurentSeries::monomial({0, 0}, NovikovScalar::t_power(Rational(1, 2)));
    CHECK_THROWS_AS(find_all_geometric(m, &low), std::invalid_argument);
}

TEST_CASE("admissible perturbations also preserve edge points") {
    const auto m = fk_model(1, 4, 1);
    const SolveResult base = find_all_geometric(m);
    const LaurentSeries pert =
        LaurentSeries::monomial({0, 0}, NovikovScalar::t_power(Rational(6)));
    const SolveResult moved = find_all_geometric(m, &pert);
    REQUIRE(moved.points.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(moved.points[i].valuation == base.points[i].valuation);
        CHECK(approx_equal(moved.points[i].coords[1], base.points[i].coords[1], 1e-7));
    }
}

TEST_CASE("the half-size wall model is rejected as unsupported by the generic solver") {
    // At eta = b/2 one flanking cell of the origin edge is a quadrilateral.
    const auto m = toric_blowup(fk_model(1, 8, 2), 0, Rational(1));
    CHECK_THROWS_AS(find_all_geometric(m), std::invalid_argument);
}

TEST_CASE("continuum scan: moving and stationary branches follow the closed trajectories") {
    const Rational a(8), b(2);
    const std::int64_t k = 1;
    const Rational A = a - Rational(k) * b / 2;  // 7
    const auto m = toric_blowup(fk_model(k, a, b), 0, b / 2);
    const std::vector<Rational> eps_values{Rational(1, 2), Rational(1)};
    const Rational trunc(5);
    const auto samples = continuum_scan(m, eps_values, trunc);
    REQUIRE(samples.size() == 2);

    for (std::size_t s = 0; s < samples.size(); ++s) {
        const auto& smp = samples[s];
        const Rational eps = eps_values[s];
        CHECK(smp.eps == eps);
        REQUIRE(smp.moving.size() == 3);
        REQUIRE(smp.stationary.size() == 2);
        REQUIRE(smp.moving_offsets.size() == 3);

        const Rational blue_x = (A - eps) / 2;
        const Rational red_x = eps + b / 2;
        CHECK(smp.moving[0].valuation == ValuationPoint{blue_x, b / 2});
        CHECK(smp.moving[1].valuation == ValuationPoint{blue_x, b / 2});
        CHECK(smp.moving[2].valuation == ValuationPoint{red_x, b / 2});
        CHECK(smp.moving_offsets[0] == (A - b - eps) / 2);
        CHECK(smp.moving_offsets[1] == (A - b - eps) / 2);
        CHECK(smp.moving_offsets[2] == eps);
        CHECK(!approx_equal(smp.moving[0].critical_value, smp.moving[1].critical_value, 1e-7));

        const LaurentSeries Wb =
            w_min(m) + LaurentSeries::monomial({1, 0}, NovikovScalar::t_power(eps));
        for (const auto& p : smp.moving) {
            CHECK(p.morse);
            CHECK(p.residual_valuation >= trunc);
            check_residual_against(Wb, p);
            CHECK(p.critical_value.leading_exponent() == b / 2);
            CHECK(std::abs(p.critical_value.leading_coeff() - Complex(-2.0, 0.0)) < 1e-6);
        }
        for (const auto& p : smp.stationary) {
            CHECK(p.valuation == ValuationPoint{A / 2, b / 2});
            CHECK(p.morse);
            CHECK(p.residual_valuation >= trunc);
            check_residual_against(Wb, p);
            CHECK(p.critical_value.leading_exponent() == b / 2);
            CHECK(std::abs(p.critical_value.leading_coeff() - Complex(2.0, 0.0)) < 1e-6);
        }
        CHECK(!approx_equal(smp.stationary[0].critical_value, smp.stationary[1].critical_value,
                            1e-7));
    }

    // The merging pair and the single point meet at the window boundary.
    const Rational eps_max = (A - b) / 3;
    CHECK((A - eps_max) / 2 == eps_max + b / 2);
    // Across samples the pair moves down and the single point moves up.
    CHECK(samples[0].moving[0].valuation[0] > samples[1].moving[0].valuation[0]);
    CHECK(samples[0].moving[2].valuation[0] < samples[1].moving[2].valuation[0]);
}

TEST_CASE("continuum scan rejects out-of-window sizes and wrong shapes") {
    const auto m = toric_blowup(fk_model(1, 8, 2), 0, Rational(1));
    CHECK_THROWS_AS(continuum_scan(m, {Rational(0)}, Rational(4)), OutOfRange);
    CHECK_THROWS_AS(continuum_scan(m, {Rational(5, 3)}, Rational(4)), OutOfRange);
    CHECK_THROWS_AS(continuum_scan(m, {Rational(2)}, Rational(4)), OutOfRange);

    CHECK_THROWS_AS(continuum_scan(p2_model(3), {Rational(1, 2)}, Rational(4)),
                    std::invalid_argument);
    CHECK_THROWS_AS(continuum_scan(fk_model(1, 8, 2), {Rational(1, 2)}, Rational(4)),
                    std::invalid_argument);
    // eta != b/2 breaks the wall shape.
    const auto off_wall = toric_blowup(fk_model(1, 8, 2), 0, Rational(1, 3));
    CHECK_THROWS_AS(continuum_scan(off_wall, {Rational(1, 2)}, Rational(4)),
                    std::invalid_argument);
    const auto with_points = nontoric_blowup(toric_blowup(fk_model(1, 8, 2), 0, Rational(1)), 0,
                                             {Rational(1, 8)});
    CHECK_THROWS_AS(continuum_scan(with_points, {Rational(1, 2)}, Rational(4)),
                    std::invalid_argument);
}

TEST_CASE("wall charts without bulk term: vertex triple and contraction pair") {
    // Branch substitution z2 = T^{b/2}(s + y) at the wall, done by hand with
    // public primitives; validates the chart technique independently of the
    // scan plumbing.
    const Rational a(8), b(2);
    const std::int64_t k = 1;
    const Rational A = a - Rational(k) * b / 2;  // 7
    const auto m = toric_blowup(fk_model(k, a, b), 0, b / 2);
    const LaurentSeries W = w_min(m);

    SUBCASE("moving branch: one vertex carrying three points") {
        const LaurentSeries repl = LaurentSeries::from_terms(
            {{{0, 0}, NovikovScalar::monomial(-1.0, b / 2)}, {{0, 1}, NovikovScalar::t_power(b / 2)}});
        LaurentSeries Wm = W.substitute(1, repl, 40);
        CHECK(Wm.coeff({1, 0}).is_zero());  // exact branch cancellation
        Wm = Wm - LaurentSeries::monomial({0, 0}, Wm.coeff({0, 0}));

        const TropicalData trop = tropical_data(Wm);
        REQUIRE(trop.curve.vertices.size() == 1);
        const ValuationPoint vx = trop.curve.vertices[0].coords;
        CHECK(vx == ValuationPoint{(A + b / 2) / 3, (A - b) / 3});

        const LeadingSystem sys = leading_system(Wm, vx);
        REQUIRE(sys.monomials.size() == 3);
        const auto roots = solve_leading(sys);
        REQUIRE(roots.size() == 3);
        std::vector<NovikovScalar> values;
        for (const auto& r : roots) {
            CHECK(r.multiplicity == 1);
            const CriticalPoint p = lift(r.units, Wm, vx, Rational(8));
            // Map back to the ambient coordinates and certify on W itself.
            const NovikovScalar z1 = p.coords[0];
            const NovikovScalar z2 =
                NovikovScalar::monomial(-1.0, b / 2) + NovikovScalar::t_power(b / 2) * p.coords[1];
            CHECK(z1.leading_exponent() == (A + b / 2) / 3);
            CHECK(z2.leading_exponent() == b / 2);
            for (int axis : {0, 1}) {
                const NovikovScalar r2 = W.partial(axis).eval({z1, z2});
                CHECK((r2.is_zero() || r2.leading_exponent() >= Rational(6)));
            }
            values.push_back(W.eval({z1, z2}));
        }
        for (std::size_t i = 0; i < values.size(); ++i) {
            for (std::size_t j = i + 1; j < values.size(); ++j) {
                CHECK(!approx_equal(values[i], values[j], 1e-7));
            }
        }
    }

    SUBCASE("stationary branch: contraction solves the pair at the apex tie") {
        const LaurentSeries repl = LaurentSeries::from_terms(
            {{{0, 0}, NovikovScalar::monomial(1.0, b / 2)}, {{0, 1}, NovikovScalar::t_power(b / 2)}});
        const LaurentSeries Wp = W.substitute(1, repl, 40);
        const LaurentSeries G1 = Wp.partial(0);
        const LaurentSeries G2 = Wp.partial(1);
        const Rational half_A = A / 2;
        for (const double sgn : {1.0, -1.0}) {
            CAPTURE(sgn);
            const Complex sigma = sgn / std::sqrt(2.0);
            const LaurentSeries z1_series =
                LaurentSeries::from_terms({{{0, 0}, NovikovScalar::monomial(sigma, half_A)},
                                           {{1, 0}, NovikovScalar::monomial(sigma, half_A)}});
            const LaurentSeries F1 = G1.substitute(0, z1_series, 40) * z1_series;
            const LaurentSeries F2 = G2.substitute(0, z1_series, 40);
            const ContractionTrace tr = contraction_solve(F1, F2, Rational(10));
            CHECK(tr.solution[0].leading_exponent() == (A - b) / 2);
            CHECK(tr.solution[1].leading_exponent() == (A - b) / 2);

            const NovikovScalar z1 =
                NovikovScalar::monomial(sigma, half_A) * (NovikovScalar::constant(1.0) + tr.solution[0]);
            const NovikovScalar z2 =
                NovikovScalar::t_power(b / 2) * (NovikovScalar::constant(1.0) + tr.solution[1]);
            CHECK(z1.leading_exponent() == half_A);
            CHECK(z2.leading_exponent() == b / 2);
            for (int axis : {0, 1}) {
                const NovikovScalar r = W.partial(axis).eval({z1, z2});
                CHECK((r.is_zero() || r.leading_exponent() >= Rational(6)));
            }
        }
    }
}
