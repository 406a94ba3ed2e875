#include "lgtrop/toric.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace lgtrop {

namespace {

std::int64_t cross(const ExponentVector& a, const ExponentVector& b) {
    return det2(a.p, a.q, b.p, b.q);
}

bool is_primitive(const ExponentVector& v) {
    return gcd_nonneg(v.p, v.q) == 1;
}

// 0 for angles in [0, pi), 1 for [pi, 2pi); ties broken so that (1,0) < (-1,0).
int half_plane(const ExponentVector& v) {
    return (v.q > 0 || (v.q == 0 && v.p > 0)) ? 0 : 1;
}

// Strict angular order on nonzero vectors within one full turn from (1,0).
bool angular_less(const ExponentVector& a, const ExponentVector& b) {
    int ha = half_plane(a);
    int hb = half_plane(b);
    if (ha != hb) return ha < hb;
    return cross(a, b) > 0;
}

ValuationPoint corner_vertex(const ExponentVector& nu_a, const Rational& la,
                             const ExponentVector& nu_b, const Rational& lb) {
    Rational det(cross(nu_a, nu_b));
    Rational x1 = (-la * nu_b.q + lb * nu_a.q) / det;
    Rational x2 = (la * nu_b.p - lb * nu_a.p) / det;
    return {x1, x2};
}

int total_nontoric(const ToricSurfaceModel& m) {
    int total = 0;
    for (const auto& sizes : m.nontoric_blowups) total += static_cast<int>(sizes.size());
    return total;
}

std::string format_point(const ExponentVector& v) {
    std::ostringstream out;
    out << "(" << v.p << "," << v.q << ")";
    return out.str();
}

}  // namespace

ToricSurfaceModel make_model(std::vector<ExponentVector> rays, std::vector<Rational> lambdas) {
    ToricSurfaceModel m;
    m.rays = std::move(rays);
    m.lambdas = std::move(lambdas);
    m.nontoric_blowups.assign(m.rays.size(), {});
    validate_model(m);
    return m;
}

std::vector<std::string> model_invariant_failures(const ToricSurfaceModel& m) {
    std::vector<std::string> failures;
    const int n = m.ray_count();
    if (n < 3) failures.push_back("fan needs at least 3 rays");
    if (static_cast<int>(m.lambdas.size()) != n) failures.push_back("lambdas size differs from ray count");
    if (static_cast<int>(m.nontoric_blowups.size()) != n)
        failures.push_back("nontoric blowup table size differs from ray count");
    if (m.trunc_order <= 0) failures.push_back("trunc_order must be positive");
    for (const auto& v : m.rays) {
        if (v.p == 0 && v.q == 0) failures.push_back("zero ray");
        else if (!is_primitive(v)) failures.push_back("ray " + format_point(v) + " is not primitive");
    }
    for (const auto& sizes : m.nontoric_blowups)
        for (const auto& eps : sizes)
            if (eps <= 0) failures.push_back("nontoric size " + to_string(eps) + " is not positive");
    if (!failures.empty()) return failures;

    bool oriented = true;
    for (int i = 0; i < n; ++i) {
        const auto& a = m.rays[i];
        const auto& b = m.rays[(i + 1) % n];
        if (cross(a, b) <= 0) {
            failures.push_back("rays " + format_point(a) + "," + format_point(b) +
                               " are not positively oriented");
            oriented = false;
        }
    }
    if (oriented) {
        int descents = 0;
        for (int i = 0; i < n; ++i)
            if (!angular_less(m.rays[i], m.rays[(i + 1) % n])) ++descents;
        if (descents != 1) failures.push_back("rays do not make exactly one counterclockwise turn");
    }
    if (!failures.empty()) return failures;

    auto corners = moment_polytope(m);
    bool contained = true;
    for (int j = 0; j < n && contained; ++j)
        for (int i = 0; i < n; ++i)
            if (dot(corners[j], m.rays[i]) + m.lambdas[i] < 0) {
                failures.push_back("moment polytope is empty: corner " + std::to_string(j) +
                                   " violates the constraint of ray " + format_point(m.rays[i]));
                contained = false;
                break;
            }
    if (contained && polygon_area2(corners) <= 0)
        failures.push_back("moment polytope has empty interior");
    return failures;
}

void validate_model(const ToricSurfaceModel& m) {
    auto failures = model_invariant_failures(m);
    if (failures.empty()) return;
    std::string joined = "invalid model:";
    for (const auto& f : failures) joined += " " + f + ";";
    throw InvalidModel(joined);
}

std::vector<ValuationPoint> moment_polytope(const ToricSurfaceModel& m) {
    const int n = m.ray_count();
    std::vector<ValuationPoint> corners;
    corners.reserve(n);
    for (int j = 0; j < n; ++j) {
        int k = (j + 1) % n;
        corners.push_back(corner_vertex(m.rays[j], m.lambdas[j], m.rays[k], m.lambdas[k]));
    }
    return corners;
}

Rational polygon_area2(const std::vector<ValuationPoint>& polygon) {
    Rational twice = 0;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = polygon[i];
        const auto& b = polygon[(i + 1) % n];
        twice += a[0] * b[1] - b[0] * a[1];
    }
    return twice;
}

bool in_moment_polytope(const ToricSurfaceModel& m, const ValuationPoint& x) {
    for (int i = 0; i < m.ray_count(); ++i)
        if (dot(x, m.rays[i]) + m.lambdas[i] < 0) return false;
    return true;
}

GeometricRegion geometric_region(const ToricSurfaceModel& m) {
    return {m.rays, moment_polytope(m)};
}

bool region_contains_valuation(const GeometricRegion& region, const ValuationPoint& x) {
    // The polytope is convex, so membership is "left of every edge".
    const std::size_t n = region.polytope.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = region.polytope[i];
        const auto& b = region.polytope[(i + 1) % n];
        Rational turn = (b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0]);
        if (turn < 0) return false;
    }
    return true;
}

bool region_contains_exponent(const GeometricRegion& region, const ExponentVector& v) {
    if (v.p == 0 && v.q == 0) return true;
    const std::size_t n = region.star.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = region.star[i];
        const auto& b = region.star[(i + 1) % n];
        std::int64_t det = cross(a, b);
        std::int64_t alpha = cross(v, b);   // coefficient of a, times det
        std::int64_t beta = cross(a, v);    // coefficient of b, times det
        if (alpha >= 0 && beta >= 0 && alpha + beta <= det) return true;
    }
    return false;
}

CornerChart corner_chart(const ToricSurfaceModel& m, int corner) {
    const int n = m.ray_count();
    if (corner < 0 || corner >= n) throw std::invalid_argument("corner index out of range");
    int next = (corner + 1) % n;
    const auto& a = m.rays[corner];
    const auto& b = m.rays[next];
    if (cross(a, b) != 1)
        throw InvalidModel("corner " + std::to_string(corner) + " is not smooth: det " +
                           std::to_string(cross(a, b)));
    CornerChart chart;
    chart.corner = corner;
    chart.basis = {a, b};
    chart.offsets = {m.lambdas[corner], m.lambdas[next]};
    chart.vertex = corner_vertex(a, m.lambdas[corner], b, m.lambdas[next]);
    return chart;
}

ValuationPoint chart_valuation(const CornerChart& chart, const ValuationPoint& x) {
    return {dot(x, chart.basis[0]) + chart.offsets[0], dot(x, chart.basis[1]) + chart.offsets[1]};
}

ValuationPoint chart_valuation_inverse(const CornerChart& chart, const ValuationPoint& u) {
    // Solve <x, nu_j> = u1 - lambda_j, <x, nu_{j+1}> = u2 - lambda_{j+1} (det 1).
    Rational r1 = u[0] - chart.offsets[0];
    Rational r2 = u[1] - chart.offsets[1];
    const auto& a = chart.basis[0];
    const auto& b = chart.basis[1];
    return {r1 * b.q - r2 * a.q, -r1 * b.p + r2 * a.p};
}

ExponentVector chart_exponent(const CornerChart& chart, const ExponentVector& v) {
    const auto& a = chart.basis[0];
    const auto& b = chart.basis[1];
    return {b.q * v.p - b.p * v.q, -a.q * v.p + a.p * v.q};
}

ExponentVector chart_exponent_inverse(const CornerChart& chart, const ExponentVector& w) {
    return chart.basis[0] * w.p + chart.basis[1] * w.q;
}

LaurentSeries chart_series(const CornerChart& chart, const LaurentSeries& f) {
    std::vector<std::pair<ExponentVector, NovikovScalar>> terms;
    terms.reserve(f.terms().size());
    for (const auto& [v, c] : f.terms())
        terms.emplace_back(chart_exponent(chart, v), NovikovScalar::t_power(dot(chart.vertex, v)) * c);
    return LaurentSeries::from_terms(std::move(terms));
}

LaurentSeries hori_vafa(const ToricSurfaceModel& m) {
    std::vector<std::pair<ExponentVector, NovikovScalar>> terms;
    terms.reserve(m.rays.size());
    for (int i = 0; i < m.ray_count(); ++i)
        terms.emplace_back(m.rays[i], NovikovScalar::t_power(m.lambdas[i]));
    return LaurentSeries::from_terms(std::move(terms));
}

LaurentSeries w_min(const ToricSurfaceModel& m) {
    LaurentSeries w = hori_vafa(m);
    const int n = m.ray_count();
    for (int i = 0; i < n; ++i) {
        const auto& sizes = m.nontoric_blowups[i];
        if (sizes.empty()) continue;
        const std::size_t l = sizes.size();
        // e[k] accumulates the elementary symmetric polynomials in T^{-eps}.
        std::vector<NovikovScalar> e(l + 1, NovikovScalar::zero());
        e[0] = NovikovScalar::constant(1.0);
        for (std::size_t used = 0; used < l; ++used) {
            NovikovScalar factor = NovikovScalar::t_power(-sizes[used]);
            for (std::size_t k = std::min(used + 1, l); k >= 1; --k)
                e[k] = e[k] + e[k - 1] * factor;
        }
        int prev = (i + n - 1) % n;
        for (std::size_t k = 1; k <= l; ++k) {
            ExponentVector v = m.rays[prev] + m.rays[i] * static_cast<std::int64_t>(k);
            Rational shift = m.lambdas[prev] + m.lambdas[i] * Rational(k);
            w = w + LaurentSeries::monomial(v, e[k] * NovikovScalar::t_power(shift));
        }
    }
    return w;
}

std::optional<Rational> blowup_size_bound(const ToricSurfaceModel& m, int corner,
                                          const std::vector<ValuationPoint>& critical_valuations) {
    CornerChart chart = corner_chart(m, corner);
    std::optional<Rational> bound;
    for (const auto& x : critical_valuations) {
        ValuationPoint u = chart_valuation(chart, x);
        Rational reach = std::max(u[0], u[1]);
        if (!bound || reach < *bound) bound = reach;
    }
    return bound;
}

ToricSurfaceModel toric_blowup(const ToricSurfaceModel& m, int corner, const Rational& eta,
                               const std::vector<ValuationPoint>* critical_valuations,
                               bool override_bound) {
    const int n = m.ray_count();
    if (corner < 0 || corner >= n) throw std::invalid_argument("corner index out of range");
    if (eta <= 0) throw std::invalid_argument("blowup size must be positive");
    int next = (corner + 1) % n;
    if (cross(m.rays[corner], m.rays[next]) != 1)
        throw InvalidModel("corner " + std::to_string(corner) + " is not smooth");

    ToricSurfaceModel result = m;
    if (critical_valuations) {
        auto bound = blowup_size_bound(m, corner, *critical_valuations);
        if (bound && eta >= *bound) {
            std::string message = "blowup size " + to_string(eta) + " reaches the bound " +
                                  to_string(*bound) + " at corner " + std::to_string(corner);
            if (!override_bound) throw SizeBoundViolated(message, *bound);
            result.warnings.push_back(message + " (override)");
        }
    }

    ExponentVector new_ray = m.rays[corner] + m.rays[next];
    Rational new_lambda = m.lambdas[corner] + m.lambdas[next] - eta;
    result.rays.insert(result.rays.begin() + corner + 1, new_ray);
    result.lambdas.insert(result.lambdas.begin() + corner + 1, new_lambda);
    result.nontoric_blowups.insert(result.nontoric_blowups.begin() + corner + 1,
                                   std::vector<Rational>{});
    result.toric_blowups.push_back({corner, eta});
    validate_model(result);
    return result;
}

ToricSurfaceModel nontoric_blowup(const ToricSurfaceModel& m, int ray, std::vector<Rational> sizes,
                                  const std::vector<ValuationPoint>* critical_valuations) {
    const int n = m.ray_count();
    if (ray < 0 || ray >= n) throw std::invalid_argument("ray index out of range");
    if (sizes.empty()) return m;
    for (const auto& eps : sizes)
        if (eps <= 0) throw std::invalid_argument("nontoric size must be positive");

    ToricSurfaceModel result = m;
    std::set<Rational> seen(result.nontoric_blowups[ray].begin(), result.nontoric_blowups[ray].end());
    for (const auto& eps : sizes)
        if (!seen.insert(eps).second)
            throw DuplicateEpsilon("duplicate nontoric size " + to_string(eps) + " on ray " +
                                   std::to_string(ray));

    bool previously_small = m.eps_small_certified || total_nontoric(m) == 0;
    bool all_small = critical_valuations != nullptr;
    if (critical_valuations) {
        int corner = (ray + n - 1) % n;
        auto bound = blowup_size_bound(m, corner, *critical_valuations);
        for (const auto& eps : sizes) {
            if (bound && eps >= *bound) {
                result.warnings.push_back("nontoric size " + to_string(eps) +
                                          " reaches the corner bound " + to_string(*bound) +
                                          " on ray " + std::to_string(ray));
                all_small = false;
            }
        }
    }
    result.eps_small_certified = previously_small && all_small;

    auto& log = result.nontoric_blowups[ray];
    log.insert(log.end(), sizes.begin(), sizes.end());
    validate_model(result);
    return result;
}

bool geometric_filter_toric(const ExponentVector& nu_i, const ExponentVector& nu_j,
                            const ExponentVector& nu_k) {
    if (nu_i == nu_j || nu_j == nu_k || nu_i == nu_k)
        throw std::invalid_argument("filter requires three distinct rays");
    return cross(nu_i - nu_j, nu_k - nu_j) <= 0;
}

bool geometric_filter_nontoric(const ToricSurfaceModel& m, int corner,
                               const std::vector<ExponentVector>& minimizers) {
    const int n = m.ray_count();
    if (corner < 0 || corner >= n) throw std::invalid_argument("corner index out of range");
    if (minimizers.empty()) throw std::invalid_argument("filter requires at least one minimizer");
    int next = (corner + 1) % n;
    const auto& base = m.rays[corner];
    const auto& step = m.rays[next];
    const std::size_t l = m.nontoric_blowups[next].size();

    std::set<ExponentVector> broken;
    for (std::size_t k = 1; k <= l; ++k) broken.insert(base + step * static_cast<std::int64_t>(k));
    bool has_broken = std::any_of(minimizers.begin(), minimizers.end(),
                                  [&](const ExponentVector& v) { return broken.count(v) > 0; });
    if (!has_broken)
        throw std::invalid_argument("filter requires a minimizer from a broken-disk class");

    return std::all_of(minimizers.begin(), minimizers.end(), [&](const ExponentVector& v) {
        return v == base || v == step || broken.count(v) > 0;
    });
}

int cohomology_rank(const ToricSurfaceModel& m) {
    return m.ray_count() + total_nontoric(m);
}

}  // namespace lgtrop
