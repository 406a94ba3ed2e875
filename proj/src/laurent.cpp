#include "lgtrop/laurent.hpp"

#include <algorithm>

namespace lgtrop {

LaurentSeries LaurentSeries::monomial(ExponentVector v, NovikovScalar c) {
    LaurentSeries s;
    if (!c.is_zero()) s.terms_.emplace(v, std::move(c));
    return s;
}

LaurentSeries LaurentSeries::from_terms(std::vector<std::pair<ExponentVector, NovikovScalar>> terms) {
    LaurentSeries s;
    for (auto& [v, c] : terms) s.add_in_place(v, c);
    return s;
}

NovikovScalar LaurentSeries::coeff(const ExponentVector& v) const {
    auto it = terms_.find(v);
    return it == terms_.end() ? NovikovScalar::zero() : it->second;
}

std::vector<ExponentVector> LaurentSeries::support() const {
    std::vector<ExponentVector> out;
    out.reserve(terms_.size());
    for (const auto& [v, c] : terms_) out.push_back(v);
    return out;
}

void LaurentSeries::add_in_place(const ExponentVector& v, const NovikovScalar& c) {
    auto it = terms_.find(v);
    if (it == terms_.end()) {
        if (!c.is_zero()) terms_.emplace(v, c);
        return;
    }
    NovikovScalar sum = it->second + c;
    if (sum.is_zero()) {
        terms_.erase(it);
    } else {
        it->second = std::move(sum);
    }
}

LaurentSeries LaurentSeries::operator+(const LaurentSeries& rhs) const {
    LaurentSeries s(*this);
    for (const auto& [v, c] : rhs.terms_) s.add_in_place(v, c);
    return s;
}

LaurentSeries LaurentSeries::operator-(const LaurentSeries& rhs) const { return *this + (-rhs); }

LaurentSeries LaurentSeries::operator-() const {
    LaurentSeries s(*this);
    for (auto& [v, c] : s.terms_) c = -c;
    return s;
}

LaurentSeries LaurentSeries::operator*(const LaurentSeries& rhs) const {
    LaurentSeries s;
    for (const auto& [va, ca] : terms_) {
        for (const auto& [vb, cb] : rhs.terms_) {
            s.add_in_place(va + vb, ca * cb);
        }
    }
    return s;
}

LaurentSeries LaurentSeries::operator*(const NovikovScalar& rhs) const {
    LaurentSeries s;
    for (const auto& [v, c] : terms_) s.add_in_place(v, c * rhs);
    return s;
}

LaurentSeries LaurentSeries::with_cutoff(const Rational& cutoff) const {
    LaurentSeries s;
    for (const auto& [v, c] : terms_) {
        auto t = c.with_cutoff(cutoff);
        if (!t.is_zero()) s.terms_.emplace(v, std::move(t));
    }
    return s;
}

NovikovScalar LaurentSeries::eval(const std::array<NovikovScalar, 2>& z) const {
    if (z[0].is_zero() || z[1].is_zero()) throw NumericError("eval at a zero coordinate");
    NovikovScalar acc = NovikovScalar::zero();
    // Powers are cached per coordinate; supports are small.
    std::map<std::int64_t, NovikovScalar> pow1, pow2;
    auto power = [](std::map<std::int64_t, NovikovScalar>& cache, const NovikovScalar& base,
                    std::int64_t e) -> const NovikovScalar& {
        auto it = cache.find(e);
        if (it == cache.end()) it = cache.emplace(e, base.pow(e)).first;
        return it->second;
    };
    for (const auto& [v, c] : terms_) {
        acc = acc + c * power(pow1, z[0], v.p) * power(pow2, z[1], v.q);
    }
    return acc;
}

NovikovScalar LaurentSeries::eval(const FiberPoint& p) const { return eval(p.coordinates()); }

LaurentSeries LaurentSeries::restrict_at(const ValuationPoint& x) const {
    LaurentSeries s;
    for (const auto& [v, c] : terms_) {
        s.terms_.emplace(v, c * NovikovScalar::t_power(dot(x, v)));
    }
    return s;
}

std::optional<Rational> LaurentSeries::tropical_value(const ValuationPoint& x) const {
    std::optional<Rational> best;
    for (const auto& [v, c] : terms_) {
        Rational w = *c.val() + dot(x, v);
        if (!best || w < *best) best = std::move(w);
    }
    return best;
}

LeadingPart LaurentSeries::leading_part(const ValuationPoint& x) const {
    auto delta = tropical_value(x);
    if (!delta) throw NumericError("leading_part of zero series");
    LaurentSeries lead;
    for (const auto& [v, c] : terms_) {
        if (*c.val() + dot(x, v) == *delta) lead.terms_.emplace(v, c);
    }
    return {std::move(lead), std::move(*delta)};
}

LaurentSeries LaurentSeries::partial(int axis) const {
    LaurentSeries s;
    for (const auto& [v, c] : terms_) {
        std::int64_t e = axis == 0 ? v.p : v.q;
        if (e == 0) continue;
        ExponentVector w = axis == 0 ? ExponentVector{v.p - 1, v.q} : ExponentVector{v.p, v.q - 1};
        s.add_in_place(w, c * Complex(static_cast<double>(e), 0.0));
    }
    return s;
}

LaurentSeries LaurentSeries::log_partial(int axis) const {
    LaurentSeries s;
    for (const auto& [v, c] : terms_) {
        std::int64_t e = axis == 0 ? v.p : v.q;
        if (e == 0) continue;
        s.add_in_place(v, c * Complex(static_cast<double>(e), 0.0));
    }
    return s;
}

namespace {

// Binomial series coefficient C(m, k) for integer m (possibly negative), small k.
double generalized_binomial(std::int64_t m, int k) {
    double acc = 1.0;
    for (int i = 0; i < k; ++i) acc *= static_cast<double>(m - i) / static_cast<double>(i + 1);
    return acc;
}

}  // namespace

LaurentSeries LaurentSeries::substitute(int axis, const LaurentSeries& replacement, int max_degree) const {
    if (replacement.is_zero()) throw SubstitutionError("replacement is zero");
    const auto& rterms = replacement.terms();
    const ExponentVector v0 = rterms.begin()->first;
    const NovikovScalar c0 = rterms.begin()->second;
    // g = sum over remaining terms of (c/c0) z^(v - v0); all shifts must be
    // nonnegative so powers of g increase total degree.
    LaurentSeries g;
    for (auto it = std::next(rterms.begin()); it != rterms.end(); ++it) {
        ExponentVector shift = it->first - v0;
        if (shift.p < 0 || shift.q < 0) {
            throw SubstitutionError("replacement leading monomial part is not invertible");
        }
        g.add_in_place(shift, it->second * c0.invert());
    }

    // Precompute g^k up to the degree cap.
    std::vector<LaurentSeries> g_pows;
    g_pows.push_back(LaurentSeries::monomial({0, 0}, NovikovScalar::constant(1.0)));
    while (!g_pows.back().is_zero() && static_cast<int>(g_pows.size()) <= max_degree) {
        LaurentSeries next = g_pows.back() * g;
        LaurentSeries capped;
        for (const auto& [v, c] : next.terms_) {
            if (v.p + v.q <= max_degree) capped.add_in_place(v, c);
        }
        g_pows.push_back(std::move(capped));
    }

    auto unit_power = [&](std::int64_t m) {
        // (1 + g)^m as a binomial series; exact for m >= 0 with m < cap.
        LaurentSeries acc;
        for (int k = 0; k < static_cast<int>(g_pows.size()); ++k) {
            if (m >= 0 && k > m) break;
            double coeff = generalized_binomial(m, k);
            if (coeff == 0.0) continue;
            acc = acc + g_pows[k] * NovikovScalar::constant(coeff);
        }
        return acc;
    };

    LaurentSeries out;
    for (const auto& [v, c] : terms_) {
        std::int64_t m = axis == 0 ? v.p : v.q;
        ExponentVector rest = axis == 0 ? ExponentVector{0, v.q} : ExponentVector{v.p, 0};
        LaurentSeries factor = unit_power(m) * LaurentSeries::monomial(v0 * m, c0.pow(m));
        out = out + factor * LaurentSeries::monomial(rest, c);
    }
    return out;
}

std::vector<ExponentVector> convex_hull(std::vector<ExponentVector> points) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    const std::size_t n = points.size();
    if (n <= 2) return points;
    auto cross = [](const ExponentVector& o, const ExponentVector& a, const ExponentVector& b) {
        return (a.p - o.p) * (b.q - o.q) - (a.q - o.q) * (b.p - o.p);
    };
    std::vector<ExponentVector> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
        hull[k++] = points[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
        hull[k++] = points[i];
    }
    hull.resize(k - 1);
    if (hull.size() == 2 && hull[0] == hull[1]) hull.resize(1);
    return hull;
}

std::vector<ExponentVector> LaurentSeries::newton_polytope() const { return convex_hull(support()); }

std::int64_t lattice_area2(const std::vector<ExponentVector>& polygon) {
    if (polygon.size() < 3) return 0;
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        const auto& a = polygon[i];
        const auto& b = polygon[(i + 1) % polygon.size()];
        acc += a.p * b.q - b.p * a.q;
    }
    return acc < 0 ? -acc : acc;
}

std::int64_t lattice_length(const ExponentVector& v) { return gcd_nonneg(v.p, v.q); }

bool LaurentSeries::operator==(const LaurentSeries& rhs) const {
    if (terms_.size() != rhs.terms_.size()) return false;
    auto it = terms_.begin();
    auto jt = rhs.terms_.begin();
    for (; it != terms_.end(); ++it, ++jt) {
        if (it->first != jt->first || !(it->second == jt->second)) return false;
    }
    return true;
}

}  // namespace lgtrop
