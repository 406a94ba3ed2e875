#include "lgtrop/critical.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <future>
#include <map>
#include <numeric>
#include <sstream>
#include <utility>

namespace lgtrop {

namespace {

constexpr double kClusterTol = 1e-6;
constexpr double kBackSubTol = 1e-6;
// Companion eigenvalues of an m-fold polynomial root scatter by roughly
// eps^(1/m); a wider radius is needed wherever multiple roots are expected.
constexpr double kMultiRootClusterTol = 2e-4;
constexpr double kPairDedupTol = 1e-5;
constexpr double kPairVerifyTol = 1e-6;
// A candidate start sits within ~eps^(1/m) of its pair; a polish that moved
// farther than this jumped into some other root's Newton basin.
constexpr double kPolishDriftTol = 1e-2;

using CPoly = std::map<ExponentVector, Complex>;

Complex ipow(Complex base, std::int64_t n) {
    if (n < 0) return 1.0 / ipow(base, -n);
    Complex out(1.0, 0.0);
    while (n > 0) {
        if (n & 1) out *= base;
        base *= base;
        n >>= 1;
    }
    return out;
}

std::string exp_to_string(const ExponentVector& v) {
    std::ostringstream os;
    os << "(" << v.p << "," << v.q << ")";
    return os.str();
}

std::string val_to_string(const ValuationPoint& x) {
    return "(" + to_string(x[0]) + ", " + to_string(x[1]) + ")";
}

// ---- dense univariate complex polynomials (ascending coefficients) ----

double max_abs(const std::vector<Complex>& c) {
    double m = 0.0;
    for (const auto& z : c) m = std::max(m, std::abs(z));
    return m;
}

// Roots away from zero: strips numerically vanishing leading and trailing
// coefficients, then takes companion-matrix eigenvalues.
std::vector<Complex> poly_roots_nonzero(std::vector<Complex> c) {
    const double scale = max_abs(c);
    if (scale == 0.0) return {};
    const double tol = 1e-11 * scale;
    while (!c.empty() && std::abs(c.back()) <= tol) c.pop_back();
    std::size_t low = 0;
    while (low < c.size() && std::abs(c[low]) <= tol) ++low;
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(low));
    if (c.size() <= 1) return {};
    const std::size_t d = c.size() - 1;
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d),
                                                        static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i + 1 < d; ++i) companion(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = 1.0;
    for (std::size_t i = 0; i < d; ++i)
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d - 1)) = -c[i] / c[d];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    std::vector<Complex> roots;
    roots.reserve(d);
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) roots.push_back(solver.eigenvalues()(i));
    std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

struct Cluster {
    Complex rep{};
    int count = 0;
};

std::vector<Cluster> cluster_points(const std::vector<Complex>& pts, double tol_scale = kClusterTol) {
    std::vector<Cluster> clusters;
    for (const auto& z : pts) {
        bool placed = false;
        for (auto& cl : clusters) {
            const double tol = tol_scale * std::max(1.0, std::abs(cl.rep));
            if (std::abs(z - cl.rep) <= tol) {
                cl.rep = (cl.rep * static_cast<double>(cl.count) + z) / static_cast<double>(cl.count + 1);
                ++cl.count;
                placed = true;
                break;
            }
        }
        if (!placed) clusters.push_back({z, 1});
    }
    std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
        if (a.rep.real() != b.rep.real()) return a.rep.real() < b.rep.real();
        return a.rep.imag() < b.rep.imag();
    });
    return clusters;
}

struct ShiftedPoly {
    // coeffs[p][q] for u1^p u2^q after exponent shifts; degrees d (u1), e (u2).
    std::vector<std::vector<Complex>> coeffs;
    std::int64_t d = 0;
    std::int64_t e = 0;
};

// Shifts a Laurent polynomial by its minimal exponents in both variables;
// roots in the torus are unchanged. Coefficients are rescaled to unit max.
ShiftedPoly shift_to_polynomial(const CPoly& f) {
    std::int64_t pmin = 0, qmin = 0, pmax = 0, qmax = 0;
    bool first = true;
    for (const auto& [v, c] : f) {
        (void)c;
        if (first) {
            pmin = pmax = v.p;
            qmin = qmax = v.q;
            first = false;
        } else {
            pmin = std::min(pmin, v.p);
            pmax = std::max(pmax, v.p);
            qmin = std::min(qmin, v.q);
            qmax = std::max(qmax, v.q);
        }
    }
    ShiftedPoly out;
    out.d = pmax - pmin;
    out.e = qmax - qmin;
    out.coeffs.assign(static_cast<std::size_t>(out.d + 1),
                      std::vector<Complex>(static_cast<std::size_t>(out.e + 1), Complex(0.0, 0.0)));
    double scale = 0.0;
    for (const auto& [v, c] : f) scale = std::max(scale, std::abs(c));
    for (const auto& [v, c] : f)
        out.coeffs[static_cast<std::size_t>(v.p - pmin)][static_cast<std::size_t>(v.q - qmin)] = c / scale;
    return out;
}

std::vector<Complex> coeffs_at(const ShiftedPoly& f, const Complex& s) {
    std::vector<Complex> a(static_cast<std::size_t>(f.d + 1), Complex(0.0, 0.0));
    for (std::int64_t p = 0; p <= f.d; ++p) {
        Complex acc(0.0, 0.0);
        Complex spow(1.0, 0.0);
        for (std::int64_t q = 0; q <= f.e; ++q) {
            acc += f.coeffs[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] * spow;
            spow *= s;
        }
        a[static_cast<std::size_t>(p)] = acc;
    }
    return a;
}

Complex eval_shifted(const ShiftedPoly& f, const Complex& u1, const Complex& s) {
    Complex acc(0.0, 0.0);
    Complex upow(1.0, 0.0);
    for (std::int64_t p = 0; p <= f.d; ++p) {
        Complex row(0.0, 0.0);
        Complex spow(1.0, 0.0);
        for (std::int64_t q = 0; q <= f.e; ++q) {
            row += f.coeffs[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] * spow;
            spow *= s;
        }
        acc += row * upow;
        upow *= u1;
    }
    return acc;
}

double eval_scale(const ShiftedPoly& f, const Complex& u1, const Complex& s) {
    double acc = 0.0;
    for (std::int64_t p = 0; p <= f.d; ++p)
        for (std::int64_t q = 0; q <= f.e; ++q)
            acc += std::abs(f.coeffs[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)]) *
                   std::pow(std::abs(u1), static_cast<double>(p)) * std::pow(std::abs(s), static_cast<double>(q));
    return std::max(acc, 1e-30);
}

Complex sylvester_det(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    const std::int64_t d1 = static_cast<std::int64_t>(a.size()) - 1;
    const std::int64_t d2 = static_cast<std::int64_t>(b.size()) - 1;
    const std::int64_t n = d1 + d2;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::int64_t r = 0; r < d2; ++r)
        for (std::int64_t i = 0; i <= d1; ++i)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r + i)) = a[static_cast<std::size_t>(d1 - i)];
    for (std::int64_t r = 0; r < d1; ++r)
        for (std::int64_t i = 0; i <= d2; ++i)
            m(static_cast<Eigen::Index>(d2 + r), static_cast<Eigen::Index>(r + i)) = b[static_cast<std::size_t>(d2 - i)];
    return m.fullPivLu().determinant();
}

// Newton-polish a regular root of the pair (f, g); quadratic near simple zeros.
std::array<Complex, 2> polish_root(const ShiftedPoly& f, const ShiftedPoly& g, std::array<Complex, 2> z) {
    auto d1 = [](const ShiftedPoly& h, const Complex& u1, const Complex& u2) {
        Complex acc(0.0, 0.0);
        for (std::int64_t p = 1; p <= h.d; ++p)
            for (std::int64_t q = 0; q <= h.e; ++q)
                acc += h.coeffs[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] *
                       static_cast<double>(p) * ipow(u1, p - 1) * ipow(u2, q);
        return acc;
    };
    auto d2 = [](const ShiftedPoly& h, const Complex& u1, const Complex& u2) {
        Complex acc(0.0, 0.0);
        for (std::int64_t p = 0; p <= h.d; ++p)
            for (std::int64_t q = 1; q <= h.e; ++q)
                acc += h.coeffs[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] *
                       static_cast<double>(q) * ipow(u1, p) * ipow(u2, q - 1);
        return acc;
    };
    for (int step = 0; step < 8; ++step) {
        const Complex f0 = eval_shifted(f, z[0], z[1]);
        const Complex g0 = eval_shifted(g, z[0], z[1]);
        const Complex j11 = d1(f, z[0], z[1]), j12 = d2(f, z[0], z[1]);
        const Complex j21 = d1(g, z[0], z[1]), j22 = d2(g, z[0], z[1]);
        const Complex det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-14) break;
        const Complex du1 = (j22 * f0 - j12 * g0) / det;
        const Complex du2 = (-j21 * f0 + j11 * g0) / det;
        z[0] -= du1;
        z[1] -= du2;
    }
    return z;
}

// Pair raw resultant roots with u1 partners. Companion eigenvalues of an
// m-fold resultant root scatter by ~eps^(1/m), so the raw u2 values are not
// clustered directly; instead every candidate pair is Newton-polished (pairs
// of the system stay simple even when the resultant inflates), verified, and
// deduplicated. Multiplicities follow from counting how many raw resultant
// roots land on each group of pairs sharing a u2 value.
std::vector<LeadingRoot> pair_roots(const ShiftedPoly& sp1, const ShiftedPoly& sp2,
                                    const std::vector<Complex>& raw) {
    std::vector<std::array<Complex, 2>> pairs;
    std::vector<int> uf;  // union-find parent per pair id
    std::function<int(int)> find = [&](int x) {
        while (uf[static_cast<std::size_t>(x)] != x) {
            uf[static_cast<std::size_t>(x)] = uf[static_cast<std::size_t>(uf[static_cast<std::size_t>(x)])];
            x = uf[static_cast<std::size_t>(x)];
        }
        return x;
    };
    std::vector<int> raw_anchor;  // one pair id per contributing raw root
    for (const auto& s : raw) {
        if (std::abs(s) <= 1e-9) continue;  // torus roots only
        const auto a = coeffs_at(sp1, s);
        if (max_abs(a) <= 1e-9) {
            throw DegenerateConfiguration("leading system fiber vanishes identically at a resultant root; zero set is not isolated");
        }
        std::vector<int> ids;
        for (const auto& r : poly_roots_nonzero(a)) {
            const auto z = polish_root(sp1, sp2, {r, s});
            if (std::abs(z[0] - r) > kPolishDriftTol * std::max(1.0, std::abs(r))) continue;
            if (std::abs(z[1] - s) > kPolishDriftTol * std::max(1.0, std::abs(s))) continue;
            if (std::abs(eval_shifted(sp1, z[0], z[1])) > kPairVerifyTol * eval_scale(sp1, z[0], z[1])) continue;
            if (std::abs(eval_shifted(sp2, z[0], z[1])) > kPairVerifyTol * eval_scale(sp2, z[0], z[1])) continue;
            int id = -1;
            for (std::size_t k = 0; k < pairs.size(); ++k) {
                const bool near0 = std::abs(z[0] - pairs[k][0]) <= kPairDedupTol * std::max(1.0, std::abs(pairs[k][0]));
                const bool near1 = std::abs(z[1] - pairs[k][1]) <= kPairDedupTol * std::max(1.0, std::abs(pairs[k][1]));
                if (near0 && near1) { id = static_cast<int>(k); break; }
            }
            if (id < 0) {
                id = static_cast<int>(pairs.size());
                pairs.push_back(z);
                uf.push_back(id);
            }
            if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
        }
        if (ids.empty()) continue;  // artifact of nominal-degree resultant factors
        for (std::size_t k = 1; k < ids.size(); ++k) uf[static_cast<std::size_t>(find(ids[k]))] = find(ids[0]);
        raw_anchor.push_back(ids[0]);
    }
    std::map<int, int> group_raws;          // component -> raw resultant roots landing on it
    std::map<int, std::vector<int>> group_pairs;  // component -> distinct pair ids
    for (const int id : raw_anchor) ++group_raws[find(id)];
    for (std::size_t k = 0; k < pairs.size(); ++k) group_pairs[find(static_cast<int>(k))].push_back(static_cast<int>(k));
    std::vector<LeadingRoot> out;
    for (const auto& [root, ids] : group_pairs) {
        const int m = group_raws[root];
        const int p = static_cast<int>(ids.size());
        if (m % p != 0) {
            throw DegenerateConfiguration("ambiguous multiplicity split among leading roots sharing a coordinate");
        }
        for (const int id : ids) out.push_back({pairs[static_cast<std::size_t>(id)], m / p});
    }
    std::sort(out.begin(), out.end(), [](const LeadingRoot& x, const LeadingRoot& y) {
        if (x.units[1].real() != y.units[1].real()) return x.units[1].real() < y.units[1].real();
        if (x.units[1].imag() != y.units[1].imag()) return x.units[1].imag() < y.units[1].imag();
        if (x.units[0].real() != y.units[0].real()) return x.units[0].real() < y.units[0].real();
        return x.units[0].imag() < y.units[0].imag();
    });
    return out;
}

// ---- shared fixed-slope iteration ----

struct SlopeIteration {
    std::array<NovikovScalar, 2> u;
    std::vector<Rational> levels;  // min residual valuation after each accepted step
    std::array<NovikovScalar, 2> residual;
};

double coeff_scale(const NovikovScalar& s) {
    double m = 0.0;
    for (const auto& t : s.terms()) m = std::max(m, std::abs(t.coeff));
    return m;
}

// Evaluation noise in double precision scales with the largest coefficient
// in play; residual terms below that floor are numerical zeros, not data.
NovikovScalar strip_relative_noise(const NovikovScalar& s, double scale) {
    if (s.is_zero()) return s;
    const double floor = 1e-11 * scale;
    if (floor <= novikov_config().tau) return s;
    std::vector<NovikovTerm> kept;
    for (const auto& t : s.terms()) {
        if (std::abs(t.coeff) > floor) kept.push_back(t);
    }
    return NovikovScalar::from_terms(std::move(kept), s.cutoff());
}

// Iterates u -= correction(residual(u)) until both residual components reach
// their targets, requiring the minimal outstanding residual valuation to
// strictly increase each round.
SlopeIteration run_slope_iteration(
    const std::function<std::array<NovikovScalar, 2>(const std::array<NovikovScalar, 2>&)>& residual,
    const std::function<std::array<NovikovScalar, 2>(const std::array<NovikovScalar, 2>&)>& correction,
    std::array<NovikovScalar, 2> u, const std::array<Rational, 2>& targets, int cap,
    const char* context) {
    SlopeIteration state{std::move(u), {}, {NovikovScalar::zero(), NovikovScalar::zero()}};
    std::optional<Rational> last_level;
    double scale = 1.0;
    for (int round = 0; round <= cap; ++round) {
        state.residual = residual(state.u);
        for (int i = 0; i < 2; ++i) {
            scale = std::max({scale, coeff_scale(state.u[static_cast<std::size_t>(i)]),
                              coeff_scale(state.residual[static_cast<std::size_t>(i)])});
        }
        for (int i = 0; i < 2; ++i) {
            state.residual[static_cast<std::size_t>(i)] =
                strip_relative_noise(state.residual[static_cast<std::size_t>(i)], scale);
        }
        std::optional<Rational> level;
        bool done = true;
        for (int i = 0; i < 2; ++i) {
            const auto v = state.residual[static_cast<std::size_t>(i)].val();
            if (!v.has_value()) continue;  // vanishes to cutoff
            if (*v >= targets[static_cast<std::size_t>(i)]) continue;
            done = false;
            if (!level.has_value() || *v < *level) level = *v;
        }
        if (done) return state;
        if (std::getenv("LGTROP_DEBUG_SLOPE") != nullptr) {
            std::fprintf(stderr, "%s round %d level %s r0val %s r1val %s r0lead %.3g r1lead %.3g\n", context, round,
                         to_string(*level).c_str(),
                         state.residual[0].val() ? to_string(*state.residual[0].val()).c_str() : "inf",
                         state.residual[1].val() ? to_string(*state.residual[1].val()).c_str() : "inf",
                         state.residual[0].is_zero() ? 0.0 : std::abs(state.residual[0].leading_coeff()),
                         state.residual[1].is_zero() ? 0.0 : std::abs(state.residual[1].leading_coeff()));
        }
        if (last_level.has_value() && *level <= *last_level) {
            throw NoProgress(std::string(context) + ": residual valuation stalled at " + to_string(*level));
        }
        last_level = level;
        state.levels.push_back(*level);
        auto delta = correction(state.residual);
        for (int i = 0; i < 2; ++i) {
            const auto dv = delta[static_cast<std::size_t>(i)].val();
            if (dv.has_value() && *dv <= Rational(0)) {
                throw NoProgress(std::string(context) + ": correction is not infinitesimal");
            }
            state.u[static_cast<std::size_t>(i)] = state.u[static_cast<std::size_t>(i)] + delta[static_cast<std::size_t>(i)];
        }
    }
    throw NoProgress(std::string(context) + ": iteration cap reached; this indicates a solver bug");
}

Rational rational_abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

Rational pairing(const ValuationPoint& x, const ExponentVector& v) {
    return x[0] * v.p + x[1] * v.q;
}

// Exact unit-coordinate Hessian data at U over base, given the restricted
// series. matrix is filled by the caller.
HessianLeading exact_hessian(const LaurentSeries& Wx, const std::array<NovikovScalar, 2>& U) {
    HessianLeading h;
    std::array<std::array<NovikovScalar, 2>, 2> entries;
    for (int i = 0; i < 2; ++i) {
        const LaurentSeries gi = Wx.partial(i);
        for (int j = 0; j < 2; ++j) {
            entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = gi.partial(j).eval(U);
        }
    }
    const NovikovScalar det = entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0];
    h.det_valuation = det.val();
    if (h.det_valuation.has_value()) {
        h.det_leading = det.leading_coeff();
        h.scale = *h.det_valuation / 2;
    }
    return h;
}

std::array<NovikovScalar, 2> unit_coordinates(const std::array<NovikovScalar, 2>& coords,
                                              const ValuationPoint& base) {
    return {coords[0] * NovikovScalar::t_power(-base[0]), coords[1] * NovikovScalar::t_power(-base[1])};
}

bool origin_in_relative_interior(const SubdivisionCell& cell) {
    if (cell.dim != 1 || cell.vertices.size() != 2) return false;
    const ExponentVector a = cell.vertices[0];
    const ExponentVector b = cell.vertices[1];
    return det2(a.p, a.q, b.p, b.q) == 0 && a.p * b.p + a.q * b.q < 0;
}

}  // namespace

// ---- leading systems ----

LeadingSystem leading_system(const LaurentSeries& W, const ValuationPoint& base) {
    const LeadingPart lp = W.leading_part(base);
    if (lp.series.is_zero()) throw std::invalid_argument("leading_system: series has no terms");
    LeadingSystem sys;
    sys.base = base;
    sys.delta = lp.delta;
    for (const auto& [v, c] : lp.series.terms()) {
        sys.monomials.emplace_back(v, c.leading_coeff());
    }
    return sys;
}

std::vector<LeadingRoot> solve_leading(const LeadingSystem& sys) {
    if (sys.monomials.size() < 2) {
        throw std::invalid_argument("solve_leading: a leading system needs at least two monomials");
    }
    CPoly f1, f2;
    for (const auto& [v, c] : sys.monomials) {
        if (v.p != 0) f1[v] += c * static_cast<double>(v.p);
        if (v.q != 0) f2[v] += c * static_cast<double>(v.q);
    }
    if (f1.empty() || f2.empty()) {
        throw DegenerateConfiguration("solve_leading: a log partial vanishes identically; the critical set is not isolated");
    }
    if (f1.size() == 1 || f2.size() == 1) return {};  // a single monomial has no torus zeros

    const ShiftedPoly sp1 = shift_to_polynomial(f1);
    const ShiftedPoly sp2 = shift_to_polynomial(f2);

    // One-variable fibers are handled directly; otherwise eliminate u1 by a
    // resultant sampled at scaled roots of unity and interpolated.
    if (sp1.d == 0 && sp2.d == 0) {
        std::vector<Complex> c1(static_cast<std::size_t>(sp1.e + 1));
        for (std::int64_t q = 0; q <= sp1.e; ++q) c1[static_cast<std::size_t>(q)] = sp1.coeffs[0][static_cast<std::size_t>(q)];
        for (const auto& r : poly_roots_nonzero(c1)) {
            if (std::abs(eval_shifted(sp2, Complex(1.0, 0.0), r)) <= kBackSubTol * eval_scale(sp2, Complex(1.0, 0.0), r)) {
                throw DegenerateConfiguration("solve_leading: both log partials depend on u2 only and share a root; u1 is free");
            }
        }
        return {};
    }
    if (sp1.d == 0 || sp2.d == 0) {
        // Separable: one partial is a polynomial in u2 alone, so pair
        // multiplicities are products of the two one-variable multiplicities.
        const ShiftedPoly& fiber = sp1.d == 0 ? sp1 : sp2;    // u2 only
        const ShiftedPoly& other = sp1.d == 0 ? sp2 : sp1;
        std::vector<Complex> cf(static_cast<std::size_t>(fiber.e + 1));
        for (std::int64_t q = 0; q <= fiber.e; ++q) cf[static_cast<std::size_t>(q)] = fiber.coeffs[0][static_cast<std::size_t>(q)];
        std::vector<Complex> raw = poly_roots_nonzero(cf);
        const auto clusters = cluster_points(raw, kMultiRootClusterTol);
        std::vector<LeadingRoot> out;
        for (const auto& cl : clusters) {
            const auto a = coeffs_at(other, cl.rep);
            if (max_abs(a) <= 1e-9) {
                throw DegenerateConfiguration("leading system fiber vanishes identically at u2 = cluster; zero set is not isolated");
            }
            std::vector<Complex> praw = poly_roots_nonzero(a);
            if (praw.empty()) continue;
            for (const auto& pc : cluster_points(praw, kMultiRootClusterTol)) {
                out.push_back({polish_root(sp1, sp2, {pc.rep, cl.rep}), cl.count * pc.count});
            }
        }
        return out;
    }

    const std::int64_t bound = sp1.d * sp2.e + sp2.d * sp1.e;
    const std::int64_t samples = bound + 1;
    const double radius = 1.1740613;
    std::vector<Complex> nodes(static_cast<std::size_t>(samples));
    std::vector<Complex> values(static_cast<std::size_t>(samples));
    double value_scale = 0.0;
    for (std::int64_t m = 0; m < samples; ++m) {
        const double angle = 2.0 * M_PI * static_cast<double>(m) / static_cast<double>(samples);
        const Complex s = radius * Complex(std::cos(angle), std::sin(angle));
        nodes[static_cast<std::size_t>(m)] = s;
        values[static_cast<std::size_t>(m)] = sylvester_det(coeffs_at(sp1, s), coeffs_at(sp2, s));
        value_scale = std::max(value_scale, std::abs(values[static_cast<std::size_t>(m)]));
    }
    if (value_scale <= 1e-12) {
        throw DegenerateConfiguration("solve_leading: the resultant of the log partials vanishes identically; the zero set is positive dimensional");
    }
    Eigen::MatrixXcd vand(static_cast<Eigen::Index>(samples), static_cast<Eigen::Index>(samples));
    Eigen::VectorXcd rhs(static_cast<Eigen::Index>(samples));
    for (std::int64_t m = 0; m < samples; ++m) {
        Complex power(1.0, 0.0);
        for (std::int64_t j = 0; j < samples; ++j) {
            vand(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j)) = power;
            power *= nodes[static_cast<std::size_t>(m)];
        }
        rhs(static_cast<Eigen::Index>(m)) = values[static_cast<std::size_t>(m)];
    }
    const Eigen::VectorXcd sol = vand.partialPivLu().solve(rhs);
    std::vector<Complex> res(static_cast<std::size_t>(samples));
    for (std::int64_t j = 0; j < samples; ++j) res[static_cast<std::size_t>(j)] = sol(static_cast<Eigen::Index>(j));

    const std::vector<Complex> raw = poly_roots_nonzero(res);
    return pair_roots(sp1, sp2, raw);
}

std::array<std::array<Complex, 2>, 2> leading_poly_hessian(const LeadingSystem& sys,
                                                           const std::array<Complex, 2>& units) {
    std::array<std::array<Complex, 2>, 2> h{{{Complex(0, 0), Complex(0, 0)}, {Complex(0, 0), Complex(0, 0)}}};
    for (const auto& [v, c] : sys.monomials) {
        const Complex mono = c * ipow(units[0], v.p) * ipow(units[1], v.q);
        h[0][0] += mono * static_cast<double>(v.p) * static_cast<double>(v.p - 1) / (units[0] * units[0]);
        h[1][1] += mono * static_cast<double>(v.q) * static_cast<double>(v.q - 1) / (units[1] * units[1]);
        h[0][1] += mono * static_cast<double>(v.p) * static_cast<double>(v.q) / (units[0] * units[1]);
    }
    h[1][0] = h[0][1];
    return h;
}

NovikovScalar critical_value(const LaurentSeries& W, const std::array<NovikovScalar, 2>& coords) {
    return W.eval(coords);
}

HessianLeading hessian_leading(const LaurentSeries& W, const ValuationPoint& base,
                               const std::array<NovikovScalar, 2>& coords) {
    const LeadingSystem sys = leading_system(W, base);
    const auto U = unit_coordinates(coords, base);
    const Rational cutoff = 2 * rational_abs(sys.delta) + rational_abs(base[0]) + rational_abs(base[1]) + 8;
    const LaurentSeries Wx = W.restrict_at(base).with_cutoff(cutoff);
    HessianLeading h = exact_hessian(Wx, U);
    std::array<Complex, 2> units{U[0].leading_coeff(), U[1].leading_coeff()};
    h.matrix = leading_poly_hessian(sys, units);
    return h;
}

CriticalPoint lift(const std::array<Complex, 2>& units0, const LaurentSeries& W,
                   const ValuationPoint& base, const Rational& trunc_order) {
    const LeadingSystem sys = leading_system(W, base);
    const auto H = leading_poly_hessian(sys, units0);
    const Complex det = H[0][0] * H[1][1] - H[0][1] * H[1][0];
    double hscale = 0.0;
    for (const auto& row : H)
        for (const auto& entry : row) hscale = std::max(hscale, std::abs(entry));
    if (std::abs(det) <= novikov_config().tau * std::max(1.0, hscale * hscale)) {
        throw SingularHessian("lift: the leading polynomial Hessian is singular at the starting root");
    }
    const std::array<std::array<Complex, 2>, 2> hinv{
        {{H[1][1] / det, -H[0][1] / det}, {-H[1][0] / det, H[0][0] / det}}};

    const Rational cutoff =
        trunc_order + rational_abs(base[0]) + rational_abs(base[1]) + rational_abs(sys.delta) + 2;
    const LaurentSeries Wx = W.restrict_at(base).with_cutoff(cutoff);
    const LaurentSeries g1 = Wx.partial(0);
    const LaurentSeries g2 = Wx.partial(1);
    const std::array<Rational, 2> targets{trunc_order + base[0], trunc_order + base[1]};
    const NovikovScalar grade = NovikovScalar::t_power(-sys.delta);

    auto residual = [&](const std::array<NovikovScalar, 2>& u) {
        return std::array<NovikovScalar, 2>{g1.eval(u), g2.eval(u)};
    };
    auto correction = [&](const std::array<NovikovScalar, 2>& r) {
        std::array<NovikovScalar, 2> d;
        for (int i = 0; i < 2; ++i) {
            d[static_cast<std::size_t>(i)] =
                -(r[0] * hinv[static_cast<std::size_t>(i)][0] + r[1] * hinv[static_cast<std::size_t>(i)][1]) * grade;
        }
        return d;
    };
    std::array<NovikovScalar, 2> u0{NovikovScalar::constant(units0[0]).with_cutoff(cutoff),
                                    NovikovScalar::constant(units0[1]).with_cutoff(cutoff)};
    const SlopeIteration done = run_slope_iteration(residual, correction, u0, targets, 200, "lift");

    CriticalPoint p;
    p.coords = {NovikovScalar::t_power(base[0]) * done.u[0], NovikovScalar::t_power(base[1]) * done.u[1]};
    p.valuation = base;
    Rational certified = trunc_order;
    bool first_component = true;
    for (int i = 0; i < 2; ++i) {
        const auto v = done.residual[static_cast<std::size_t>(i)].val();
        // A residual that vanished to cutoff certifies the target itself.
        const Rational comp =
            v.has_value() ? Rational(*v - base[static_cast<std::size_t>(i)]) : trunc_order;
        if (first_component || comp < certified) certified = comp;
        first_component = false;
    }
    p.residual_valuation = certified;
    p.critical_value = W.eval(p.coords);
    p.hessian_leading = exact_hessian(Wx, done.u);
    p.hessian_leading.matrix = leading_poly_hessian(sys, units0);
    p.morse = p.hessian_leading.det_valuation.has_value() &&
              std::abs(p.hessian_leading.det_leading) > novikov_config().tau;
    return p;
}

LaurentSeries unimodular_image(const LaurentSeries& W, const std::array<std::array<std::int64_t, 2>, 2>& M) {
    if (det2(M[0][0], M[0][1], M[1][0], M[1][1]) != 1) {
        throw std::invalid_argument("unimodular_image: the exponent matrix must have determinant one");
    }
    std::vector<std::pair<ExponentVector, NovikovScalar>> terms;
    for (const auto& [v, c] : W.terms()) {
        terms.emplace_back(ExponentVector{M[0][0] * v.p + M[0][1] * v.q, M[1][0] * v.p + M[1][1] * v.q}, c);
    }
    return LaurentSeries::from_terms(std::move(terms));
}

// ---- non-convenient edge ----

namespace {

struct SlopeMatrix {
    std::array<std::array<NovikovScalar, 2>, 2> L;
    NovikovScalar det;
};

SlopeMatrix slope_at(const LaurentSeries& g1, const LaurentSeries& g2, const std::array<NovikovScalar, 2>& u0) {
    SlopeMatrix s;
    s.L[0][0] = g1.partial(0).eval(u0);
    s.L[0][1] = g1.partial(1).eval(u0);
    s.L[1][0] = g2.partial(0).eval(u0);
    s.L[1][1] = g2.partial(1).eval(u0);
    s.det = s.L[0][0] * s.L[1][1] - s.L[0][1] * s.L[1][0];
    return s;
}

// Valuation hypotheses shared by the edge solver and the direct contraction
// interface: nonzero diagonal slope entries dominated by neither off-diagonal
// entry, a diagonal-led determinant, and initial residuals strictly above the
// matching diagonal level. Returns the guaranteed per-step gain.
Rational check_slope_preconditions(const SlopeMatrix& s, const std::array<NovikovScalar, 2>& r0,
                                   const char* context) {
    const auto va = s.L[0][0].val();
    const auto vd = s.L[1][1].val();
    if (!va.has_value() || !vd.has_value()) {
        throw ContractionPreconditionFailed(std::string(context) + ": a diagonal slope entry vanishes");
    }
    const auto vb = s.L[0][1].val();
    const auto vc = s.L[1][0].val();
    if ((vb.has_value() && (*vb < *va || *vb < *vd)) || (vc.has_value() && (*vc < *va || *vc < *vd))) {
        throw ContractionPreconditionFailed(std::string(context) +
                                            ": an off-diagonal slope entry undercuts a diagonal entry");
    }
    Rational gain;
    bool have_gain = false;
    if (vb.has_value() && vc.has_value()) {
        const Rational margin = *vb + *vc - *va - *vd;
        if (margin <= 0) {
            throw ContractionPreconditionFailed(std::string(context) +
                                                ": the slope determinant is not led by the diagonal product");
        }
        gain = margin;
        have_gain = true;
    }
    if (s.det.is_zero()) {
        throw ContractionPreconditionFailed(std::string(context) + ": the slope determinant vanishes to cutoff");
    }
    const std::array<Rational, 2> diag{*va, *vd};
    for (int i = 0; i < 2; ++i) {
        const auto rv = r0[static_cast<std::size_t>(i)].val();
        if (!rv.has_value()) continue;
        const Rational margin = *rv - diag[static_cast<std::size_t>(i)];
        if (margin <= 0) {
            throw ContractionPreconditionFailed(std::string(context) +
                                                ": an initial residual does not clear its diagonal slope level");
        }
        if (!have_gain || margin < gain) {
            gain = margin;
            have_gain = true;
        }
    }
    if (!have_gain) gain = Rational(1);
    return gain;
}

// Degree-bounded audit of the mixed-term valuations around u0: Taylor
// coefficients of the residual rows must stay above the matching diagonal
// slope levels.
void check_mixed_terms(const LaurentSeries& g1, const LaurentSeries& g2,
                       const std::array<NovikovScalar, 2>& u0, const Rational& va, const Rational& vd,
                       const char* context) {
    const std::array<const LaurentSeries*, 2> rows{&g1, &g2};
    for (int row = 0; row < 2; ++row) {
        const Rational own = row == 0 ? va : vd;
        const Rational other = row == 0 ? vd : va;
        for (int p = 0; p <= 3; ++p) {
            for (int q = 0; p + q <= 3; ++q) {
                if (p + q < 2) continue;
                LaurentSeries deriv = *rows[static_cast<std::size_t>(row)];
                for (int a = 0; a < p; ++a) deriv = deriv.partial(0);
                for (int a = 0; a < q; ++a) deriv = deriv.partial(1);
                const auto v = deriv.eval(u0).val();
                if (!v.has_value()) continue;
                const bool mixed = row == 0 ? q >= 1 : p >= 1;
                if (*v < own || (mixed && *v < other)) {
                    throw ContractionPreconditionFailed(
                        std::string(context) + ": Taylor coefficient at order (" + std::to_string(p) + "," +
                        std::to_string(q) + ") undercuts the slope level");
                }
            }
        }
    }
}

std::vector<Complex> nth_roots(const Complex& value, std::int64_t n) {
    const double mag = std::pow(std::abs(value), 1.0 / static_cast<double>(n));
    const double arg = std::arg(value) / static_cast<double>(n);
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(n));
    for (std::int64_t r = 0; r < n; ++r) {
        const double angle = arg + 2.0 * M_PI * static_cast<double>(r) / static_cast<double>(n);
        out.push_back(mag * Complex(std::cos(angle), std::sin(angle)));
    }
    return out;
}

}  // namespace

std::vector<CriticalPoint> solve_nonconvenient(const LaurentSeries& W, const EdgeCase& apexes,
                                               const Rational& trunc_order) {
    const NovikovScalar cplus = W.coeff({0, 1});
    const NovikovScalar cminus = W.coeff({0, -1});
    if (cplus.is_zero() || cminus.is_zero()) {
        throw NotAnEdgeCase("solve_nonconvenient: the edge monomials (0,1) and (0,-1) must both be present");
    }
    // A constant term at or below the hull level at the origin splits the
    // edge cell; above it the term is inert (log partials kill constants).
    const NovikovScalar c0 = W.coeff({0, 0});
    if (!c0.is_zero() && !(*c0.val() > (*cplus.val() + *cminus.val()) / 2)) {
        throw NotAnEdgeCase("solve_nonconvenient: a constant term makes the configuration locally convenient");
    }
    ExponentVector ap = apexes.apex_pos;
    ExponentVector an = apexes.apex_neg;
    if (ap.p < 0 && an.p > 0) std::swap(ap, an);
    if (ap.p <= 0 || an.p >= 0) {
        throw std::invalid_argument("solve_nonconvenient: apex first exponents must straddle zero");
    }
    const NovikovScalar ca = W.coeff(ap);
    const NovikovScalar cb = W.coeff(an);
    if (ca.is_zero() || cb.is_zero()) {
        throw std::invalid_argument("solve_nonconvenient: an apex monomial is missing from the series");
    }
    const std::int64_t i = ap.p, j = ap.q, k = an.p, l = an.q;
    const Rational vp = *cplus.val();
    const Rational vm = *cminus.val();
    const Rational b = vm - vp;
    const Rational lambda = *ca.val() - vp;
    const Rational eta = *cb.val() - vp;

    const Rational x2 = (vm - vp) / 2;
    const Rational x1 = ((eta - lambda) + Rational(l - j) * b / 2) / Rational(i - k);
    const Rational delta_rel = lambda + Rational(j) * b / 2 + Rational(i) * x1;
    if (!(b / 2 < delta_rel)) {
        throw ContractionPreconditionFailed(
            "solve_nonconvenient: the edge level does not undercut the apex level, so the edge cell is absent");
    }
    const ValuationPoint base{x1, x2};
    const Rational cutoff =
        trunc_order + rational_abs(x1) + rational_abs(x2) + rational_abs(delta_rel) + rational_abs(vp) + 2;
    const LaurentSeries Wx = W.restrict_at(base).with_cutoff(cutoff);
    const LaurentSeries g1 = Wx.partial(0);
    const LaurentSeries g2 = Wx.partial(1);
    const std::array<Rational, 2> targets{trunc_order + base[0], trunc_order + base[1]};

    const Complex sigma = std::sqrt(cminus.leading_coeff() / cplus.leading_coeff());
    std::vector<CriticalPoint> out;
    for (const double s : {1.0, -1.0}) {
        const Complex u20 = s * sigma;
        const Complex rho_pow = -(static_cast<double>(k) * cb.leading_coeff() * ipow(u20, l - j)) /
                                (static_cast<double>(i) * ca.leading_coeff());
        for (const Complex& rho : nth_roots(rho_pow, i - k)) {
            const std::array<NovikovScalar, 2> u0{NovikovScalar::constant(rho).with_cutoff(cutoff),
                                                  NovikovScalar::constant(u20).with_cutoff(cutoff)};
            const SlopeMatrix slope = slope_at(g1, g2, u0);
            const std::array<NovikovScalar, 2> r0{g1.eval(u0), g2.eval(u0)};
            check_slope_preconditions(slope, r0, "solve_nonconvenient");
            check_mixed_terms(g1, g2, u0, *slope.L[0][0].val(), *slope.L[1][1].val(), "solve_nonconvenient");
            const NovikovScalar det_inv = slope.det.invert(cutoff);
            const std::array<std::array<NovikovScalar, 2>, 2> linv{
                {{slope.L[1][1] * det_inv, -slope.L[0][1] * det_inv},
                 {-slope.L[1][0] * det_inv, slope.L[0][0] * det_inv}}};
            auto residual = [&](const std::array<NovikovScalar, 2>& u) {
                return std::array<NovikovScalar, 2>{g1.eval(u), g2.eval(u)};
            };
            auto correction = [&](const std::array<NovikovScalar, 2>& r) {
                std::array<NovikovScalar, 2> d;
                for (int row = 0; row < 2; ++row) {
                    d[static_cast<std::size_t>(row)] =
                        -(r[0] * linv[static_cast<std::size_t>(row)][0] + r[1] * linv[static_cast<std::size_t>(row)][1]);
                }
                return d;
            };
            const SlopeIteration done =
                run_slope_iteration(residual, correction, u0, targets, 400, "solve_nonconvenient");
            CriticalPoint p;
            p.coords = {NovikovScalar::t_power(base[0]) * done.u[0], NovikovScalar::t_power(base[1]) * done.u[1]};
            p.valuation = base;
            p.origin_type = CriticalOriginType::edge;
            Rational certified = trunc_order;
            bool first_component = true;
            for (int c = 0; c < 2; ++c) {
                const auto v = done.residual[static_cast<std::size_t>(c)].val();
                const Rational comp =
                    v.has_value() ? Rational(*v - base[static_cast<std::size_t>(c)]) : trunc_order;
                if (first_component || comp < certified) certified = comp;
                first_component = false;
            }
            p.residual_valuation = certified;
            p.critical_value = W.eval(p.coords);
            p.hessian_leading = exact_hessian(Wx, done.u);
            const LeadingSystem edge_sys = leading_system(W, base);
            p.hessian_leading.matrix =
                leading_poly_hessian(edge_sys, {done.u[0].leading_coeff(), done.u[1].leading_coeff()});
            p.morse = p.hessian_leading.det_valuation.has_value() &&
                      std::abs(p.hessian_leading.det_leading) > novikov_config().tau;
            out.push_back(std::move(p));
        }
    }
    return out;
}

ContractionTrace contraction_solve(const LaurentSeries& f1, const LaurentSeries& f2,
                                   const Rational& target) {
    for (const LaurentSeries* f : {&f1, &f2}) {
        for (const auto& v : f->support()) {
            if (v.p < 0 || v.q < 0) {
                throw std::invalid_argument("contraction_solve: the system must be written in plus variables");
            }
        }
    }
    SlopeMatrix slope;
    slope.L[0][0] = f1.coeff({1, 0});
    slope.L[0][1] = f1.coeff({0, 1});
    slope.L[1][0] = f2.coeff({1, 0});
    slope.L[1][1] = f2.coeff({0, 1});
    slope.det = slope.L[0][0] * slope.L[1][1] - slope.L[0][1] * slope.L[1][0];
    const std::array<NovikovScalar, 2> constants{f1.coeff({0, 0}), f2.coeff({0, 0})};
    const Rational gain = check_slope_preconditions(slope, constants, "contraction_solve");
    const auto va = *slope.L[0][0].val();
    const auto vd = *slope.L[1][1].val();
    // Full support audit of the higher-order valuation hypotheses.
    const std::array<const LaurentSeries*, 2> rows{&f1, &f2};
    for (int row = 0; row < 2; ++row) {
        const Rational own = row == 0 ? va : vd;
        const Rational other = row == 0 ? vd : va;
        for (const auto& [v, c] : rows[static_cast<std::size_t>(row)]->terms()) {
            if (v.p + v.q < 2) continue;
            const auto cv = c.val();
            if (!cv.has_value()) continue;
            const bool mixed = row == 0 ? v.q >= 1 : v.p >= 1;
            if (*cv < own || (mixed && *cv < other)) {
                throw ContractionPreconditionFailed("contraction_solve: the coefficient at " + exp_to_string(v) +
                                                    " undercuts the slope level");
            }
        }
    }

    Rational cutoff = target + rational_abs(va) + rational_abs(vd) + 2;
    const NovikovScalar det_inv = slope.det.invert(cutoff);
    const std::array<std::array<NovikovScalar, 2>, 2> linv{
        {{slope.L[1][1] * det_inv, -slope.L[0][1] * det_inv},
         {-slope.L[1][0] * det_inv, slope.L[0][0] * det_inv}}};
    auto apply_inv = [&](const std::array<NovikovScalar, 2>& r) {
        std::array<NovikovScalar, 2> d;
        for (int row = 0; row < 2; ++row) {
            d[static_cast<std::size_t>(row)] =
                -(r[0] * linv[static_cast<std::size_t>(row)][0] + r[1] * linv[static_cast<std::size_t>(row)][1]);
        }
        return d;
    };
    ContractionTrace trace;
    trace.guaranteed_gain = gain;
    std::array<NovikovScalar, 2> u = apply_inv(constants);
    for (auto& comp : u) comp = comp.with_cutoff(cutoff);
    const std::array<Rational, 2> targets{target, target};
    std::optional<Rational> last_level;
    double scale = 1.0;
    for (int round = 0; round <= 400; ++round) {
        std::array<NovikovScalar, 2> r{f1.eval(u), f2.eval(u)};
        for (int c = 0; c < 2; ++c) {
            scale = std::max({scale, coeff_scale(u[static_cast<std::size_t>(c)]),
                              coeff_scale(r[static_cast<std::size_t>(c)])});
        }
        for (int c = 0; c < 2; ++c) {
            r[static_cast<std::size_t>(c)] = strip_relative_noise(r[static_cast<std::size_t>(c)], scale);
        }
        std::optional<Rational> level;
        bool done = true;
        for (int c = 0; c < 2; ++c) {
            const auto v = r[static_cast<std::size_t>(c)].val();
            if (!v.has_value()) continue;
            if (*v >= targets[static_cast<std::size_t>(c)]) continue;
            done = false;
            if (!level.has_value() || *v < *level) level = *v;
        }
        if (level.has_value()) trace.residual_valuations.push_back(*level);
        if (done) {
            trace.solution = u;
            trace.iterations = round;
            return trace;
        }
        if (last_level.has_value() && *level <= *last_level) {
            throw NoProgress("contraction_solve: residual valuation stalled at " + to_string(*level));
        }
        last_level = level;
        const auto d = apply_inv(r);
        for (int c = 0; c < 2; ++c) u[static_cast<std::size_t>(c)] = u[static_cast<std::size_t>(c)] + d[static_cast<std::size_t>(c)];
        ++trace.iterations;
    }
    throw NoProgress("contraction_solve: iteration cap reached; this indicates a solver bug");
}

// ---- model-level driver ----

namespace {

struct EdgeNormalization {
    std::array<std::array<std::int64_t, 2>, 2> M;  // maps the positive endpoint direction to (0,1)
};

std::array<std::int64_t, 2> extended_gcd_pair(std::int64_t p, std::int64_t q) {
    // Returns (r, s) with r*q - s*p == 1 for primitive (p, q).
    std::int64_t old_r = q, r = -p;
    std::int64_t old_x = 1, x = 0;
    std::int64_t old_y = 0, y = 1;
    while (r != 0) {
        const std::int64_t quot = old_r / r;
        std::swap(old_r, r);
        r -= quot * old_r;
        std::swap(old_x, x);
        x -= quot * old_x;
        std::swap(old_y, y);
        y -= quot * old_y;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_x = -old_x;
        old_y = -old_y;
    }
    if (old_r != 1) throw std::invalid_argument("extended_gcd_pair: direction is not primitive");
    // old_x * q + old_y * (-p) == 1.
    return {old_x, old_y};
}

EdgeNormalization edge_normalization(const ExponentVector& plus_dir) {
    const ExponentVector prim = primitive_vector(plus_dir);
    const auto rs = extended_gcd_pair(prim.p, prim.q);
    EdgeNormalization n;
    // The inverse matrix has columns (r, s) and (p, q); M is its adjugate.
    n.M = {{{prim.q, -prim.p}, {-rs[1], rs[0]}}};
    if (det2(n.M[0][0], n.M[0][1], n.M[1][0], n.M[1][1]) != 1) {
        throw std::logic_error("edge_normalization: determinant is not one");
    }
    return n;
}

ExponentVector apply_matrix(const std::array<std::array<std::int64_t, 2>, 2>& M, const ExponentVector& v) {
    return {M[0][0] * v.p + M[0][1] * v.q, M[1][0] * v.p + M[1][1] * v.q};
}

bool is_genericity_message(const std::string& message) {
    return message.rfind("genericity:", 0) == 0;
}

struct VertexOutcome {
    std::vector<CriticalPoint> points;
    std::vector<std::string> errors;
};

VertexOutcome solve_vertex(const LaurentSeries& W, const TropVertex& vertex, const Rational& trunc_order) {
    VertexOutcome out;
    try {
        const LeadingSystem sys = leading_system(W, vertex.coords);
        const std::vector<LeadingRoot> roots = solve_leading(sys);
        for (const auto& root : roots) {
            if (root.multiplicity > 1) {
                out.errors.push_back("genericity: repeated leading root at vertex " + val_to_string(vertex.coords));
                continue;
            }
            CriticalPoint p = lift(root.units, W, vertex.coords, trunc_order);
            p.origin_type = CriticalOriginType::vertex;
            p.origin_id = vertex.id;
            out.points.push_back(std::move(p));
        }
    } catch (const GenericityViolation& e) {
        out.errors.push_back(std::string("genericity: ") + e.what());
    } catch (const std::exception& e) {
        out.errors.push_back(std::string("vertex ") + val_to_string(vertex.coords) + ": " + e.what());
    }
    return out;
}

std::optional<int> hosting_corner(const ToricSurfaceModel& m, const ExponentVector& broken) {
    const int n = m.ray_count();
    for (int jy = 0; jy < n; ++jy) {
        const ExponentVector nu = m.rays[static_cast<std::size_t>(jy)];
        const ExponentVector nu_next = m.rays[static_cast<std::size_t>((jy + 1) % n)];
        const std::int64_t det = det2(nu.p, nu.q, nu_next.p, nu_next.q);
        if (det == 0) continue;
        // Solve broken = a * nu + b * nu_next.
        const std::int64_t a_num = det2(broken.p, broken.q, nu_next.p, nu_next.q);
        const std::int64_t b_num = det2(nu.p, nu.q, broken.p, broken.q);
        if (a_num % det != 0 || b_num % det != 0) continue;
        const std::int64_t a = a_num / det;
        const std::int64_t bq = b_num / det;
        if (a == 1 && bq >= 1) return jy;
    }
    return std::nullopt;
}

void classify_point(const ToricSurfaceModel& m, const LaurentSeries& W, const GeometricRegion& region,
                    CriticalPoint& p, std::vector<std::string>& diagnostics) {
    const LeadingPart lp = W.leading_part(p.valuation);
    const std::vector<ExponentVector> minimizers = lp.series.support();
    bool all_rays = true;
    std::vector<int> ray_ids;
    for (const auto& v : minimizers) {
        const auto it = std::find(m.rays.begin(), m.rays.end(), v);
        if (it == m.rays.end()) {
            all_rays = false;
        } else {
            ray_ids.push_back(static_cast<int>(it - m.rays.begin()));
        }
    }
    p.kind = all_rays ? CriticalKind::toric : CriticalKind::nontoric;
    p.geometric = region_contains_valuation(region, p.valuation);

    if (p.kind == CriticalKind::toric && minimizers.size() == 3 && ray_ids.size() == 3) {
        std::sort(ray_ids.begin(), ray_ids.end());
        const bool filter = geometric_filter_toric(m.rays[static_cast<std::size_t>(ray_ids[0])],
                                                   m.rays[static_cast<std::size_t>(ray_ids[1])],
                                                   m.rays[static_cast<std::size_t>(ray_ids[2])]);
        if (filter != p.geometric) {
            diagnostics.push_back("toric filter disagrees with the geometric region at " +
                                  val_to_string(p.valuation));
        }
    } else if (p.kind == CriticalKind::nontoric) {
        std::optional<int> corner;
        for (const auto& v : minimizers) {
            if (std::find(m.rays.begin(), m.rays.end(), v) != m.rays.end()) continue;
            corner = hosting_corner(m, v);
            if (corner.has_value()) break;
        }
        if (corner.has_value()) {
            const bool filter = geometric_filter_nontoric(m, *corner, minimizers);
            if (filter != p.geometric) {
                diagnostics.push_back("non-toric filter disagrees with the geometric region at " +
                                      val_to_string(p.valuation));
            }
        } else {
            diagnostics.push_back("could not identify the hosting corner of a broken minimizer at " +
                                  val_to_string(p.valuation));
        }
    }
}

}  // namespace

SolveResult find_all_geometric(const ToricSurfaceModel& m, const LaurentSeries* perturbation) {
    validate_model(m);
    for (std::size_t ray = 0; ray < m.nontoric_blowups.size(); ++ray) {
        const auto& sizes = m.nontoric_blowups[ray];
        for (std::size_t a = 0; a < sizes.size(); ++a) {
            for (std::size_t b = a + 1; b < sizes.size(); ++b) {
                if (sizes[a] == sizes[b]) {
                    throw GenericityViolation("find_all_geometric: duplicate blowup size " + to_string(sizes[a]) +
                                              " on the divisor of ray " + std::to_string(ray));
                }
            }
        }
    }

    LaurentSeries W = w_min(m);
    const TropicalData base_data = tropical_data(W);
    if (perturbation != nullptr && !perturbation->is_zero()) {
        for (const auto& [v, c] : perturbation->terms()) {
            const auto cv = c.val();
            if (!cv.has_value()) continue;
            for (const auto& vertex : base_data.curve.vertices) {
                Rational worst = *cv + pairing(vertex.coords, v);
                Rational highest;
                bool first = true;
                for (const auto& [w, cw] : W.terms()) {
                    const Rational level = *cw.val() + pairing(vertex.coords, w);
                    if (first || level > highest) highest = level;
                    first = false;
                }
                if (!(worst > highest)) {
                    throw std::invalid_argument(
                        "find_all_geometric: perturbation term at " + exp_to_string(v) +
                        " is not admissible: its level does not clear every existing term at vertex " +
                        val_to_string(vertex.coords));
                }
            }
        }
        W = W + *perturbation;
    }
    const TropicalData data = tropical_data(W);
    if (perturbation != nullptr && !perturbation->is_zero()) {
        if (data.subdivision.cells2.size() != base_data.subdivision.cells2.size() ||
            data.subdivision.cells1.size() != base_data.subdivision.cells1.size() ||
            data.subdivision.cells0.size() != base_data.subdivision.cells0.size()) {
            throw std::invalid_argument("find_all_geometric: the perturbation alters the Newton subdivision");
        }
    }

    // Locate the at-most-one 1-cell containing the origin in its relative
    // interior and audit that all other cells are convenient.
    std::optional<SubdivisionCell> origin_cell;
    for (const auto& cell : data.subdivision.cells1) {
        if (origin_in_relative_interior(cell)) {
            if (origin_cell.has_value()) {
                throw std::logic_error("find_all_geometric: two subdivision edges contain the origin");
            }
            origin_cell = cell;
        }
    }
    for (const auto& cell : data.subdivision.cells2) {
        if (is_convenient(cell.vertices)) continue;
        bool excused = false;
        if (origin_cell.has_value()) {
            int shared = 0;
            for (const auto& v : cell.vertices) {
                if (v == origin_cell->vertices[0] || v == origin_cell->vertices[1]) ++shared;
            }
            excused = shared == 2;
        }
        if (!excused) {
            throw std::invalid_argument(
                "find_all_geometric: a subdivision cell spans a line through the origin away from the detected edge; "
                "this shape is unsupported");
        }
    }

    const Rational trunc = Rational(m.trunc_order);
    std::vector<std::future<VertexOutcome>> futures;
    futures.reserve(data.curve.vertices.size());
    for (const auto& vertex : data.curve.vertices) {
        futures.push_back(std::async(std::launch::async,
                                     [&W, vertex, trunc]() { return solve_vertex(W, vertex, trunc); }));
    }
    std::vector<CriticalPoint> points;
    std::vector<std::string> errors;
    for (auto& fut : futures) {
        VertexOutcome outcome = fut.get();
        for (auto& p : outcome.points) points.push_back(std::move(p));
        for (auto& e : outcome.errors) errors.push_back(std::move(e));
    }

    if (origin_cell.has_value()) {
        std::vector<const SubdivisionCell*> flanks;
        for (const auto& cell : data.subdivision.cells2) {
            int shared = 0;
            for (const auto& v : cell.vertices) {
                if (v == origin_cell->vertices[0] || v == origin_cell->vertices[1]) ++shared;
            }
            if (shared == 2) flanks.push_back(&cell);
        }
        if (flanks.size() != 2) {
            throw std::invalid_argument("find_all_geometric: the origin edge is not flanked by two cells");
        }
        for (const auto* cell : flanks) {
            if (cell->vertices.size() != 3) {
                throw std::invalid_argument(
                    "find_all_geometric: a non-triangular cell flanks the origin edge; this shape is unsupported");
            }
        }
        const ExponentVector plus_end =
            origin_cell->vertices[0] < origin_cell->vertices[1] ? origin_cell->vertices[1] : origin_cell->vertices[0];
        const EdgeNormalization norm = edge_normalization(plus_end);
        const std::array<ExponentVector, 2> mapped_ends{apply_matrix(norm.M, origin_cell->vertices[0]),
                                                        apply_matrix(norm.M, origin_cell->vertices[1])};
        for (const auto& e : mapped_ends) {
            if (!((e.p == 0 && e.q == 1) || (e.p == 0 && e.q == -1))) {
                throw std::invalid_argument(
                    "find_all_geometric: the origin edge endpoints are not primitive; this shape is unsupported");
            }
        }
        EdgeCase ec;
        bool first_apex = true;
        for (const auto* cell : flanks) {
            ExponentVector apex{0, 0};
            bool found = false;
            for (const auto& v : cell->vertices) {
                if (v == origin_cell->vertices[0] || v == origin_cell->vertices[1]) continue;
                apex = v;
                found = true;
            }
            if (!found) throw std::logic_error("find_all_geometric: flanking cell has no apex");
            const ExponentVector mapped = apply_matrix(norm.M, apex);
            if (first_apex) {
                ec.apex_pos = mapped;
                first_apex = false;
            } else {
                ec.apex_neg = mapped;
            }
        }
        const LaurentSeries mapped_W = unimodular_image(W, norm.M);
        int edge_id = -1;
        for (const auto& e : data.curve.edges) {
            if (e.dual_cell_id == origin_cell->id) edge_id = e.id;
        }
        Rational slack = 4;
        for (int attempt = 0; attempt < 3; ++attempt) {
            std::vector<CriticalPoint> edge_points = solve_nonconvenient(mapped_W, ec, trunc + slack);
            bool enough = true;
            std::vector<CriticalPoint> mapped_points;
            for (const auto& q : edge_points) {
                CriticalPoint p;
                p.coords = {q.coords[0].pow(norm.M[0][0]) * q.coords[1].pow(norm.M[1][0]),
                            q.coords[0].pow(norm.M[0][1]) * q.coords[1].pow(norm.M[1][1])};
                p.valuation = {Rational(norm.M[0][0]) * q.valuation[0] + Rational(norm.M[1][0]) * q.valuation[1],
                               Rational(norm.M[0][1]) * q.valuation[0] + Rational(norm.M[1][1]) * q.valuation[1]};
                const double scale = std::max({1.0, coeff_scale(p.coords[0]), coeff_scale(p.coords[1])});
                Rational certified;
                bool first = true;
                for (int c = 0; c < 2; ++c) {
                    const NovikovScalar r = strip_relative_noise(W.partial(c).eval(p.coords), scale);
                    const auto rv = r.val();
                    const Rational comp = rv.has_value() ? *rv : trunc + slack;
                    if (first || comp < certified) certified = comp;
                    first = false;
                }
                if (certified < trunc) {
                    enough = false;
                    break;
                }
                p.residual_valuation = certified;
                p.critical_value = W.eval(p.coords);
                p.hessian_leading = hessian_leading(W, p.valuation, p.coords);
                p.morse = p.hessian_leading.det_valuation.has_value() &&
                          std::abs(p.hessian_leading.det_leading) > novikov_config().tau;
                p.origin_type = CriticalOriginType::edge;
                p.origin_id = edge_id;
                mapped_points.push_back(std::move(p));
            }
            if (enough) {
                for (auto& p : mapped_points) points.push_back(std::move(p));
                break;
            }
            slack = slack * 2;
            if (attempt == 2) {
                errors.push_back("edge solve could not certify the requested residual order");
            }
        }
    }

    if (!errors.empty()) {
        std::string joined;
        bool generic = true;
        for (const auto& e : errors) {
            if (!is_genericity_message(e)) generic = false;
            if (!joined.empty()) joined += "; ";
            joined += e;
        }
        if (generic) throw GenericityViolation(joined);
        throw std::runtime_error("find_all_geometric: " + joined);
    }

    SolveResult result;
    const GeometricRegion region = geometric_region(m);
    for (auto& p : points) {
        classify_point(m, W, region, p, result.summary.diagnostics);
    }
    std::stable_sort(points.begin(), points.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        if (a.origin_type != b.origin_type) return a.origin_type == CriticalOriginType::vertex;
        return a.origin_id < b.origin_id;
    });

    for (std::size_t a = 0; a < points.size(); ++a) {
        for (std::size_t b = a + 1; b < points.size(); ++b) {
            if (approx_equal(points[a].critical_value, points[b].critical_value, 1e-7)) {
                throw GenericityViolation("find_all_geometric: coincident critical values at " +
                                          val_to_string(points[a].valuation) + " and " +
                                          val_to_string(points[b].valuation));
            }
        }
    }

    result.summary.expected_rank = cohomology_rank(m);
    for (const auto& p : points) {
        if (!p.geometric) {
            ++result.summary.nongeometric_count;
        } else if (p.kind == CriticalKind::toric) {
            ++result.summary.toric_count;
        } else {
            ++result.summary.nontoric_count;
        }
    }
    const int geometric_total = result.summary.toric_count + result.summary.nontoric_count;
    if (geometric_total != result.summary.expected_rank) {
        throw GenericityViolation("find_all_geometric: count law mismatch: " + std::to_string(geometric_total) +
                                  " geometric critical points against expected rank " +
                                  std::to_string(result.summary.expected_rank));
    }
    result.summary.count_law_holds = true;
    result.points = std::move(points);
    return result;
}

// ---- continuum scan ----

namespace {

// Newton refinement with the exact Jacobian, used by the scan charts where
// the grading is anisotropic. Affine covariance makes the iterate sequence
// independent of unimodular changes of chart.
struct NewtonOutcome {
    std::array<NovikovScalar, 2> u;
    Rational certified;
};

NewtonOutcome newton_refine(const LaurentSeries& g1, const LaurentSeries& g2,
                            const std::array<std::array<LaurentSeries, 2>, 2>& jac,
                            std::array<NovikovScalar, 2> u, const std::array<Rational, 2>& targets,
                            const Rational& cutoff) {
    std::optional<Rational> last_level;
    double scale = 1.0;
    for (int round = 0; round <= 80; ++round) {
        std::array<NovikovScalar, 2> r{g1.eval(u), g2.eval(u)};
        for (int c = 0; c < 2; ++c) {
            scale = std::max({scale, coeff_scale(u[static_cast<std::size_t>(c)]),
                              coeff_scale(r[static_cast<std::size_t>(c)])});
        }
        for (int c = 0; c < 2; ++c) {
            r[static_cast<std::size_t>(c)] = strip_relative_noise(r[static_cast<std::size_t>(c)], scale);
        }
        std::optional<Rational> level;
        bool done = true;
        for (int c = 0; c < 2; ++c) {
            const auto v = r[static_cast<std::size_t>(c)].val();
            if (!v.has_value()) continue;
            if (*v >= targets[static_cast<std::size_t>(c)]) continue;
            done = false;
            if (!level.has_value() || *v < *level) level = *v;
        }
        if (done) {
            Rational certified = cutoff;
            for (int c = 0; c < 2; ++c) {
                const auto v = r[static_cast<std::size_t>(c)].val();
                if (v.has_value() && *v < certified) certified = *v;
            }
            return {u, certified};
        }
        if (last_level.has_value() && *level <= *last_level) {
            throw NoProgress("newton_refine: residual valuation stalled at " + to_string(*level));
        }
        last_level = level;
        std::array<std::array<NovikovScalar, 2>, 2> J;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                J[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                    jac[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)].eval(u);
        const NovikovScalar det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
        if (det.is_zero()) throw SingularHessian("newton_refine: the Jacobian determinant vanishes to cutoff");
        const NovikovScalar det_inv = det.invert(cutoff);
        const std::array<std::array<NovikovScalar, 2>, 2> inv{
            {{J[1][1] * det_inv, -J[0][1] * det_inv}, {-J[1][0] * det_inv, J[0][0] * det_inv}}};
        for (int a = 0; a < 2; ++a) {
            const NovikovScalar step = -(r[0] * inv[static_cast<std::size_t>(a)][0] + r[1] * inv[static_cast<std::size_t>(a)][1]);
            u[static_cast<std::size_t>(a)] = u[static_cast<std::size_t>(a)] + step;
        }
    }
    throw NoProgress("newton_refine: iteration cap reached; this indicates a solver bug");
}

LaurentSeries strip_constant(const LaurentSeries& W) {
    const NovikovScalar c = W.coeff({0, 0});
    if (c.is_zero()) return W;
    return W - LaurentSeries::monomial({0, 0}, c);
}

// Subdivision 1-cells whose endpoints straddle the origin along the first
// axis; in the scan charts these carry the critical points that are not over
// tropical vertices.
std::vector<SubdivisionCell> axis_cells_through_origin(const TropicalData& td) {
    std::vector<SubdivisionCell> out;
    for (const auto& cell : td.subdivision.cells1) {
        if (cell.vertices.size() != 2) continue;
        const ExponentVector u = cell.vertices[0];
        const ExponentVector v = cell.vertices[1];
        if (u.q == 0 && v.q == 0 && ((u.p > 0 && v.p < 0) || (u.p < 0 && v.p > 0))) out.push_back(cell);
    }
    return out;
}

}  // namespace

std::vector<ContinuumSample> continuum_scan(const ToricSurfaceModel& m,
                                            const std::vector<Rational>& eps_values,
                                            const Rational& trunc_order) {
    const std::vector<ExponentVector> expected_rays{{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {0, -1}};
    if (m.ray_count() != 5) {
        throw std::invalid_argument("continuum_scan: the model must have the five-ray blown Hirzebruch shape");
    }
    std::int64_t k = -1;
    for (int idx = 0; idx < 5; ++idx) {
        const ExponentVector ray = m.rays[static_cast<std::size_t>(idx)];
        if (idx == 3) {
            if (ray.p != -1 || ray.q > 0) {
                throw std::invalid_argument("continuum_scan: the fourth ray must point into the third quadrant");
            }
            k = -ray.q;
        } else if (!(ray == expected_rays[static_cast<std::size_t>(idx)])) {
            throw std::invalid_argument("continuum_scan: ray " + std::to_string(idx) +
                                        " does not match the blown Hirzebruch shape");
        }
    }
    for (const auto& sizes : m.nontoric_blowups) {
        if (!sizes.empty()) {
            throw std::invalid_argument("continuum_scan: the model must carry no non-toric blowup points");
        }
    }
    if (m.lambdas[0] != 0 || m.lambdas[2] != 0) {
        throw std::invalid_argument("continuum_scan: the first and third support values must vanish");
    }
    const Rational a = m.lambdas[3];
    const Rational b = m.lambdas[4];
    const Rational eta = -m.lambdas[1];
    if (!(eta == b / 2)) {
        throw std::invalid_argument("continuum_scan: the scan requires the half-size wall eta = b/2");
    }
    const Rational A = a - Rational(k) * b / 2;
    if (!(A > b)) {
        throw std::invalid_argument("continuum_scan: the apex window is empty (requires a - k b/2 > b)");
    }
    const Rational eps_max = (A - b) / 3;

    const LaurentSeries W = w_min(m);
    std::vector<ContinuumSample> out;
    for (const Rational& eps : eps_values) {
        if (!(eps > 0) || !(eps < eps_max)) {
            throw OutOfRange("continuum_scan: the bulk size must lie strictly between 0 and (a - k b/2 - b)/3");
        }
        const LaurentSeries Wb = W + LaurentSeries::monomial({1, 0}, NovikovScalar::t_power(eps));
        ContinuumSample sample;
        sample.eps = eps;
        Rational gap = eps;
        const Rational gap_merge = (A - b - eps) / 2;
        const Rational gap_window = (A - b) / 4;
        if (gap_merge < gap) gap = gap_merge;
        if (gap_window < gap) gap = gap_window;
        const double degrees = to_double((trunc_order + A + b + 2) / gap);
        if (degrees > 400.0) {
            throw std::invalid_argument("continuum_scan: the truncation order is too deep for this bulk size");
        }
        const int max_degree = static_cast<int>(degrees) + 4;
        const Rational cutoff = trunc_order + a + b + 4;

        for (const double branch : {-1.0, 1.0}) {
            const LaurentSeries replacement = LaurentSeries::from_terms(
                {{{0, 0}, NovikovScalar::monomial(Complex(branch, 0.0), b / 2)}, {{0, 1}, NovikovScalar::t_power(b / 2)}});
            const LaurentSeries chart =
                strip_constant(Wb.substitute(1, replacement, max_degree)).with_cutoff(cutoff);
            const TropicalData td = tropical_data(chart);
            const LaurentSeries g1 = chart.partial(0);
            const LaurentSeries g2 = chart.partial(1);
            std::array<std::array<LaurentSeries, 2>, 2> jac{
                {{g1.partial(0), g1.partial(1)}, {g2.partial(0), g2.partial(1)}}};

            // Positive offsets below the truncation horizon carry the honest
            // solutions; deeper vertices are truncation artifacts.
            const Rational chart_target = trunc_order + b;
            std::vector<CriticalPoint> found;
            for (const auto& vertex : td.curve.vertices) {
                if (!(vertex.coords[1] > 0)) continue;
                try {
                    const LeadingSystem sys = leading_system(chart, vertex.coords);
                    for (const auto& root : solve_leading(sys)) {
                        CriticalPoint p = lift(root.units, chart, vertex.coords, chart_target);
                        found.push_back(std::move(p));
                    }
                } catch (const DegenerateConfiguration&) {
                    continue;
                } catch (const SingularHessian&) {
                    continue;
                }
            }
            for (const auto& cell : axis_cells_through_origin(td)) {
                // Edge monomials along the first axis fix val(z1) and its
                // units; the second coordinate starts from the one-variable
                // balance of the y-partial.
                const ExponentVector e_hi = cell.vertices[0].p > 0 ? cell.vertices[0] : cell.vertices[1];
                const ExponentVector e_lo = cell.vertices[0].p > 0 ? cell.vertices[1] : cell.vertices[0];
                const NovikovScalar c_hi = chart.coeff(e_hi);
                const NovikovScalar c_lo = chart.coeff(e_lo);
                if (c_hi.is_zero() || c_lo.is_zero()) continue;
                const Rational x1 = (*c_lo.val() - *c_hi.val()) / Rational(e_hi.p - e_lo.p);
                const Complex ratio = -(static_cast<double>(e_lo.p) * c_lo.leading_coeff()) /
                                      (static_cast<double>(e_hi.p) * c_hi.leading_coeff());
                for (const Complex& rho : nth_roots(ratio, e_hi.p - e_lo.p)) {
                    const NovikovScalar z1_start = NovikovScalar::monomial(rho, x1).with_cutoff(cutoff);
                    // Restrict the y-partial to z1 = z1_start and find its
                    // smallest positive tropical root.
                    std::map<std::int64_t, NovikovScalar> fiber;
                    for (const auto& [v, c] : g2.terms()) {
                        const NovikovScalar contrib = c * z1_start.pow(v.p);
                        auto it = fiber.find(v.q);
                        if (it == fiber.end()) {
                            fiber.emplace(v.q, contrib);
                        } else {
                            it->second = it->second + contrib;
                        }
                    }
                    std::optional<Rational> v0;
                    std::optional<Rational> v1;
                    for (const auto& [q, c] : fiber) {
                        const auto cv = c.val();
                        if (!cv.has_value()) continue;
                        if (q == 0) v0 = *cv;
                        if (q == 1) v1 = *cv;
                    }
                    if (!v0.has_value() || !v1.has_value()) continue;
                    const Rational y_val = *v0 - *v1;
                    if (!(y_val > 0)) continue;
                    const Complex y_lc = -fiber[0].leading_coeff() / fiber[1].leading_coeff();
                    std::array<NovikovScalar, 2> start{z1_start,
                                                       NovikovScalar::monomial(y_lc, y_val).with_cutoff(cutoff)};
                    const std::array<Rational, 2> targets{chart_target + x1, chart_target};
                    NewtonOutcome refined = newton_refine(g1, g2, jac, start, targets, cutoff);
                    CriticalPoint p;
                    p.coords = refined.u;
                    p.valuation = {x1, y_val};
                    p.residual_valuation = refined.certified;
                    found.push_back(std::move(p));
                }
            }

            // Map back to the surface coordinates and certify against the
            // deformed potential itself; offsets stay paired with their
            // points through the final ordering.
            std::vector<std::pair<CriticalPoint, Rational>> mapped;
            for (auto& q : found) {
                const NovikovScalar y = q.coords[1];
                const auto yv = y.val();
                if (!yv.has_value() || !(*yv > 0)) continue;
                CriticalPoint p;
                p.coords = {q.coords[0],
                            NovikovScalar::t_power(b / 2) * (NovikovScalar::constant(Complex(branch, 0.0)) + y)};
                p.valuation = {*q.coords[0].val(), b / 2};
                Rational certified;
                bool first = true;
                for (int c = 0; c < 2; ++c) {
                    const NovikovScalar r = Wb.partial(c).eval(p.coords);
                    const auto rv = r.val();
                    const Rational comp = rv.has_value() ? *rv : cutoff;
                    if (first || comp < certified) certified = comp;
                    first = false;
                }
                if (certified < trunc_order) continue;
                p.residual_valuation = certified;
                p.critical_value = Wb.eval(p.coords);
                p.hessian_leading = hessian_leading(Wb, p.valuation, p.coords);
                p.morse = p.hessian_leading.det_valuation.has_value() &&
                          std::abs(p.hessian_leading.det_leading) > novikov_config().tau;
                p.origin_type = CriticalOriginType::edge;
                mapped.emplace_back(std::move(p), *yv);
            }
            std::stable_sort(mapped.begin(), mapped.end(),
                             [](const std::pair<CriticalPoint, Rational>& a, const std::pair<CriticalPoint, Rational>& b2) {
                                 const CriticalPoint& x = a.first;
                                 const CriticalPoint& y = b2.first;
                                 if (x.valuation[0] != y.valuation[0]) return x.valuation[0] > y.valuation[0];
                                 const Complex lx = x.coords[0].leading_coeff();
                                 const Complex ly = y.coords[0].leading_coeff();
                                 if (lx.real() != ly.real()) return lx.real() < ly.real();
                                 return lx.imag() < ly.imag();
                             });
            for (auto& pr : mapped) {
                if (branch < 0) {
                    sample.moving_offsets.push_back(pr.second);
                    sample.moving.push_back(std::move(pr.first));
                } else {
                    sample.stationary.push_back(std::move(pr.first));
                }
            }
        }
        out.push_back(std::move(sample));
    }
    return out;
}

}  // namespace lgtrop
