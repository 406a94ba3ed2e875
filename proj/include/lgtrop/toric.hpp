#pragma once

#include "lgtrop/laurent.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lgtrop {

class InvalidModel : public std::runtime_error {
public:
    explicit InvalidModel(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a toric blowup size reaches the critical-valuation bound.
class SizeBoundViolated : public std::runtime_error {
public:
    SizeBoundViolated(const std::string& what, Rational bound)
        : std::runtime_error(what), bound(std::move(bound)) {}

    Rational bound;
};

// Non-toric blowup sizes on one divisor must be pairwise distinct.
class DuplicateEpsilon : public std::runtime_error {
public:
    explicit DuplicateEpsilon(const std::string& what) : std::runtime_error(what) {}
};

// One replayed toric blowup: `corner` indexes the fan state at the time the
// blowup was applied (corner j sits between rays j and j+1, cyclically).
struct ToricBlowupRecord {
    int corner = 0;
    Rational eta;
};

// A complete simplicial fan in Z^2 with moment-polytope data and the blowup
// history. Rays are primitive and counterclockwise, making one full turn.
// Models are immutable; the blowup operations return new models.
//
//   rays[i], lambdas[i]   ray nu_i and the support constant of <x,nu_i> >= -lambda_i
//   nontoric_blowups[i]   sizes of the blowup points on the divisor of ray i,
//                         each point sitting near the corner with ray i-1
//   eps_small_certified   set when every stored size was checked against the
//                         adjacent corner's blowup_size_bound
struct ToricSurfaceModel {
    std::vector<ExponentVector> rays;
    std::vector<Rational> lambdas;
    std::vector<ToricBlowupRecord> toric_blowups;
    std::vector<std::vector<Rational>> nontoric_blowups;
    Rational trunc_order = Rational(24);
    bool eps_small_certified = false;
    std::vector<std::string> warnings;

    int ray_count() const { return static_cast<int>(rays.size()); }
};

// Builds a model from rays and lambdas with empty blowup logs; validates.
ToricSurfaceModel make_model(std::vector<ExponentVector> rays, std::vector<Rational> lambdas);

// Human-readable invariant violations; empty means the model is valid.
std::vector<std::string> model_invariant_failures(const ToricSurfaceModel& m);
// Throws InvalidModel listing every violation.
void validate_model(const ToricSurfaceModel& m);

// Vertices of { x : <x,nu_i> >= -lambda_i }, counterclockwise; vertex j is the
// intersection of the constraints of rays j and j+1. Requires a valid model.
std::vector<ValuationPoint> moment_polytope(const ToricSurfaceModel& m);

// 2 x euclidean area of a simple polygon (shoelace); positive when
// counterclockwise.
Rational polygon_area2(const std::vector<ValuationPoint>& polygon);

// Closed membership test against every moment-polytope constraint.
bool in_moment_polytope(const ToricSurfaceModel& m, const ValuationPoint& x);

// The two critical-point filters of the model: the star-shaped polygon joining
// the heads of the rays (exponent space) and the moment polytope (valuation
// space). The star polygon has the rays as boundary vertices, counterclockwise.
struct GeometricRegion {
    std::vector<ExponentVector> star;
    std::vector<ValuationPoint> polytope;
};

GeometricRegion geometric_region(const ToricSurfaceModel& m);
bool region_contains_valuation(const GeometricRegion& region, const ValuationPoint& x);
// Membership in the closed star polygon, tested cone by cone.
bool region_contains_exponent(const GeometricRegion& region, const ExponentVector& v);

// The unimodular chart at corner j sending (nu_j, nu_{j+1}) to the standard
// basis and the corner vertex of the moment polytope to the origin. Requires
// det(nu_j, nu_{j+1}) = 1 (a smooth corner).
//
// Valuations map by u_i = <x, nu_{j+i}> + lambda_{j+i}; exponents map
// contravariantly so that pairings <v, x - vertex> are preserved.
struct CornerChart {
    int corner = 0;
    std::array<ExponentVector, 2> basis;  // nu_j, nu_{j+1}
    std::array<Rational, 2> offsets;      // lambda_j, lambda_{j+1}
    ValuationPoint vertex;                // corner of the moment polytope
};

CornerChart corner_chart(const ToricSurfaceModel& m, int corner);
ValuationPoint chart_valuation(const CornerChart& chart, const ValuationPoint& x);
ValuationPoint chart_valuation_inverse(const CornerChart& chart, const ValuationPoint& u);
ExponentVector chart_exponent(const CornerChart& chart, const ExponentVector& v);
ExponentVector chart_exponent_inverse(const CornerChart& chart, const ExponentVector& w);
// Rewrites a potential in the chart coordinates: the term c z^v becomes
// (T^{<v,vertex>} c) z^{chart_exponent(v)}, so tropical values are preserved
// under chart_valuation.
LaurentSeries chart_series(const CornerChart& chart, const LaurentSeries& f);

// Hori-Vafa potential sum_i T^{lambda_i} z^{nu_i} over the current rays.
LaurentSeries hori_vafa(const ToricSurfaceModel& m);

// The full minimal-energy potential: Hori-Vafa plus, for each ray i carrying
// l blowup points, the terms e_k(T^{-eps_1},...,T^{-eps_l}) T^{lambda_{i-1} +
// k lambda_i} z^{nu_{i-1} + k nu_i} for k = 1..l (elementary symmetric
// polynomials; all eps = 0 degenerates to binomial coefficients).
LaurentSeries w_min(const ToricSurfaceModel& m);

// min over the given critical valuations of max(u1, u2) in the normalized
// chart of the target corner; empty optional encodes +infinity (no critical
// points). Pure in the model and the supplied solver output.
std::optional<Rational> blowup_size_bound(const ToricSurfaceModel& m, int corner,
                                          const std::vector<ValuationPoint>& critical_valuations);

// Inserts the ray nu' = nu_j + nu_{j+1} after ray j with lambda' = lambda_j +
// lambda_{j+1} - eta (the new Hori-Vafa term is T^{-eta} z^{nu'} in the chart
// of corner j). When critical valuations are supplied the size bound is
// enforced: eta >= bound throws SizeBoundViolated unless override_bound is
// set, which records a warning instead.
ToricSurfaceModel toric_blowup(const ToricSurfaceModel& m, int corner, const Rational& eta,
                               const std::vector<ValuationPoint>* critical_valuations = nullptr,
                               bool override_bound = false);

// Appends blowup points of the given sizes on the divisor of ray i. Sizes
// must be positive and pairwise distinct on that divisor. When critical
// valuations are supplied each size is checked against the adjacent corner's
// bound: smaller sizes certify smallness, larger ones record a warning.
ToricSurfaceModel nontoric_blowup(const ToricSurfaceModel& m, int ray, std::vector<Rational> sizes,
                                  const std::vector<ValuationPoint>* critical_valuations = nullptr);

// Convexity test on three energy-minimizer rays in counterclockwise order:
// true (possibly geometric) iff det(nu_i - nu_j, nu_k - nu_j) <= 0.
bool geometric_filter_toric(const ExponentVector& nu_i, const ExponentVector& nu_j,
                            const ExponentVector& nu_k);

// For minimizers near corner j with l blowup points on the divisor of ray
// j+1: true iff every minimizer exponent lies in {nu_j, nu_{j+1}} union
// {nu_j + k nu_{j+1} : 1 <= k <= l}. At least one minimizer must lie in the
// latter set.
bool geometric_filter_nontoric(const ToricSurfaceModel& m, int corner,
                               const std::vector<ExponentVector>& minimizers);

// Rank of H*(X): current ray count plus the total number of non-toric points.
int cohomology_rank(const ToricSurfaceModel& m);

}  // namespace lgtrop
