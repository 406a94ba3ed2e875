#pragma once

#include "lgtrop/toric.hpp"
#include "lgtrop/tropical.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lgtrop {

// The leading polynomial system has a positive-dimensional or otherwise
// non-isolated zero set (identically vanishing resultant, a partial that is
// identically zero, or ambiguous multiplicity clustering).
class DegenerateConfiguration : public std::runtime_error {
public:
    explicit DegenerateConfiguration(const std::string& what) : std::runtime_error(what) {}
};

// Leading-polynomial Hessian is singular at the starting root, so the
// fixed-slope iteration cannot start. Non-convenient edge bases always land
// here when pushed through the vertex path.
class SingularHessian : public std::runtime_error {
public:
    explicit SingularHessian(const std::string& what) : std::runtime_error(what) {}
};

// An iteration failed to strictly increase the residual valuation.
class NoProgress : public std::runtime_error {
public:
    explicit NoProgress(const std::string& what) : std::runtime_error(what) {}
};

// A valuation-side hypothesis of the contraction scheme fails; the message
// names the violated condition.
class ContractionPreconditionFailed : public std::runtime_error {
public:
    explicit ContractionPreconditionFailed(const std::string& what) : std::runtime_error(what) {}
};

// The series handed to the edge solver is locally convenient at the requested
// configuration (missing edge monomials, or a constant term sits at the origin).
class NotAnEdgeCase : public std::runtime_error {
public:
    explicit NotAnEdgeCase(const std::string& what) : std::runtime_error(what) {}
};

// Coefficients are too special: repeated leading roots, coincident critical
// values, duplicate blowup sizes, or a count-law mismatch.
class GenericityViolation : public std::runtime_error {
public:
    explicit GenericityViolation(const std::string& what) : std::runtime_error(what) {}
};

// A scan parameter leaves the window in which the requested family exists.
class OutOfRange : public std::runtime_error {
public:
    explicit OutOfRange(const std::string& what) : std::runtime_error(what) {}
};

enum class CriticalKind { toric, nontoric };
enum class CriticalOriginType { vertex, edge };

// Leading monomial system at a tropical position: every listed monomial
// attains the common minimal valuation delta at base, and the complex entries
// are the leading unit coefficients. Exponents are lex sorted.
struct LeadingSystem {
    ValuationPoint base{};
    Rational delta{};
    std::vector<std::pair<ExponentVector, Complex>> monomials;
};

LeadingSystem leading_system(const LaurentSeries& W, const ValuationPoint& base);

struct LeadingRoot {
    std::array<Complex, 2> units{};
    int multiplicity = 1;
};

// All simultaneous zeros of both log partials of the leading polynomial in the
// complex torus, with clustered multiplicities. Deterministic order. Returns
// empty when a log partial is a single monomial (no torus zeros). Throws
// DegenerateConfiguration when the zero set is not isolated.
std::vector<LeadingRoot> solve_leading(const LeadingSystem& sys);

// Hessian of the leading polynomial in unit coordinates at the given units.
std::array<std::array<Complex, 2>, 2> leading_poly_hessian(const LeadingSystem& sys,
                                                           const std::array<Complex, 2>& units);

// Leading Hessian data of a critical point in unit coordinates at its base.
// matrix holds the Hessian of the leading polynomial at the leading units;
// det_valuation/det_leading describe the determinant of the full unit-
// coordinate Hessian, whose leading term the Morse test reads. At a vertex
// point the two agree and scale equals the tropical value delta of the base.
struct HessianLeading {
    std::array<std::array<Complex, 2>, 2> matrix{};
    Rational scale{};
    std::optional<Rational> det_valuation{};
    Complex det_leading{};
};

struct CriticalPoint {
    std::array<NovikovScalar, 2> coords{NovikovScalar::zero(), NovikovScalar::zero()};
    ValuationPoint valuation{};
    CriticalKind kind = CriticalKind::toric;
    bool geometric = true;
    CriticalOriginType origin_type = CriticalOriginType::vertex;
    int origin_id = -1;
    NovikovScalar critical_value = NovikovScalar::zero();
    HessianLeading hessian_leading{};
    bool morse = false;
    // Certified lower bound for val(dW/dz_i) at coords, both i.
    Rational residual_valuation{};
};

// Graded Newton lift of a nondegenerate leading root at base into the Novikov
// torus, iterating with the fixed leading Hessian until both partials of W
// have valuation at least trunc_order + base_i. The valuation of the returned
// point equals base exactly. Throws SingularHessian if the leading Hessian is
// singular at units0, NoProgress if the residual valuation stalls.
CriticalPoint lift(const std::array<Complex, 2>& units0, const LaurentSeries& W,
                   const ValuationPoint& base, const Rational& trunc_order);

// Exact Hessian report for a point with the given coordinates over base.
HessianLeading hessian_leading(const LaurentSeries& W, const ValuationPoint& base,
                               const std::array<NovikovScalar, 2>& coords);

NovikovScalar critical_value(const LaurentSeries& W, const std::array<NovikovScalar, 2>& coords);

// Apex exponents of the two triangles flanking a normalized non-convenient
// edge whose cell joins (0,1) and (0,-1); apex_pos has positive first entry.
struct EdgeCase {
    ExponentVector apex_pos{1, 0};
    ExponentVector apex_neg{-1, 0};
};

// Critical points over the interior of the non-convenient edge of W. W must
// contain the monomials (0,1), (0,-1) and both apexes; no constant term.
// Returns 2*(i - k) points for apex first entries i > 0 > k, all sharing the
// second valuation (val c(0,-1) - val c(0,1)) / 2. Throws NotAnEdgeCase when
// the configuration is locally convenient, ContractionPreconditionFailed when
// a valuation hypothesis of the contraction scheme fails (including the edge
// existence inequality), NoProgress on stalls.
std::vector<CriticalPoint> solve_nonconvenient(const LaurentSeries& W, const EdgeCase& apexes,
                                               const Rational& trunc_order);

// Direct interface to the contraction iteration behind the edge solver.
// f1, f2 are series in two plus variables (all exponents componentwise >= 0)
// whose linear parts define the fixed slope; solves f1 = f2 = 0 from the
// origin until both residuals reach the target valuation. The trace records
// the residual valuation after every accepted step; consecutive entries gain
// at least guaranteed_gain. Throws ContractionPreconditionFailed when a
// valuation hypothesis fails, naming it.
struct ContractionTrace {
    std::array<NovikovScalar, 2> solution{NovikovScalar::zero(), NovikovScalar::zero()};
    std::vector<Rational> residual_valuations;
    Rational guaranteed_gain{};
    int iterations = 0;
};

ContractionTrace contraction_solve(const LaurentSeries& f1, const LaurentSeries& f2,
                                   const Rational& target);

// Pushforward of W under the torus automorphism with exponent matrix M in
// SL(2,Z): exponents map to M v, coefficients are unchanged. Critical points
// of the image at y correspond to z_j = y_1^{M[0][j]} y_2^{M[1][j]}.
LaurentSeries unimodular_image(const LaurentSeries& W, const std::array<std::array<std::int64_t, 2>, 2>& M);

struct SolveSummary {
    int toric_count = 0;
    int nontoric_count = 0;
    int nongeometric_count = 0;
    int expected_rank = 0;
    bool count_law_holds = false;
    std::vector<std::string> diagnostics;
};

struct SolveResult {
    std::vector<CriticalPoint> points;
    SolveSummary summary;
};

// Complete critical point set of the minimal potential of m (optionally with
// an admissible higher-order perturbation added). Solves every tropical
// vertex, routes the at-most-one non-convenient edge through the edge solver,
// classifies toric against non-toric by the energy minimizers, marks
// geometricity by membership in the geometric region, and checks the count
// law: geometric points == cohomology_rank(m). Deterministic point order:
// vertex origins by id, then edge origins. Throws GenericityViolation on
// repeated roots, coincident critical values, duplicate blowup sizes, or a
// count mismatch; invalid_argument for inadmissible perturbations or
// unsupported subdivision shapes.
SolveResult find_all_geometric(const ToricSurfaceModel& m, const LaurentSeries* perturbation = nullptr);

// One sample of the bulk-deformed continuum family on a half-size model.
struct ContinuumSample {
    Rational eps{};
    // Minus branch: the pair merging as eps grows, then the single point.
    std::vector<CriticalPoint> moving;
    // Plus branch: the stationary pair.
    std::vector<CriticalPoint> stationary;
    // val(1 + z2 T^{-b/2}) per moving point, the offset of z2 from the branch
    // center; the second valuation of every moving point is exactly b/2.
    std::vector<Rational> moving_offsets;
};

// Scans the bulk deformation W + T^eps z1 of the toric blowup of a Hirzebruch
// model at the half-size wall eta = b/2. Requires the canonical five-ray
// shape with rays (1,0),(1,1),(0,1),(-1,-k),(0,-1) and support values
// (0,-b/2,0,a,b); throws OutOfRange for eps outside (0, (A - b)/3) with
// A = a - k b/2. Each sample solves the full deformed potential on both
// branch charts of z2 = T^{b/2}(s + y), s = -1 for moving, s = +1 for
// stationary points.
std::vector<ContinuumSample> continuum_scan(const ToricSurfaceModel& m,
                                            const std::vector<Rational>& eps_values,
                                            const Rational& trunc_order);

}  // namespace lgtrop
