#pragma once

#include "lgtrop/laurent.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lgtrop {

class DegenerateLift : public std::runtime_error {
public:
    explicit DegenerateLift(const std::string& what) : std::runtime_error(what) {}
};

// Cell of the regular subdivision of the Newton polytope induced by the
// lower hull of the lifted support points (v, val(coeff(v))).
struct SubdivisionCell {
    int id = -1;   // unique within cells of the same dimension
    int dim = 0;
    // CCW vertex cycle (dim 2), endpoints (dim 1), single point (dim 0).
    // Support points in the relative interior of a cell are not listed here;
    // they are recorded in NewtonSubdivision::pruned.
    std::vector<ExponentVector> vertices;
    // Id of the dual element in the tropical curve: a vertex for dim 2, an
    // edge for dim 1, a chamber for dim 0.
    int dual_id = -1;
    bool boundary = false;  // dim 1 only: lies on the Newton polytope boundary
};

struct NewtonSubdivision {
    std::vector<ExponentVector> polytope;  // Newton polytope, CCW from lex-min
    std::vector<SubdivisionCell> cells2;
    std::vector<SubdivisionCell> cells1;
    std::vector<SubdivisionCell> cells0;
    // psi(v) for every support point v: the value of the maximal piecewise
    // linear function below the lift v -> val(coeff(v)). Equals the lift
    // exactly when the lifted point lies on the lower hull.
    std::map<ExponentVector, Rational> lift;
    // Support points that are not 0-cells (relative interior of some cell,
    // or lifted strictly above the lower hull).
    std::vector<ExponentVector> pruned;
};

struct TropVertex {
    int id = -1;
    ValuationPoint coords;
    std::int64_t weight = 0;  // 2 x lattice area of the dual 2-cell
    int dual_cell_id = -1;
};

// Bounded edge: tail and head are vertex ids. Unbounded ray: head == -1,
// direction points away from tail. Full line (collinear support only):
// tail == head == -1 and anchor holds a point on the line.
struct TropEdge {
    int id = -1;
    int tail = -1;
    int head = -1;
    ExponentVector direction{0, 0};  // primitive, away from tail
    std::int64_t weight = 0;         // lattice length of the dual 1-cell
    int dual_cell_id = -1;
    std::optional<ValuationPoint> anchor;
};

// Connected component of the complement of the curve, labelled by its unique
// minimizing monomial; the value there is lambda + <exponent, x>.
struct TropChamber {
    int id = -1;
    ExponentVector exponent{0, 0};
    Rational lambda;
    int dual_cell_id = -1;
};

struct TropicalCurve {
    std::vector<TropVertex> vertices;
    std::vector<TropEdge> edges;
    std::vector<TropChamber> chambers;
};

// Curve and subdivision computed together with duality ids cross-wired.
struct TropicalData {
    TropicalCurve curve;
    NewtonSubdivision subdivision;
    // Raw lift val(coeff(v)) at every support point (the subdivision's lift
    // map holds psi, which is lower where the lifted point is off the hull).
    std::map<ExponentVector, Rational> support_lift;
};

// Corner locus of min_v (val(coeff(v)) + <v, x>) as a weighted planar graph,
// with the dual regular subdivision. Exact rational coordinates. Stored in
// min-plus corner-locus coordinates; renderers apply the 180-degree rotation.
TropicalData tropical_data(const LaurentSeries& W);
TropicalCurve tropicalize(const LaurentSeries& W);
NewtonSubdivision newton_subdivision(const LaurentSeries& W);

// A lattice polygon/segment is convenient when no boundary edge (pair of
// adjacent vertices) spans a line through the origin; points are convenient.
bool is_convenient(const std::vector<ExponentVector>& cell);
// Applies the test to the Newton polytope of W.
bool is_convenient(const LaurentSeries& W);

struct LocalConvenience {
    bool ok = true;
    std::vector<SubdivisionCell> offending;  // non-convenient 1- and 2-cells
};
// Every cell of the subdivision must be convenient.
LocalConvenience is_locally_convenient(const NewtonSubdivision& S);

// 2 x lattice area of the Newton polytope: the critical-point count of a
// convenient nondegenerate series. For non-convenient input this is only an
// upper-bound heuristic; callers check is_convenient first.
std::int64_t kushnirenko_count(const LaurentSeries& W);

// Product of the two edge weights and |det| of their primitive directions at
// a trivalent vertex; equal to the vertex weight (= 2 x dual cell area) by
// balancing, which is asserted. Non-trivalent vertices fall back to the
// vertex weight.
std::int64_t vertex_multiplicity(const TropicalCurve& curve, int vertex_id);

// Recomputes the structural invariants independently of the construction:
// exact balancing at every vertex, duality bijection counts, vertex-weight
// sum = 2 x area of the polytope, edge weight = dual lattice length, edge
// direction perpendicular to the dual 1-cell, unbounded directions = inward
// primitive normals of polytope edges. Returns one message per violation.
std::vector<std::string> tropical_invariant_failures(const TropicalData& data);

// v / gcd(|v.p|, |v.q|); zero vector is returned unchanged.
ExponentVector primitive_vector(const ExponentVector& v);

}  // namespace lgtrop
