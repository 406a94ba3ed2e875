#include "lgtrop/tropical.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace lgtrop {

namespace {

struct SupportPoint {
    ExponentVector v;
    Rational lambda;
};

// Lower-hull face: supporting affine functional h(v) = <u,v> + c with
// h <= lambda everywhere and equality exactly on `tight`.
struct FaceData {
    std::vector<ExponentVector> tight;
    std::vector<ExponentVector> polygon;
    std::array<Rational, 2> u;
    Rational c;
    ValuationPoint dual;  // -u: the point where all tight monomials tie
};

std::int64_t cross(const ExponentVector& a, const ExponentVector& b) {
    return a.p * b.q - a.q * b.p;
}

ExponentVector negate(const ExponentVector& v) { return {-v.p, -v.q}; }

std::vector<SupportPoint> support_of(const LaurentSeries& W) {
    std::vector<SupportPoint> pts;
    for (const auto& [v, coeff] : W.terms()) {
        auto val = coeff.val();
        if (!val) throw DegenerateLift("support point with zero-valued coefficient");
        pts.push_back({v, *val});
    }
    if (pts.empty()) throw DegenerateLift("empty support");
    return pts;
}

Rational affine_value(const std::array<Rational, 2>& u, const Rational& c,
                      const ExponentVector& v) {
    return u[0] * v.p + u[1] * v.q + c;
}

bool polygon_contains(const std::vector<ExponentVector>& poly, const ExponentVector& v) {
    std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        ExponentVector a = poly[i];
        ExponentVector b = poly[(i + 1) % n];
        if (cross(b - a, v - a) < 0) return false;
    }
    return true;
}

// Every maximal 2-dimensional tight set of a below-the-lift affine functional,
// found by brute-force enumeration of affinely independent support triples.
std::vector<FaceData> lower_hull_faces(const std::vector<SupportPoint>& pts) {
    std::vector<FaceData> faces;
    std::set<std::vector<ExponentVector>> seen;
    std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k) {
                ExponentVector e1 = pts[j].v - pts[i].v;
                ExponentVector e2 = pts[k].v - pts[i].v;
                std::int64_t det = cross(e1, e2);
                if (det == 0) continue;
                Rational r1 = pts[j].lambda - pts[i].lambda;
                Rational r2 = pts[k].lambda - pts[i].lambda;
                std::array<Rational, 2> u = {
                    (r1 * e2.q - r2 * e1.q) / det,
                    (r2 * e1.p - r1 * e2.p) / det,
                };
                Rational c = pts[i].lambda - (u[0] * pts[i].v.p + u[1] * pts[i].v.q);
                std::vector<ExponentVector> tight;
                bool below = true;
                for (const auto& q : pts) {
                    Rational h = affine_value(u, c, q.v);
                    if (h > q.lambda) {
                        below = false;
                        break;
                    }
                    if (h == q.lambda) tight.push_back(q.v);
                }
                if (!below) continue;
                if (!seen.insert(tight).second) continue;
                FaceData f;
                f.tight = std::move(tight);
                f.polygon = convex_hull(f.tight);
                f.u = u;
                f.c = c;
                f.dual = {-u[0], -u[1]};
                faces.push_back(std::move(f));
            }
        }
    }
    std::sort(faces.begin(), faces.end(),
              [](const FaceData& a, const FaceData& b) { return a.polygon < b.polygon; });
    return faces;
}

// Primitive integer direction of the rational vector to - from.
ExponentVector rational_primitive(const ValuationPoint& from, const ValuationPoint& to) {
    Rational dp = to[0] - from[0];
    Rational dq = to[1] - from[1];
    BigInt dden = lcm(denominator(dp), denominator(dq));
    BigInt ip = numerator(dp) * (dden / denominator(dp));
    BigInt iq = numerator(dq) * (dden / denominator(dq));
    BigInt g = gcd(abs(ip), abs(iq));
    if (g != 0) {
        ip /= g;
        iq /= g;
    }
    return {ip.convert_to<std::int64_t>(), iq.convert_to<std::int64_t>()};
}

std::pair<ExponentVector, ExponentVector> canonical_pair(ExponentVector a, ExponentVector b) {
    if (b < a) std::swap(a, b);
    return {a, b};
}

void build_point_case(const std::vector<SupportPoint>& pts, TropicalData& out) {
    const auto& p = pts.front();
    SubdivisionCell c0;
    c0.id = 0;
    c0.dim = 0;
    c0.vertices = {p.v};
    c0.dual_id = 0;
    out.subdivision.cells0.push_back(c0);
    out.subdivision.lift[p.v] = p.lambda;
    TropChamber ch;
    ch.id = 0;
    ch.exponent = p.v;
    ch.lambda = p.lambda;
    ch.dual_cell_id = 0;
    out.curve.chambers.push_back(ch);
}

// Collinear support: the subdivision is the 1D convex minorant of the lifts
// along the segment; each interior breakpoint pair is dual to a full line.
void build_segment_case(const std::vector<SupportPoint>& pts, TropicalData& out) {
    auto& S = out.subdivision;
    ExponentVector base = S.polytope[0];
    ExponentVector g = primitive_vector(S.polytope[1] - base);

    struct Node {
        std::int64_t t;
        Rational lambda;
        ExponentVector v;
    };
    std::vector<Node> nodes;
    for (const auto& p : pts) {
        ExponentVector d = p.v - base;
        std::int64_t t = (g.p != 0) ? d.p / g.p : d.q / g.q;
        nodes.push_back({t, p.lambda, p.v});
    }
    std::sort(nodes.begin(), nodes.end(),
              [](const Node& a, const Node& b) { return a.t < b.t; });

    // Lower convex minorant over (t, lambda): keep strictly increasing slopes.
    std::vector<Node> bp;
    for (const auto& nd : nodes) {
        while (bp.size() >= 2) {
            const Node& a = bp[bp.size() - 2];
            const Node& b = bp[bp.size() - 1];
            // slope(a,b) >= slope(b,nd) => b is not a strict breakpoint
            if ((b.lambda - a.lambda) * (nd.t - b.t) >= (nd.lambda - b.lambda) * (b.t - a.t))
                bp.pop_back();
            else
                break;
        }
        bp.push_back(nd);
    }

    for (std::size_t i = 0; i < bp.size(); ++i) {
        SubdivisionCell c0;
        c0.id = static_cast<int>(i);
        c0.dim = 0;
        c0.vertices = {bp[i].v};
        c0.dual_id = static_cast<int>(i);
        S.cells0.push_back(c0);
        TropChamber ch;
        ch.id = static_cast<int>(i);
        ch.exponent = bp[i].v;
        ch.lambda = bp[i].lambda;
        ch.dual_cell_id = static_cast<int>(i);
        out.curve.chambers.push_back(ch);
    }
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        SubdivisionCell c1;
        c1.id = static_cast<int>(i);
        c1.dim = 1;
        auto pr = canonical_pair(bp[i].v, bp[i + 1].v);
        c1.vertices = {pr.first, pr.second};
        c1.dual_id = static_cast<int>(i);
        c1.boundary = false;
        S.cells1.push_back(c1);

        TropEdge e;
        e.id = static_cast<int>(i);
        e.tail = -1;
        e.head = -1;
        ExponentVector m = bp[i].v - bp[i + 1].v;
        ExponentVector d = primitive_vector(ExponentVector{-m.q, m.p});
        if (d.p < 0 || (d.p == 0 && d.q < 0)) d = negate(d);
        e.direction = d;
        e.weight = lattice_length(bp[i + 1].v - bp[i].v);
        e.dual_cell_id = static_cast<int>(i);
        Rational r = bp[i + 1].lambda - bp[i].lambda;
        Rational denom = Rational(m.p) * m.p + Rational(m.q) * m.q;
        e.anchor = ValuationPoint{r * m.p / denom, r * m.q / denom};
        out.curve.edges.push_back(e);
    }

    // psi: interpolate the minorant at every support parameter.
    for (const auto& nd : nodes) {
        std::size_t seg = 0;
        while (seg + 1 < bp.size() && bp[seg + 1].t <= nd.t) ++seg;
        Rational psi;
        if (bp[seg].t == nd.t) {
            psi = bp[seg].lambda;
        } else {
            const Node& a = bp[seg];
            const Node& b = bp[seg + 1];
            psi = a.lambda + (b.lambda - a.lambda) * (nd.t - a.t) / (b.t - a.t);
        }
        S.lift[nd.v] = psi;
    }
}

void build_planar_case(const std::vector<SupportPoint>& pts, TropicalData& out) {
    auto& S = out.subdivision;
    auto& C = out.curve;
    std::vector<FaceData> faces = lower_hull_faces(pts);

    for (std::size_t i = 0; i < faces.size(); ++i) {
        SubdivisionCell c2;
        c2.id = static_cast<int>(i);
        c2.dim = 2;
        c2.vertices = faces[i].polygon;
        c2.dual_id = static_cast<int>(i);
        S.cells2.push_back(c2);

        TropVertex tv;
        tv.id = static_cast<int>(i);
        tv.coords = faces[i].dual;
        tv.weight = lattice_area2(faces[i].polygon);
        tv.dual_cell_id = static_cast<int>(i);
        C.vertices.push_back(tv);
    }

    // 1-cells: polygon boundary edges, shared edges appearing twice.
    std::map<std::pair<ExponentVector, ExponentVector>, std::vector<int>> adjacency;
    for (std::size_t i = 0; i < faces.size(); ++i) {
        const auto& poly = faces[i].polygon;
        for (std::size_t j = 0; j < poly.size(); ++j) {
            auto key = canonical_pair(poly[j], poly[(j + 1) % poly.size()]);
            adjacency[key].push_back(static_cast<int>(i));
        }
    }
    for (const auto& [key, adj] : adjacency) {
        int id = static_cast<int>(S.cells1.size());
        SubdivisionCell c1;
        c1.id = id;
        c1.dim = 1;
        c1.vertices = {key.first, key.second};
        c1.dual_id = id;
        c1.boundary = adj.size() == 1;
        S.cells1.push_back(c1);

        TropEdge e;
        e.id = id;
        e.weight = lattice_length(key.second - key.first);
        e.dual_cell_id = id;
        if (adj.size() == 2) {
            int t = std::min(adj[0], adj[1]);
            int h = std::max(adj[0], adj[1]);
            e.tail = t;
            e.head = h;
            e.direction = rational_primitive(C.vertices[t].coords, C.vertices[h].coords);
        } else {
            e.tail = adj[0];
            e.head = -1;
            ExponentVector span = key.second - key.first;
            ExponentVector d = primitive_vector(ExponentVector{-span.q, span.p});
            // Point into the polytope: all support off the spanned line lies
            // on one side of a boundary edge.
            for (const auto& q : pts) {
                std::int64_t side = cross(span, q.v - key.first);
                if (side != 0) {
                    std::int64_t along = d.p * (q.v.p - key.first.p) + d.q * (q.v.q - key.first.q);
                    if (along < 0) d = negate(d);
                    break;
                }
            }
            e.direction = d;
        }
        C.edges.push_back(e);
    }

    // 0-cells: vertices of the cell complex; chambers are their duals.
    std::map<ExponentVector, Rational> lambda_of;
    for (const auto& p : pts) lambda_of[p.v] = p.lambda;
    std::set<ExponentVector> corners;
    for (const auto& f : faces) corners.insert(f.polygon.begin(), f.polygon.end());
    for (const auto& v : corners) {
        int id = static_cast<int>(S.cells0.size());
        SubdivisionCell c0;
        c0.id = id;
        c0.dim = 0;
        c0.vertices = {v};
        c0.dual_id = id;
        S.cells0.push_back(c0);

        TropChamber ch;
        ch.id = id;
        ch.exponent = v;
        ch.lambda = lambda_of.at(v);
        ch.dual_cell_id = id;
        C.chambers.push_back(ch);
    }

    // psi at every support point: the containing face's functional.
    for (const auto& p : pts) {
        for (const auto& f : faces) {
            if (polygon_contains(f.polygon, p.v)) {
                S.lift[p.v] = affine_value(f.u, f.c, p.v);
                break;
            }
        }
    }
}

}  // namespace

ExponentVector primitive_vector(const ExponentVector& v) {
    std::int64_t g = std::gcd(std::abs(v.p), std::abs(v.q));
    if (g == 0) return v;
    return {v.p / g, v.q / g};
}

TropicalData tropical_data(const LaurentSeries& W) {
    std::vector<SupportPoint> pts = support_of(W);
    TropicalData out;
    std::vector<ExponentVector> sup;
    sup.reserve(pts.size());
    for (const auto& p : pts) {
        sup.push_back(p.v);
        out.support_lift[p.v] = p.lambda;
    }
    out.subdivision.polytope = convex_hull(sup);

    switch (out.subdivision.polytope.size()) {
        case 1:
            build_point_case(pts, out);
            break;
        case 2:
            build_segment_case(pts, out);
            break;
        default:
            build_planar_case(pts, out);
            break;
    }

    std::set<ExponentVector> corner_set;
    for (const auto& c : out.subdivision.cells0) corner_set.insert(c.vertices.front());
    for (const auto& p : pts) {
        if (!corner_set.count(p.v)) out.subdivision.pruned.push_back(p.v);
    }
    return out;
}

TropicalCurve tropicalize(const LaurentSeries& W) { return tropical_data(W).curve; }

NewtonSubdivision newton_subdivision(const LaurentSeries& W) {
    return tropical_data(W).subdivision;
}

bool is_convenient(const std::vector<ExponentVector>& cell) {
    std::size_t n = cell.size();
    if (n <= 1) return true;
    std::size_t edges = (n == 2) ? 1 : n;
    for (std::size_t i = 0; i < edges; ++i) {
        if (cross(cell[i], cell[(i + 1) % n]) == 0) return false;
    }
    return true;
}

bool is_convenient(const LaurentSeries& W) { return is_convenient(W.newton_polytope()); }

LocalConvenience is_locally_convenient(const NewtonSubdivision& S) {
    LocalConvenience result;
    for (const auto& c : S.cells2) {
        if (!is_convenient(c.vertices)) result.offending.push_back(c);
    }
    for (const auto& c : S.cells1) {
        if (!is_convenient(c.vertices)) result.offending.push_back(c);
    }
    result.ok = result.offending.empty();
    return result;
}

std::int64_t kushnirenko_count(const LaurentSeries& W) {
    return lattice_area2(W.newton_polytope());
}

std::int64_t vertex_multiplicity(const TropicalCurve& curve, int vertex_id) {
    const TropVertex* vertex = nullptr;
    for (const auto& v : curve.vertices) {
        if (v.id == vertex_id) vertex = &v;
    }
    if (!vertex) throw NumericError("vertex_multiplicity: unknown vertex id");
    std::vector<std::pair<ExponentVector, std::int64_t>> incident;
    for (const auto& e : curve.edges) {
        if (e.tail == vertex_id) incident.emplace_back(e.direction, e.weight);
        if (e.head == vertex_id) incident.emplace_back(negate(e.direction), e.weight);
    }
    if (incident.size() != 3) return vertex->weight;
    std::int64_t m = incident[0].second * incident[1].second *
                     std::abs(cross(incident[0].first, incident[1].first));
    if (m != vertex->weight)
        throw NumericError("vertex multiplicity disagrees with dual cell area");
    return m;
}

std::vector<std::string> tropical_invariant_failures(const TropicalData& data) {
    std::vector<std::string> failures;
    auto fail = [&failures](const std::string& msg) { failures.push_back(msg); };
    const auto& S = data.subdivision;
    const auto& C = data.curve;

    if (C.vertices.size() != S.cells2.size()) fail("duality: #vertices != #2-cells");
    if (C.edges.size() != S.cells1.size()) fail("duality: #edges != #1-cells");
    if (C.chambers.size() != S.cells0.size()) fail("duality: #chambers != #0-cells");

    std::int64_t weight_sum = 0;
    for (const auto& v : C.vertices) weight_sum += v.weight;
    if (weight_sum != lattice_area2(S.polytope))
        fail("vertex weights do not sum to 2 x polytope area");

    auto vertex_by_id = [&C](int id) -> const TropVertex* {
        for (const auto& v : C.vertices)
            if (v.id == id) return &v;
        return nullptr;
    };
    auto cell1_by_id = [&S](int id) -> const SubdivisionCell* {
        for (const auto& c : S.cells1)
            if (c.id == id) return &c;
        return nullptr;
    };

    for (const auto& e : C.edges) {
        const SubdivisionCell* dual = cell1_by_id(e.dual_cell_id);
        if (!dual || dual->vertices.size() != 2) {
            fail("edge with missing dual 1-cell");
            continue;
        }
        ExponentVector span = dual->vertices[1] - dual->vertices[0];
        if (e.weight != lattice_length(span)) fail("edge weight != dual lattice length");
        if (e.direction.p * span.p + e.direction.q * span.q != 0)
            fail("edge direction not perpendicular to dual 1-cell");
        if (primitive_vector(e.direction) != e.direction || (e.direction == ExponentVector{0, 0}))
            fail("edge direction not primitive");
        if (e.tail >= 0 && e.head >= 0) {
            if (dual->boundary) fail("bounded edge dual to boundary 1-cell");
            const TropVertex* t = vertex_by_id(e.tail);
            const TropVertex* h = vertex_by_id(e.head);
            if (!t || !h) {
                fail("bounded edge with missing endpoint");
                continue;
            }
            Rational dx = h->coords[0] - t->coords[0];
            Rational dy = h->coords[1] - t->coords[1];
            if (dx * e.direction.q != dy * e.direction.p)
                fail("bounded edge endpoints not along direction");
            if (dx * e.direction.p + dy * e.direction.q <= 0)
                fail("bounded edge direction points away from head");
        } else if (e.tail >= 0) {
            if (!dual->boundary) fail("ray dual to interior 1-cell");
            // Inward primitive normal of the polytope edge through the dual cell.
            ExponentVector d = primitive_vector(ExponentVector{-span.q, span.p});
            bool oriented = false;
            for (const auto& w : S.polytope) {
                std::int64_t side = cross(span, w - dual->vertices[0]);
                if (side != 0) {
                    std::int64_t along =
                        d.p * (w.p - dual->vertices[0].p) + d.q * (w.q - dual->vertices[0].q);
                    if (along < 0) d = negate(d);
                    oriented = true;
                    break;
                }
            }
            if (!oriented || !(d == e.direction))
                fail("ray direction is not the inward primitive normal");
        } else {
            if (!e.anchor) fail("line edge without anchor");
        }
    }

    // Exact balancing at every vertex.
    for (const auto& v : C.vertices) {
        std::int64_t bp = 0, bq = 0;
        for (const auto& e : C.edges) {
            if (e.tail == v.id) {
                bp += e.weight * e.direction.p;
                bq += e.weight * e.direction.q;
            }
            if (e.head == v.id) {
                bp -= e.weight * e.direction.p;
                bq -= e.weight * e.direction.q;
            }
        }
        if (bp != 0 || bq != 0) {
            std::ostringstream os;
            os << "balancing fails at vertex " << v.id;
            fail(os.str());
        }
    }

    // Each vertex: the exact argmin of the lifted forms must be the dual cell.
    for (const auto& v : C.vertices) {
        std::optional<Rational> best;
        std::vector<ExponentVector> argmin;
        for (const auto& [w, lam] : data.support_lift) {
            Rational value = lam + v.coords[0] * w.p + v.coords[1] * w.q;
            if (!best || value < *best) {
                best = value;
                argmin = {w};
            } else if (value == *best) {
                argmin.push_back(w);
            }
        }
        bool matched = false;
        for (const auto& c : S.cells2) {
            if (c.dual_id == v.id) matched = convex_hull(argmin) == c.vertices;
        }
        if (!matched) fail("vertex argmin does not match dual 2-cell");
    }

    // Chambers carry the true lift of their monomial.
    for (const auto& ch : C.chambers) {
        auto it = data.support_lift.find(ch.exponent);
        if (it == data.support_lift.end() || it->second != ch.lambda)
            fail("chamber lambda does not match support lift");
    }

    // psi <= lift everywhere, equality on 0-cells.
    for (const auto& [w, lam] : data.support_lift) {
        auto it = S.lift.find(w);
        if (it == S.lift.end()) {
            fail("support point missing from psi map");
            continue;
        }
        if (it->second > lam) fail("psi exceeds the lift");
    }
    for (const auto& c : S.cells0) {
        auto it = S.lift.find(c.vertices.front());
        auto raw = data.support_lift.find(c.vertices.front());
        if (it == S.lift.end() || raw == data.support_lift.end() || it->second != raw->second)
            fail("0-cell where psi != lift");
    }

    return failures;
}

}  // namespace lgtrop
