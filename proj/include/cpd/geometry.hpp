#pragma once

// Exact 2-D convex geometry: convex polygons, half-plane clipping, power
// diagrams (Laguerre tessellations) and closed-form polygon moments.
//
// All functions here are pure; values are immutable after construction and
// safe to share across threads.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cpd/errors.hpp"

namespace cpd {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline Point2 operator/(Point2 a, double s) { return {a.x / s, a.y / s}; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Point2 a) { return a.x * a.x + a.y * a.y; }
inline double norm(Point2 a) { return std::sqrt(norm2(a)); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

// {x : normal . x <= offset}
struct HalfPlane {
    Point2 normal;
    double offset = 0.0;
};

// Counterclockwise vertex list. Construction does not validate; call
// validate_domain() on anything that crosses an API boundary.
struct ConvexPolygon {
    std::vector<Point2> vertices;
};

// Relative tolerance used to merge near-coincident vertices produced by
// clipping, scaled by the domain diameter.
inline constexpr double kDegeneracyTolerance = 1e-12;

inline double polygon_area(const ConvexPolygon& poly) {
    const auto& v = poly.vertices;
    double twice = 0.0;
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        const Point2& a = v[i];
        const Point2& b = v[(i + 1) % n];
        twice += cross(a, b);
    }
    return 0.5 * twice;
}

inline Point2 polygon_centroid(const ConvexPolygon& poly) {
    const auto& v = poly.vertices;
    double twice = 0.0;
    Point2 acc{0.0, 0.0};
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        const Point2& a = v[i];
        const Point2& b = v[(i + 1) % n];
        const double w = cross(a, b);
        twice += w;
        acc = acc + w * (a + b);
    }
    return acc / (3.0 * twice);
}

// Signed integral of |x - a|^2 over the triangle (p0, p1, p2).
inline double triangle_second_moment(Point2 p0, Point2 p1, Point2 p2, Point2 a) {
    const Point2 q0 = p0 - a, q1 = p1 - a, q2 = p2 - a;
    const double area = 0.5 * cross(p1 - p0, p2 - p0);
    return area / 6.0 *
           (norm2(q0) + norm2(q1) + norm2(q2) + dot(q0, q1) + dot(q1, q2) + dot(q2, q0));
}

// Exact integral of |x - a|^2 over the polygon, by fanning signed triangles
// from a. Valid for any a, inside or outside.
inline double polygon_second_moment(const ConvexPolygon& poly, Point2 a) {
    const auto& v = poly.vertices;
    double acc = 0.0;
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        const Point2 q1 = v[i] - a;
        const Point2 q2 = v[(i + 1) % n] - a;
        const double area = 0.5 * cross(q1, q2);
        acc += area / 6.0 * (norm2(q1) + norm2(q2) + dot(q1, q2));
    }
    return acc;
}

inline double polygon_diameter(const ConvexPolygon& poly) {
    const auto& v = poly.vertices;
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            best = std::max(best, norm2(v[i] - v[j]));
    return std::sqrt(best);
}

struct BoundingBox {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

inline BoundingBox bounding_box(const ConvexPolygon& poly) {
    BoundingBox b{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
                  std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
    for (const Point2& p : poly.vertices) {
        b.x0 = std::min(b.x0, p.x);
        b.y0 = std::min(b.y0, p.y);
        b.x1 = std::max(b.x1, p.x);
        b.y1 = std::max(b.y1, p.y);
    }
    return b;
}

// Signed distance of p to the edge chain; > tol on every edge means strictly
// inside, >= -tol means inside or on the boundary.
inline bool polygon_contains(const ConvexPolygon& poly, Point2 p, double tol = 0.0) {
    const auto& v = poly.vertices;
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        const Point2 a = v[i];
        const Point2 b = v[(i + 1) % n];
        const Point2 e = b - a;
        if (cross(e, p - a) < -tol * norm(e)) return false;
    }
    return true;
}

inline bool polygon_contains_strictly(const ConvexPolygon& poly, Point2 p, double tol) {
    const auto& v = poly.vertices;
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        const Point2 a = v[i];
        const Point2 b = v[(i + 1) % n];
        const Point2 e = b - a;
        if (cross(e, p - a) <= tol * norm(e)) return false;
    }
    return true;
}

// Throws InvalidDomain unless the polygon is a valid counterclockwise convex
// domain: >= 3 vertices, nonnegative turn at every vertex, positive area, no
// two consecutive vertices closer than the degeneracy tolerance.
inline void validate_domain(const ConvexPolygon& poly) {
    const auto& v = poly.vertices;
    if (v.size() < 3) throw InvalidDomain("fewer than 3 vertices");
    for (const Point2& p : v)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw InvalidDomain("non-finite vertex coordinate");
    const double diam = polygon_diameter(poly);
    const double merge_tol = kDegeneracyTolerance * diam;
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        const Point2 a = v[i];
        const Point2 b = v[(i + 1) % n];
        const Point2 c = v[(i + 2) % n];
        if (distance(a, b) <= merge_tol) throw InvalidDomain("consecutive vertices coincide");
        if (cross(b - a, c - b) < -kDegeneracyTolerance * diam * diam)
            throw InvalidDomain("vertices are not convex counterclockwise");
    }
    if (polygon_area(poly) <= 0.0) throw InvalidDomain("nonpositive signed area");
}

namespace detail {

// Drops consecutive vertices closer than merge_tol (including last-first).
inline void merge_close_vertices(std::vector<Point2>& v, double merge_tol) {
    if (v.size() < 2) return;
    std::vector<Point2> out;
    out.reserve(v.size());
    for (const Point2& p : v) {
        if (out.empty() || distance(out.back(), p) > merge_tol) out.push_back(p);
    }
    while (out.size() >= 2 && distance(out.front(), out.back()) <= merge_tol) out.pop_back();
    v = std::move(out);
}

}  // namespace detail

// poly cut by {x : h.normal . x <= h.offset}. Returns nullopt when the
// intersection has zero area. merge_tol <= 0 selects the default
// kDegeneracyTolerance * diam(poly).
inline std::optional<ConvexPolygon> clip_halfplane(const ConvexPolygon& poly, const HalfPlane& h,
                                                   double merge_tol = -1.0) {
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    if (merge_tol < 0.0) merge_tol = kDegeneracyTolerance * polygon_diameter(poly);

    std::vector<Point2> out;
    out.reserve(n + 1);
    double side_prev = dot(h.normal, v[0]) - h.offset;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = v[i];
        const Point2 b = v[(i + 1) % n];
        const double side_a = side_prev;
        const double side_b = dot(h.normal, b) - h.offset;
        side_prev = side_b;
        if (side_a <= 0.0) out.push_back(a);
        if ((side_a < 0.0 && side_b > 0.0) || (side_a > 0.0 && side_b < 0.0)) {
            const double t = side_a / (side_a - side_b);
            out.push_back(a + t * (b - a));
        }
    }
    detail::merge_close_vertices(out, merge_tol);
    if (out.size() < 3) return std::nullopt;
    ConvexPolygon clipped{std::move(out)};
    if (polygon_area(clipped) <= merge_tol * merge_tol) return std::nullopt;
    return clipped;
}

// A site with a scalar weight (squared-length units); the coordinates the
// solvers optimise.
struct WeightedGenerator {
    Point2 site;
    double weight = 0.0;
};

// |x - site|^2 - weight
inline double power_distance(Point2 x, const WeightedGenerator& g) {
    return norm2(x - g.site) - g.weight;
}

struct PowerCell {
    std::size_t generator = 0;
    std::optional<ConvexPolygon> polygon;  // nullopt = empty cell

    bool empty() const { return !polygon.has_value(); }
};

struct PowerDiagram {
    std::vector<PowerCell> cells;
    ConvexPolygon domain;

    std::size_t live_cells() const {
        std::size_t n = 0;
        for (const auto& c : cells)
            if (!c.empty()) ++n;
        return n;
    }
};

// Index of the generator with minimal power distance to x; ties go to the
// lower index.
inline std::size_t power_nearest(std::span<const WeightedGenerator> gens, Point2 x) {
    std::size_t best = 0;
    double best_d = power_distance(x, gens[0]);
    for (std::size_t i = 1; i < gens.size(); ++i) {
        const double d = power_distance(x, gens[i]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

// Power diagram of the generators over a convex domain, cell by cell via
// half-plane intersection. O(M^2) overall; exact half-plane constraints
//   2 (x_j - x_i) . x <= |x_j|^2 - |x_i|^2 + w_i - w_j.
inline PowerDiagram power_diagram(std::span<const WeightedGenerator> gens,
                                  const ConvexPolygon& domain) {
    if (gens.empty()) throw InvalidDomain("no generators");
    validate_domain(domain);
    const double diam = polygon_diameter(domain);
    const double merge_tol = kDegeneracyTolerance * diam;
    const double site_tol2 = merge_tol * merge_tol;
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j)
            if (norm2(gens[i].site - gens[j].site) <= site_tol2) throw DuplicateSites(i, j);

    PowerDiagram diagram;
    diagram.domain = domain;
    diagram.cells.resize(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) {
        diagram.cells[i].generator = i;
        std::optional<ConvexPolygon> cell = domain;
        const Point2 xi = gens[i].site;
        const double ni2 = norm2(xi);
        for (std::size_t j = 0; j < gens.size() && cell; ++j) {
            if (j == i) continue;
            const Point2 xj = gens[j].site;
            HalfPlane h{2.0 * (xj - xi), norm2(xj) - ni2 + gens[i].weight - gens[j].weight};
            cell = clip_halfplane(*cell, h, merge_tol);
        }
        diagram.cells[i].polygon = std::move(cell);
    }
    return diagram;
}

// Number of sides after treating turns below angular_tol (radians) as
// collinear; clipping can leave spurious vertices on straight edges.
inline int count_sides(const ConvexPolygon& poly, double angular_tol = 1e-6) {
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    int corners = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 e0 = v[i] - v[(i + n - 1) % n];
        const Point2 e1 = v[(i + 1) % n] - v[i];
        const double turn = std::atan2(cross(e0, e1), dot(e0, e1));
        if (std::abs(turn) > angular_tol) ++corners;
    }
    return corners;
}

// True when some vertex of the cell lies on the domain boundary.
inline bool touches_boundary(const ConvexPolygon& cell, const ConvexPolygon& domain,
                             double tol = -1.0) {
    if (tol < 0.0) tol = 1e-9 * polygon_diameter(domain);
    const auto& dv = domain.vertices;
    for (const Point2& p : cell.vertices) {
        for (std::size_t i = 0, n = dv.size(); i < n; ++i) {
            const Point2 a = dv[i];
            const Point2 b = dv[(i + 1) % n];
            const Point2 e = b - a;
            const double len2 = norm2(e);
            const double t = std::clamp(dot(p - a, e) / len2, 0.0, 1.0);
            if (distance(p, a + t * e) <= tol) return true;
        }
    }
    return false;
}

inline ConvexPolygon unit_square() {
    return ConvexPolygon{{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}};
}

inline ConvexPolygon make_rectangle(double x0, double y0, double x1, double y1) {
    return ConvexPolygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

// Regular hexagon of the given area centred at c, built by inverting
// area = (3 sqrt(3) / 2) R^2 for the circumradius R.
inline ConvexPolygon regular_hexagon(Point2 c, double area) {
    const double r = std::sqrt(2.0 * area / (3.0 * std::sqrt(3.0)));
    ConvexPolygon hex;
    hex.vertices.reserve(6);
    for (int k = 0; k < 6; ++k) {
        const double phi = k * std::numbers::pi / 3.0;
        hex.vertices.push_back({c.x + r * std::cos(phi), c.y + r * std::sin(phi)});
    }
    return hex;
}

inline ConvexPolygon translated(const ConvexPolygon& poly, Point2 delta) {
    ConvexPolygon out = poly;
    for (Point2& p : out.vertices) p = p + delta;
    return out;
}

// Scaled about the origin.
inline ConvexPolygon scaled(const ConvexPolygon& poly, double factor) {
    ConvexPolygon out = poly;
    for (Point2& p : out.vertices) p = factor * p;
    return out;
}

namespace detail {

// Degree-5 symmetric 7-point triangle rule (centroid + two 3-point orbits).
struct TriangleRule7 {
    struct Node {
        double b0, b1, b2, w;
    };
    std::array<Node, 7> nodes;
};

inline const TriangleRule7& triangle_rule7() {
    static const TriangleRule7 rule = [] {
        const double s = std::sqrt(15.0);
        const double b_a = (6.0 - s) / 21.0, w_a = (155.0 - s) / 1200.0;
        const double b_b = (6.0 + s) / 21.0, w_b = (155.0 + s) / 1200.0;
        TriangleRule7 r;
        r.nodes[0] = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 9.0 / 40.0};
        r.nodes[1] = {1.0 - 2.0 * b_a, b_a, b_a, w_a};
        r.nodes[2] = {b_a, 1.0 - 2.0 * b_a, b_a, w_a};
        r.nodes[3] = {b_a, b_a, 1.0 - 2.0 * b_a, w_a};
        r.nodes[4] = {1.0 - 2.0 * b_b, b_b, b_b, w_b};
        r.nodes[5] = {b_b, 1.0 - 2.0 * b_b, b_b, w_b};
        r.nodes[6] = {b_b, b_b, 1.0 - 2.0 * b_b, w_b};
        return r;
    }();
    return rule;
}

// Signed quadrature of f over triangle (p0,p1,p2); one uniform refinement
// splits into four congruent subtriangles.
template <typename F>
void triangle_quadrature7(Point2 p0, Point2 p1, Point2 p2, bool refine, F&& accumulate) {
    if (refine) {
        const Point2 m01 = 0.5 * (p0 + p1), m12 = 0.5 * (p1 + p2), m20 = 0.5 * (p2 + p0);
        triangle_quadrature7(p0, m01, m20, false, accumulate);
        triangle_quadrature7(m01, p1, m12, false, accumulate);
        triangle_quadrature7(m20, m12, p2, false, accumulate);
        triangle_quadrature7(m01, m12, m20, false, accumulate);
        return;
    }
    const double area = 0.5 * cross(p1 - p0, p2 - p0);
    for (const auto& nd : triangle_rule7().nodes) {
        const Point2 x = nd.b0 * p0 + nd.b1 * p1 + nd.b2 * p2;
        accumulate(x, nd.w * area);
    }
}

}  // namespace detail

// Numerical integral of |x - a|^p over the polygon by a fixed-order
// symmetric triangle rule on a fan rooted at a (signed triangles, so a need
// not lie inside). Exact to roundoff for even integer p <= 4; refined once
// when p < 2 to resolve the reduced smoothness at a.
inline double p_moment_quadrature(const ConvexPolygon& poly, Point2 a, double p) {
    if (p < 1.0) throw ConfigError("p must be >= 1");
    const auto& v = poly.vertices;
    const bool refine = p < 2.0;
    double acc = 0.0;
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        detail::triangle_quadrature7(a, v[i], v[(i + 1) % n], refine, [&](Point2 x, double w) {
            acc += w * std::pow(norm2(x - a), 0.5 * p);
        });
    }
    return acc;
}

}  // namespace cpd
