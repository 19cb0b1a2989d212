#pragma once

// Shared test fixtures: seeded random geometry and brute-force quadrature
// oracles that stay independent of the library's evaluation paths.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "cpd/geometry.hpp"
#include "cpd/rng.hpp"

namespace cpd::testing {

// Vertices on a circle at sorted random angles: always strictly convex and
// counterclockwise.
inline ConvexPolygon random_convex_polygon(Rng& rng, std::size_t min_vertices = 3,
                                           std::size_t max_vertices = 8) {
    const std::size_t n =
        min_vertices + static_cast<std::size_t>(rng.uniform() * static_cast<double>(
                                                                    max_vertices - min_vertices + 1));
    const Point2 center{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    const double radius = rng.uniform(0.5, 2.0);
    std::vector<double> angles;
    while (true) {
        angles.clear();
        for (std::size_t i = 0; i < n; ++i) angles.push_back(rng.uniform(0.0, 2.0 * std::numbers::pi));
        std::sort(angles.begin(), angles.end());
        bool ok = true;
        for (std::size_t i = 0; i < n; ++i) {
            const double gap = (i + 1 < n ? angles[i + 1] : angles[0] + 2.0 * std::numbers::pi) -
                               angles[i];
            if (gap < 0.05) ok = false;
        }
        if (ok) break;
    }
    ConvexPolygon poly;
    for (const double a : angles)
        poly.vertices.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
    return poly;
}

inline std::vector<WeightedGenerator> random_generators(Rng& rng, const ConvexPolygon& domain,
                                                        std::size_t count, double weight_span = 0.0) {
    const BoundingBox box = bounding_box(domain);
    const double tol = 1e-9 * polygon_diameter(domain);
    std::vector<WeightedGenerator> gens;
    while (gens.size() < count) {
        const Point2 p{rng.uniform(box.x0, box.x1), rng.uniform(box.y0, box.y1)};
        if (!polygon_contains_strictly(domain, p, tol)) continue;
        bool separated = true;
        for (const auto& g : gens)
            if (distance(g.site, p) < 1e-3) separated = false;
        if (!separated) continue;
        gens.push_back({p, weight_span == 0.0 ? 0.0 : rng.uniform(-weight_span, weight_span)});
    }
    return gens;
}

// Midpoint-rule integral of f over the polygon via its bounding box.
template <typename F>
double grid_integral(const ConvexPolygon& poly, F&& f, std::size_t cells_per_axis) {
    const BoundingBox box = bounding_box(poly);
    const double hx = (box.x1 - box.x0) / static_cast<double>(cells_per_axis);
    const double hy = (box.y1 - box.y0) / static_cast<double>(cells_per_axis);
    double acc = 0.0;
    for (std::size_t j = 0; j < cells_per_axis; ++j) {
        for (std::size_t i = 0; i < cells_per_axis; ++i) {
            const Point2 x{box.x0 + (static_cast<double>(i) + 0.5) * hx,
                           box.y0 + (static_cast<double>(j) + 0.5) * hy};
            if (polygon_contains(poly, x)) acc += f(x);
        }
    }
    return acc * hx * hy;
}

}  // namespace cpd::testing
