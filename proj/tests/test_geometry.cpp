#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cpd/geometry.hpp"
#include "cpd/rng.hpp"
#include "support/helpers.hpp"

using namespace cpd;
using Catch::Approx;

TEST_CASE("clip_halfplane against the unit square") {
    const ConvexPolygon square = unit_square();

    SECTION("containing half-plane leaves it unchanged") {
        const auto clipped = clip_halfplane(square, {{1.0, 0.0}, 2.0});
        REQUIRE(clipped.has_value());
        REQUIRE(polygon_area(*clipped) == Approx(1.0).margin(1e-15));
        REQUIRE(clipped->vertices.size() == 4);
    }
    SECTION("x <= 0.5 keeps the left half") {
        const auto clipped = clip_halfplane(square, {{1.0, 0.0}, 0.5});
        REQUIRE(clipped.has_value());
        REQUIRE(polygon_area(*clipped) == Approx(0.5).margin(1e-15));
        for (const Point2& v : clipped->vertices) REQUIRE(v.x <= 0.5 + 1e-15);
    }
    SECTION("disjoint half-plane gives Empty") {
        REQUIRE_FALSE(clip_halfplane(square, {{1.0, 0.0}, -1.0}).has_value());
    }
    SECTION("tangent half-plane through an edge gives Empty") {
        REQUIRE_FALSE(clip_halfplane(square, {{1.0, 0.0}, 0.0}).has_value());
    }
}

TEST_CASE("polygon area and centroid") {
    REQUIRE(polygon_area(unit_square()) == 1.0);
    const ConvexPolygon tri{{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}};
    REQUIRE(polygon_area(tri) == Approx(0.5).margin(1e-15));
    REQUIRE(polygon_centroid(unit_square()).x == Approx(0.5).margin(1e-15));
    REQUIRE(polygon_centroid(unit_square()).y == Approx(0.5).margin(1e-15));
    REQUIRE(polygon_centroid(tri).x == Approx(1.0 / 3.0).margin(1e-15));
    REQUIRE(polygon_centroid(tri).y == Approx(1.0 / 3.0).margin(1e-15));
    const ConvexPolygon rect = make_rectangle(0.0, 0.0, 0.5, 1.0);
    REQUIRE(polygon_centroid(rect).x == Approx(0.25).margin(1e-15));
    REQUIRE(polygon_centroid(rect).y == Approx(0.5).margin(1e-15));

    const ConvexPolygon hex = regular_hexagon({0.3, -0.2}, 1.0);
    REQUIRE(polygon_area(hex) == Approx(1.0).margin(1e-12));
}

TEST_CASE("polygon_second_moment closed forms") {
    REQUIRE(polygon_second_moment(unit_square(), {0.5, 0.5}) == Approx(1.0 / 6.0).margin(1e-15));
    const ConvexPolygon tri{{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}};
    REQUIRE(polygon_second_moment(tri, {0.0, 0.0}) == Approx(1.0 / 6.0).margin(1e-15));

    // Second moment of the unit-area regular hexagon about its centre:
    // 5 sqrt(3) / 54.
    const double c6 = 5.0 * std::sqrt(3.0) / 54.0;
    const ConvexPolygon hex = regular_hexagon({0.0, 0.0}, 1.0);
    REQUIRE(polygon_second_moment(hex, {0.0, 0.0}) == Approx(c6).margin(1e-12));

    // Off-centre hexagon, same moment about its own centre.
    const ConvexPolygon hex2 = regular_hexagon({1.7, -2.3}, 1.0);
    REQUIRE(polygon_second_moment(hex2, {1.7, -2.3}) == Approx(c6).margin(1e-12));
}

TEST_CASE("second moment agrees with a fan triangulation (additivity)") {
    Rng rng(2024);
    for (int rep = 0; rep < 20; ++rep) {
        const ConvexPolygon poly = testing::random_convex_polygon(rng, 4, 9);
        const Point2 a{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        double fan = 0.0;
        for (std::size_t i = 1; i + 1 < poly.vertices.size(); ++i)
            fan += triangle_second_moment(poly.vertices[0], poly.vertices[i],
                                          poly.vertices[i + 1], a);
        const double direct = polygon_second_moment(poly, a);
        REQUIRE(direct == Approx(fan).epsilon(1e-12));
    }
}

TEST_CASE("p_moment_quadrature") {
    const ConvexPolygon square = unit_square();
    const Point2 center{0.5, 0.5};

    SECTION("p = 2 agrees with the closed form") {
        REQUIRE(p_moment_quadrature(square, center, 2.0) ==
                Approx(polygon_second_moment(square, center)).margin(1e-10));
        Rng rng(7);
        for (int rep = 0; rep < 10; ++rep) {
            const ConvexPolygon poly = testing::random_convex_polygon(rng);
            const Point2 a{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
            REQUIRE(p_moment_quadrature(poly, a, 2.0) ==
                    Approx(polygon_second_moment(poly, a)).epsilon(1e-12));
        }
    }
    SECTION("p = 4: int (x^2+y^2)^2 over the centred unit square is 7/180") {
        const double quad = p_moment_quadrature(square, center, 4.0);
        REQUIRE(quad == Approx(7.0 / 180.0).margin(1e-13));
        // brute-force midpoint grid, 2000 x 2000
        const double brute = cpd::testing::grid_integral(
            square, [&](Point2 x) { return norm2(x - center) * norm2(x - center); }, 2000);
        REQUIRE(quad == Approx(brute).margin(1e-6));
    }
    SECTION("p = 1.5 converges to the brute-force value") {
        const double quad = p_moment_quadrature(square, center, 1.5);
        const double brute = cpd::testing::grid_integral(
            square, [&](Point2 x) { return std::pow(norm2(x - center), 0.75); }, 2000);
        REQUIRE(quad == Approx(brute).margin(1e-5));
    }
}

TEST_CASE("power_diagram basics") {
    const ConvexPolygon square = unit_square();

    SECTION("single generator owns the whole domain") {
        const std::vector<WeightedGenerator> gens{{{0.3, 0.7}, 0.0}};
        const PowerDiagram d = power_diagram(gens, square);
        REQUIRE(d.cells.size() == 1);
        REQUIRE_FALSE(d.cells[0].empty());
        REQUIRE(polygon_area(*d.cells[0].polygon) == Approx(1.0).margin(1e-12));
    }
    SECTION("equal weights: bisector at x = 0.5") {
        const std::vector<WeightedGenerator> gens{{{0.25, 0.5}, 0.0}, {{0.75, 0.5}, 0.0}};
        const PowerDiagram d = power_diagram(gens, square);
        for (const Point2& v : d.cells[0].polygon->vertices) REQUIRE(v.x <= 0.5 + 1e-12);
        REQUIRE(polygon_area(*d.cells[0].polygon) == Approx(0.5).margin(1e-12));
        REQUIRE(polygon_area(*d.cells[1].polygon) == Approx(0.5).margin(1e-12));
    }
    SECTION("weights (0.1, 0): bisector moves to x = 0.6") {
        const std::vector<WeightedGenerator> gens{{{0.25, 0.5}, 0.1}, {{0.75, 0.5}, 0.0}};
        const PowerDiagram d = power_diagram(gens, square);
        REQUIRE(polygon_area(*d.cells[0].polygon) == Approx(0.6).margin(1e-12));
        double max_x = 0.0;
        for (const Point2& v : d.cells[0].polygon->vertices) max_x = std::max(max_x, v.x);
        REQUIRE(max_x == Approx(0.6).margin(1e-12));
    }
    SECTION("duplicate sites are rejected") {
        const std::vector<WeightedGenerator> gens{{{0.5, 0.5}, 0.0}, {{0.5, 0.5}, 0.1}};
        REQUIRE_THROWS_AS(power_diagram(gens, square), DuplicateSites);
    }
    SECTION("invalid domains are rejected") {
        const ConvexPolygon bowtie{{{0.0, 0.0}, {1.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}}};
        const std::vector<WeightedGenerator> gens{{{0.5, 0.5}, 0.0}};
        REQUIRE_THROWS_AS(power_diagram(gens, bowtie), InvalidDomain);
        const ConvexPolygon clockwise{{{0.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {1.0, 0.0}}};
        REQUIRE_THROWS_AS(power_diagram(gens, clockwise), InvalidDomain);
    }
}

TEST_CASE("power diagram partition and membership properties") {
    Rng rng(90210);
    for (int rep = 0; rep < 12; ++rep) {
        const ConvexPolygon domain = testing::random_convex_polygon(rng, 4, 8);
        const std::size_t m = 2 + static_cast<std::size_t>(rng.uniform() * 49.0);
        const auto gens = testing::random_generators(rng, domain, m, 0.02);
        const PowerDiagram d = power_diagram(gens, domain);
        const double area = polygon_area(domain);

        double covered = 0.0;
        for (const PowerCell& cell : d.cells)
            if (!cell.empty()) covered += polygon_area(*cell.polygon);
        REQUIRE(covered == Approx(area).margin(1e-9 * area));

        // membership: the power-minimising generator owns the sample point
        const double tie_tol = 1e-9;
        const double inside_tol = 1e-9 * polygon_diameter(domain);
        const BoundingBox box = bounding_box(domain);
        int checked = 0;
        for (int s = 0; s < 1000; ++s) {
            const Point2 x{rng.uniform(box.x0, box.x1), rng.uniform(box.y0, box.y1)};
            if (!polygon_contains_strictly(domain, x, inside_tol)) continue;
            const std::size_t k = power_nearest(gens, x);
            double second_best = std::numeric_limits<double>::max();
            for (std::size_t i = 0; i < gens.size(); ++i)
                if (i != k) second_best = std::min(second_best, power_distance(x, gens[i]));
            if (second_best - power_distance(x, gens[k]) < tie_tol) continue;  // tie: skip
            REQUIRE_FALSE(d.cells[k].empty());
            REQUIRE(polygon_contains(*d.cells[k].polygon, x, inside_tol));
            ++checked;
        }
        REQUIRE(checked > 100);
    }
}

TEST_CASE("adding a constant to all weights leaves the diagram unchanged") {
    Rng rng(5150);
    const ConvexPolygon domain = testing::random_convex_polygon(rng, 5, 8);
    auto gens = testing::random_generators(rng, domain, 12, 0.05);
    const PowerDiagram before = power_diagram(gens, domain);
    for (auto& g : gens) g.weight += 3.7;
    const PowerDiagram after = power_diagram(gens, domain);
    const double tol = 1e-12 * polygon_diameter(domain);
    for (std::size_t i = 0; i < before.cells.size(); ++i) {
        REQUIRE(before.cells[i].empty() == after.cells[i].empty());
        if (before.cells[i].empty()) continue;
        const auto& va = before.cells[i].polygon->vertices;
        const auto& vb = after.cells[i].polygon->vertices;
        REQUIRE(va.size() == vb.size());
        for (std::size_t k = 0; k < va.size(); ++k) REQUIRE(distance(va[k], vb[k]) <= tol);
    }
}

TEST_CASE("translation equivariance of the diagram") {
    Rng rng(31337);
    const ConvexPolygon domain = testing::random_convex_polygon(rng, 4, 7);
    auto gens = testing::random_generators(rng, domain, 9, 0.03);
    const Point2 delta{12.5, -3.25};
    const PowerDiagram base = power_diagram(gens, domain);
    auto moved = gens;
    for (auto& g : moved) g.site = g.site + delta;
    const PowerDiagram shifted = power_diagram(moved, translated(domain, delta));
    const double tol = 1e-9 * polygon_diameter(domain);
    for (std::size_t i = 0; i < base.cells.size(); ++i) {
        REQUIRE(base.cells[i].empty() == shifted.cells[i].empty());
        if (base.cells[i].empty()) continue;
        const auto& va = base.cells[i].polygon->vertices;
        const auto& vb = shifted.cells[i].polygon->vertices;
        REQUIRE(va.size() == vb.size());
        for (std::size_t k = 0; k < va.size(); ++k)
            REQUIRE(distance(va[k] + delta, vb[k]) <= tol);
    }
}

TEST_CASE("count_sides merges collinear edges") {
    ConvexPolygon square = unit_square();
    REQUIRE(count_sides(square) == 4);
    // insert a redundant vertex on the bottom edge
    square.vertices.insert(square.vertices.begin() + 1, Point2{0.5, 0.0});
    REQUIRE(square.vertices.size() == 5);
    REQUIRE(count_sides(square) == 4);
    REQUIRE(count_sides(regular_hexagon({0, 0}, 1.0)) == 6);
}

TEST_CASE("touches_boundary distinguishes interior cells") {
    const ConvexPolygon square = unit_square();
    REQUIRE(touches_boundary(make_rectangle(0.0, 0.0, 0.5, 0.5), square));
    REQUIRE_FALSE(touches_boundary(make_rectangle(0.25, 0.25, 0.75, 0.75), square));
}
