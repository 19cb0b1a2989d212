#pragma once

// Independent verification machinery: a midpoint-rule discretization of the
// Lebesgue measure, a brute-force discrete optimal-transport solve, the
// closed-form 1-D solution, and closed-form CVT fixtures of the unit square.
// Nothing here reuses the power-diagram evaluation path it is meant to
// check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cpd/energy.hpp"
#include "cpd/errors.hpp"
#include "cpd/geometry.hpp"
#include "cpd/transportation.hpp"

namespace cpd {

// Piecewise-constant discretization of the Lebesgue measure on a domain:
// uniform grid over the bounding box, each cell carrying the exact area of
// its intersection with the domain, represented at the cell centre.
struct GridMeasure {
    std::size_t nx = 0, ny = 0;
    ConvexPolygon support;  // the bounding box
    std::vector<double> cell_masses;  // row-major, index j * nx + i

    static GridMeasure from_domain(const ConvexPolygon& domain, std::size_t nx, std::size_t ny) {
        validate_domain(domain);
        if (nx == 0 || ny == 0) throw ConfigError("grid resolution must be positive");
        const BoundingBox box = bounding_box(domain);
        GridMeasure grid;
        grid.nx = nx;
        grid.ny = ny;
        grid.support = make_rectangle(box.x0, box.y0, box.x1, box.y1);
        grid.cell_masses.assign(nx * ny, 0.0);
        const double hx = (box.x1 - box.x0) / static_cast<double>(nx);
        const double hy = (box.y1 - box.y0) / static_cast<double>(ny);
        for (std::size_t j = 0; j < ny; ++j) {
            for (std::size_t i = 0; i < nx; ++i) {
                const ConvexPolygon cell =
                    make_rectangle(box.x0 + static_cast<double>(i) * hx,
                                   box.y0 + static_cast<double>(j) * hy,
                                   box.x0 + static_cast<double>(i + 1) * hx,
                                   box.y0 + static_cast<double>(j + 1) * hy);
                std::optional<ConvexPolygon> clipped = cell;
                const auto& dv = domain.vertices;
                for (std::size_t e = 0; e < dv.size() && clipped; ++e) {
                    const Point2 a = dv[e];
                    const Point2 b = dv[(e + 1) % dv.size()];
                    const Point2 normal{b.y - a.y, a.x - b.x};  // outward edge normal
                    clipped = clip_halfplane(*clipped, {normal, dot(normal, a)});
                }
                if (clipped) grid.cell_masses[j * nx + i] = polygon_area(*clipped);
            }
        }
        return grid;
    }

    Point2 cell_center(std::size_t i, std::size_t j) const {
        const BoundingBox box = bounding_box(support);
        const double hx = (box.x1 - box.x0) / static_cast<double>(nx);
        const double hy = (box.y1 - box.y0) / static_cast<double>(ny);
        return {box.x0 + (static_cast<double>(i) + 0.5) * hx,
                box.y0 + (static_cast<double>(j) + 0.5) * hy};
    }

    double total_mass() const {
        double m = 0.0;
        for (double c : cell_masses) m += c;
        return m;
    }
};

// gamma as a sparse map: (grid cell index, atom index) -> transported mass.
struct TransportPlan {
    std::map<std::pair<std::size_t, std::size_t>, double> flows;
};

struct DiscreteOtResult {
    double cost = 0.0;
    TransportPlan plan;
    std::vector<double> grid_potentials;  // per grid cell; NaN where the cell has zero mass
    std::vector<double> atom_potentials;
};

// Desk-scale caps; the 128x128 refinement check needs 2^14 grid cells.
inline constexpr std::size_t kMaxGridCells = 16384;
inline constexpr std::size_t kMaxAtoms = 50;

// Exact optimal cost of the finite transportation problem between the grid
// cells (at their centres) and the atoms, with cost |x - y|^p.
inline DiscreteOtResult discrete_ot(const GridMeasure& mu, const AtomicMeasure& nu, double p) {
    if (mu.nx * mu.ny > kMaxGridCells)
        throw InfeasibleScale(std::to_string(mu.nx * mu.ny) + " grid cells (cap " +
                              std::to_string(kMaxGridCells) + ")");
    if (nu.atoms.size() > kMaxAtoms)
        throw InfeasibleScale(std::to_string(nu.atoms.size()) + " atoms (cap " +
                              std::to_string(kMaxAtoms) + ")");
    if (nu.atoms.empty()) throw InvalidMeasure("no atoms");
    const double grid_mass = mu.total_mass();
    const double atom_mass = nu.total_mass();
    if (std::abs(grid_mass - atom_mass) > 1e-10 * std::max(1.0, std::abs(grid_mass)))
        throw MassMismatch(grid_mass, atom_mass);

    std::vector<std::size_t> source_cells;  // grid cells with positive mass
    source_cells.reserve(mu.cell_masses.size());
    for (std::size_t k = 0; k < mu.cell_masses.size(); ++k)
        if (mu.cell_masses[k] > 0.0) source_cells.push_back(k);

    const std::size_t m = source_cells.size();
    const std::size_t n = nu.atoms.size();
    std::vector<double> supply(m), cost(m * n);
    for (std::size_t s = 0; s < m; ++s) {
        const std::size_t k = source_cells[s];
        supply[s] = mu.cell_masses[k];
        const Point2 c = mu.cell_center(k % mu.nx, k / mu.nx);
        for (std::size_t t = 0; t < n; ++t) {
            const double d2 = norm2(c - nu.atoms[t].site);
            cost[s * n + t] = p == 2.0 ? d2 : std::pow(d2, 0.5 * p);
        }
    }
    std::vector<double> demand(n);
    for (std::size_t t = 0; t < n; ++t) demand[t] = nu.atoms[t].mass;

    const TransportationSolution sol = solve_transportation(supply, demand, cost);

    DiscreteOtResult result;
    result.cost = sol.cost;
    result.atom_potentials = sol.sink_potentials;
    result.grid_potentials.assign(mu.cell_masses.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t s = 0; s < m; ++s)
        result.grid_potentials[source_cells[s]] = sol.source_potentials[s];
    for (const auto& arc : sol.arcs)
        result.plan.flows[{source_cells[arc.source], arc.sink}] = arc.amount;
    return result;
}

// Closed-form 1-D solution on [0,1]: stationary points are uniform
// partitions of M cells with energy lambda M + 2^{-p} (p+1)^{-1} M^{-p};
// the optimal real M is (2^p (p+1) lambda / p)^{-1/(p+1)}, rounded to the
// neighbouring integer with lower energy.
struct OneDSolution {
    double lambda = 0.0;
    double p = 2.0;
    std::size_t m_opt = 1;
    double energy = 0.0;
    std::vector<double> sites;
};

inline double one_d_energy(double lambda, double p, std::size_t m) {
    const double md = static_cast<double>(m);
    return lambda * md + std::pow(2.0, -p) / (p + 1.0) * std::pow(md, -p);
}

inline OneDSolution solve_1d(double lambda, double p) {
    if (!(lambda > 0.0)) throw ConfigError("lambda must be > 0");
    if (p < 1.0) throw ConfigError("p must be >= 1");
    const double m_real = std::pow(std::pow(2.0, p) * (p + 1.0) * lambda / p, -1.0 / (p + 1.0));
    const std::size_t lo = static_cast<std::size_t>(std::max(1.0, std::floor(m_real)));
    const std::size_t hi = std::max<std::size_t>(lo, static_cast<std::size_t>(std::ceil(m_real)));
    OneDSolution sol;
    sol.lambda = lambda;
    sol.p = p;
    sol.m_opt = one_d_energy(lambda, p, lo) <= one_d_energy(lambda, p, hi) ? lo : hi;
    sol.energy = one_d_energy(lambda, p, sol.m_opt);
    sol.sites.resize(sol.m_opt);
    for (std::size_t i = 0; i < sol.m_opt; ++i)
        sol.sites[i] = static_cast<double>(2 * i + 1) / static_cast<double>(2 * sol.m_opt);
    return sol;
}

// One classical Lloyd step on [0,1]: cell boundaries at midpoints between
// consecutive sites, each site moved to its cell midpoint. Sites must be
// sorted ascending.
inline std::vector<double> lloyd_1d_step(std::span<const double> sites) {
    const std::size_t m = sites.size();
    std::vector<double> next(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double left = i == 0 ? 0.0 : 0.5 * (sites[i - 1] + sites[i]);
        const double right = i == m - 1 ? 1.0 : 0.5 * (sites[i] + sites[i + 1]);
        next[i] = 0.5 * (left + right);
    }
    return next;
}

// The two classical CVTs of four points in the unit square: the 2x2 grid and
// four vertical strips. Energies follow from the moment of an a x b
// rectangle about its centre, a b (a^2 + b^2) / 12.
struct CvtFixture {
    std::string name;
    std::vector<WeightedGenerator> generators;
    double energy = 0.0;
};

inline double rect_moment_about_center(double a, double b) { return a * b * (a * a + b * b) / 12.0; }

inline std::vector<CvtFixture> cvt_fixtures() {
    std::vector<CvtFixture> fixtures(2);
    fixtures[0].name = "grid2x2";
    fixtures[0].generators = {{{0.25, 0.25}, 0.0},
                              {{0.75, 0.25}, 0.0},
                              {{0.25, 0.75}, 0.0},
                              {{0.75, 0.75}, 0.0}};
    fixtures[0].energy = 4.0 * rect_moment_about_center(0.5, 0.5);
    fixtures[1].name = "strips4";
    fixtures[1].generators = {{{0.125, 0.5}, 0.0},
                              {{0.375, 0.5}, 0.0},
                              {{0.625, 0.5}, 0.0},
                              {{0.875, 0.5}, 0.0}};
    fixtures[1].energy = 4.0 * rect_moment_about_center(0.25, 1.0);
    return fixtures;
}

inline std::map<std::string, double> cvt_fixture_energies() {
    std::map<std::string, double> out;
    for (const CvtFixture& f : cvt_fixtures()) out[f.name] = f.energy;
    return out;
}

}  // namespace cpd
