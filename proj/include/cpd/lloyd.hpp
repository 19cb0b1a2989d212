#pragma once

// Generalised Lloyd fixed-point iteration on weighted generators:
//
//   x_i <- centroid(P_i),   w_i <- -lambda/2 |P_i|^{-1/2}
//
// (w_i <- 0 when lambda = 0, which recovers classical Lloyd). Generators
// whose power cell is empty are deleted, so the live cell count adapts.
// The iteration is energy decreasing; a numerical violation is surfaced as
// an error rather than silently accepted.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "cpd/energy.hpp"
#include "cpd/errors.hpp"
#include "cpd/geometry.hpp"

namespace cpd {

struct LloydConfig {
    double lambda = 0.0;
    std::size_t max_iterations = 10000;
    double displacement_tolerance = 1e-10;  // relative to diam(domain)
    double energy_tolerance = 1e-12;        // absolute decrease per step
    bool delete_empty_cells = true;
};

inline void validate_config(const LloydConfig& cfg) {
    if (cfg.lambda < 0.0) throw ConfigError("lambda must be >= 0");
    if (cfg.max_iterations == 0) throw ConfigError("max_iterations must be positive");
    if (!(cfg.displacement_tolerance > 0.0)) throw ConfigError("displacement tolerance must be > 0");
    if (!(cfg.energy_tolerance > 0.0)) throw ConfigError("energy tolerance must be > 0");
}

struct LloydRecord {
    std::size_t iteration = 0;
    EnergyBreakdown energy;
    double max_site_displacement = 0.0;
    double max_weight_change = 0.0;
    std::size_t live_cells = 0;
};

using LloydTrace = std::vector<LloydRecord>;

namespace detail {

// Generators together with their diagram; when pruning is on, every cell is
// nonempty and cells[i] belongs to generators[i].
struct DiagramState {
    std::vector<WeightedGenerator> generators;
    PowerDiagram diagram;
};

inline DiagramState build_state(std::vector<WeightedGenerator> gens, const ConvexPolygon& domain,
                                bool prune_empty) {
    DiagramState st;
    st.diagram = power_diagram(gens, domain);
    if (prune_empty && st.diagram.live_cells() < gens.size()) {
        if (st.diagram.live_cells() == 0) throw AllCellsEmpty();
        std::vector<WeightedGenerator> kept;
        kept.reserve(st.diagram.live_cells());
        for (const PowerCell& cell : st.diagram.cells)
            if (!cell.empty()) kept.push_back(gens[cell.generator]);
        // Removing a generator with an empty cell leaves all other cells
        // unchanged, so rebuilding just reindexes.
        gens = std::move(kept);
        st.diagram = power_diagram(gens, domain);
    }
    st.generators = std::move(gens);
    return st;
}

inline std::vector<WeightedGenerator> update_generators(const DiagramState& st, double lambda) {
    std::vector<WeightedGenerator> next(st.generators.size());
    for (std::size_t i = 0; i < st.generators.size(); ++i) {
        const PowerCell& cell = st.diagram.cells[i];
        if (cell.empty()) {  // only reachable with pruning off
            next[i] = st.generators[i];
            continue;
        }
        next[i].site = polygon_centroid(*cell.polygon);
        next[i].weight = lambda == 0.0 ? 0.0 : -0.5 * lambda / std::sqrt(polygon_area(*cell.polygon));
    }
    return next;
}

}  // namespace detail

struct LloydStepResult {
    std::vector<WeightedGenerator> generators;  // updated sites and weights
    PowerDiagram diagram;                       // diagram the update was computed from
};

// One generalised Lloyd update. The returned diagram belongs to the (pruned)
// input generators; the returned generators are the updated ones, so
// generators[i].weight is exactly -lambda/2 area(diagram.cells[i])^{-1/2}.
inline LloydStepResult lloyd_step(std::span<const WeightedGenerator> gens,
                                  const ConvexPolygon& domain, double lambda,
                                  bool delete_empty_cells = true) {
    detail::DiagramState st = detail::build_state({gens.begin(), gens.end()}, domain,
                                                  delete_empty_cells);
    LloydStepResult out;
    out.generators = detail::update_generators(st, lambda);
    out.diagram = std::move(st.diagram);
    return out;
}

struct LloydResult {
    std::vector<WeightedGenerator> final_generators;
    PowerDiagram final_diagram;
    LloydTrace trace;
    bool converged = false;
    std::vector<ElResidual> residuals;  // empty if some final cell is empty
};

// Iterates lloyd_step until both the maximum site displacement and the
// energy decrease fall below tolerance, or max_iterations. Trace rows hold
// the energy of the state *after* the displacement they record; row 0 is the
// initial state. Throws NumericalRegression if the energy ever increases by
// more than 1e-12.
inline LloydResult run_lloyd(std::span<const WeightedGenerator> init_gens,
                             const ConvexPolygon& domain, const LloydConfig& cfg) {
    validate_config(cfg);
    const double diam = polygon_diameter(domain);
    const double disp_tol = cfg.displacement_tolerance * diam;

    detail::DiagramState st = detail::build_state({init_gens.begin(), init_gens.end()}, domain,
                                                  cfg.delete_empty_cells);
    EnergyBreakdown energy = energy_from_diagram(st.diagram, st.generators, cfg.lambda);

    LloydResult result;
    result.trace.push_back({0, energy, 0.0, 0.0, st.diagram.live_cells()});

    for (std::size_t n = 1; n <= cfg.max_iterations; ++n) {
        std::vector<WeightedGenerator> next = detail::update_generators(st, cfg.lambda);
        double disp = 0.0, wchange = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i) {
            disp = std::max(disp, distance(next[i].site, st.generators[i].site));
            wchange = std::max(wchange, std::abs(next[i].weight - st.generators[i].weight));
        }
        st = detail::build_state(std::move(next), domain, cfg.delete_empty_cells);
        const EnergyBreakdown next_energy = energy_from_diagram(st.diagram, st.generators, cfg.lambda);
        if (next_energy.total > energy.total + 1e-12)
            throw NumericalRegression(n, next_energy.total - energy.total);
        result.trace.push_back({n, next_energy, disp, wchange, st.diagram.live_cells()});
        const double decrease = energy.total - next_energy.total;
        energy = next_energy;
        if (disp < disp_tol && decrease < cfg.energy_tolerance) {
            result.converged = true;
            break;
        }
    }

    if (st.diagram.live_cells() == st.generators.size())
        result.residuals = el_residuals_from_diagram(st.diagram, st.generators, cfg.lambda);
    result.final_generators = std::move(st.generators);
    result.final_diagram = std::move(st.diagram);
    return result;
}

// One lagged p-centroid update over Voronoi cells (equal weights, lambda=0):
//
//   x_i <- int_{V_i} x |x_i - x|^{p-2} dx / int_{V_i} |x_i - x|^{p-2} dx
//
// evaluated by the fixed-order triangle rule on a fan rooted at x_i, whose
// nodes never hit the singular point. Fixed points satisfy the p-centroid
// condition within quadrature error.
inline std::vector<Point2> p_centroid_step(std::span<const Point2> sites,
                                           const ConvexPolygon& domain, double p) {
    if (p < 1.0) throw ConfigError("p must be >= 1");
    std::vector<WeightedGenerator> gens(sites.size());
    for (std::size_t i = 0; i < sites.size(); ++i) gens[i] = {sites[i], 0.0};
    const PowerDiagram voronoi = power_diagram(gens, domain);

    const bool refine = p < 2.0;
    std::vector<Point2> next(sites.size());
    for (std::size_t i = 0; i < sites.size(); ++i) {
        const PowerCell& cell = voronoi.cells[i];
        if (cell.empty()) throw EmptyCell(i);  // cannot happen for sites inside the domain
        const Point2 xi = sites[i];
        Point2 weighted_sum{0.0, 0.0};
        double weight_sum = 0.0;
        const auto& v = cell.polygon->vertices;
        for (std::size_t k = 0, n = v.size(); k < n; ++k) {
            detail::triangle_quadrature7(xi, v[k], v[(k + 1) % n], refine, [&](Point2 x, double w) {
                const double density = std::pow(norm2(x - xi), 0.5 * (p - 2.0));
                weighted_sum = weighted_sum + (w * density) * x;
                weight_sum += w * density;
            });
        }
        if (!std::isfinite(weight_sum) || weight_sum <= 0.0) throw QuadratureSingularity();
        next[i] = weighted_sum / weight_sum;
    }
    return next;
}

}  // namespace cpd
