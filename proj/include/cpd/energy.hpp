#pragma once

// The limit energy in both coordinate systems:
//
//   E({x_i, w_i}) = sum_i { lambda sqrt(|P_i|) + int_{P_i} |x - x_i|^2 dx }
//   F(nu)         = lambda sum_i sqrt(m_i) + W_2(1, nu)
//
// where {P_i} is the power diagram of the weighted generators. The two agree
// because the optimal transport regions of W_2(1, nu) form a power diagram
// whose weights are the Kantorovich potential values at the atoms; the
// diagram weights here follow that sign convention throughout.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cpd/errors.hpp"
#include "cpd/geometry.hpp"

namespace cpd {

// Transport cost of the Lebesgue measure on a unit-area regular hexagon to a
// point mass at its centre.
inline const double kHexagonTransportConstant = 5.0 * std::sqrt(3.0) / 54.0;

// Cells of an optimal hexagonal tiling per unit area, in units of
// lambda^{-2/3}: 5^{2/3} 3^{-5/3}.
inline const double kHexagonalDensityConstant = std::pow(5.0, 2.0 / 3.0) * std::pow(3.0, -5.0 / 3.0);

// nu = sum_i mass_i * delta_{site_i} with sum of masses = |domain|.
struct AtomicMeasure {
    struct Atom {
        Point2 site;
        double mass = 0.0;
    };
    std::vector<Atom> atoms;

    double total_mass() const {
        double m = 0.0;
        for (const Atom& a : atoms) m += a.mass;
        return m;
    }
};

// Masses strictly positive (and above the dual solver's degeneracy floor),
// summing to |domain| within 1e-9 relative; sites pairwise distinct and
// inside the domain.
inline void validate_measure(const AtomicMeasure& nu, const ConvexPolygon& domain) {
    if (nu.atoms.empty()) throw InvalidMeasure("no atoms");
    const double area = polygon_area(domain);
    const double diam = polygon_diameter(domain);
    for (std::size_t i = 0; i < nu.atoms.size(); ++i) {
        const auto& a = nu.atoms[i];
        if (!(a.mass > 0.0)) throw InvalidMeasure("atom " + std::to_string(i) + " has nonpositive mass");
        if (a.mass < 1e-12 * area)
            throw InvalidMeasure("atom " + std::to_string(i) + " has near-zero mass (dual degenerates)");
        if (!polygon_contains(domain, a.site, kDegeneracyTolerance * diam))
            throw InvalidMeasure("atom " + std::to_string(i) + " lies outside the domain");
        for (std::size_t j = i + 1; j < nu.atoms.size(); ++j)
            if (norm2(a.site - nu.atoms[j].site) <=
                kDegeneracyTolerance * diam * kDegeneracyTolerance * diam)
                throw InvalidMeasure("atoms " + std::to_string(i) + " and " + std::to_string(j) +
                                     " coincide");
    }
    const double total = nu.total_mass();
    if (std::abs(total - area) > 1e-9 * area)
        throw InvalidMeasure("masses sum to " + std::to_string(total) + ", domain area is " +
                             std::to_string(area));
}

struct EnergyBreakdown {
    double lambda = 0.0;
    double perimeter_term = 0.0;  // lambda sum_i sqrt(m_i)
    double transport_term = 0.0;  // W_2 cost
    double total = 0.0;
};

// Energy of a weighted-generator configuration, evaluated to machine
// precision from the power diagram. Empty cells contribute zero.
inline EnergyBreakdown energy_weighted(std::span<const WeightedGenerator> gens,
                                       const ConvexPolygon& domain, double lambda) {
    if (lambda < 0.0) throw ConfigError("lambda must be >= 0");
    const PowerDiagram diagram = power_diagram(gens, domain);
    EnergyBreakdown e;
    e.lambda = lambda;
    for (const PowerCell& cell : diagram.cells) {
        if (cell.empty()) continue;
        e.perimeter_term += lambda * std::sqrt(polygon_area(*cell.polygon));
        e.transport_term += polygon_second_moment(*cell.polygon, gens[cell.generator].site);
    }
    e.total = e.perimeter_term + e.transport_term;
    return e;
}

// Same split, reusing an already-built diagram.
inline EnergyBreakdown energy_from_diagram(const PowerDiagram& diagram,
                                           std::span<const WeightedGenerator> gens, double lambda) {
    EnergyBreakdown e;
    e.lambda = lambda;
    for (const PowerCell& cell : diagram.cells) {
        if (cell.empty()) continue;
        e.perimeter_term += lambda * std::sqrt(polygon_area(*cell.polygon));
        e.transport_term += polygon_second_moment(*cell.polygon, gens[cell.generator].site);
    }
    e.total = e.perimeter_term + e.transport_term;
    return e;
}

// Kantorovich dual variables a_i, one per atom, gauge-fixed to a_1 = 0. The
// induced power-cell areas match the atom masses within the solver tolerance.
struct KantorovichWeights {
    std::vector<double> weights;
    std::size_t iterations = 0;
    double mass_residual = 0.0;
    std::vector<double> dual_values;  // accepted dual objective per iteration
};

struct WeightSolverOptions {
    double mass_tolerance_factor = 1e-7;  // times domain area
    std::size_t max_iterations = 10000;
};

namespace detail {

struct DualEvaluation {
    double objective = 0.0;
    std::vector<double> areas;
    PowerDiagram diagram;
};

// f(a) = sum_i int_{P_i(a)} (|x-x_i|^2 - a_i) dx + sum_i m_i a_i; the inf
// over partitions is attained at the power diagram with weights a, so f is
// concave with exact gradient m_i - |P_i(a)|.
inline DualEvaluation evaluate_dual(const AtomicMeasure& nu, const ConvexPolygon& domain,
                                    std::span<const double> a) {
    std::vector<WeightedGenerator> gens(nu.atoms.size());
    for (std::size_t i = 0; i < gens.size(); ++i) gens[i] = {nu.atoms[i].site, a[i]};
    DualEvaluation ev;
    ev.diagram = power_diagram(gens, domain);
    ev.areas.assign(gens.size(), 0.0);
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const PowerCell& cell = ev.diagram.cells[i];
        if (cell.empty()) continue;
        ev.areas[i] = polygon_area(*cell.polygon);
        ev.objective += polygon_second_moment(*cell.polygon, nu.atoms[i].site);
    }
    for (std::size_t i = 0; i < gens.size(); ++i)
        ev.objective += a[i] * (nu.atoms[i].mass - ev.areas[i]);
    return ev;
}

}  // namespace detail

// Maximises the concave Kantorovich dual by damped gradient ascent with
// backtracking; the gradient m_i - |P_i(a)| is exact from the diagram.
// Throws NoConvergence when the mass residual stalls above tolerance.
inline KantorovichWeights solve_weights(const AtomicMeasure& nu, const ConvexPolygon& domain,
                                        const WeightSolverOptions& opt = {}) {
    validate_measure(nu, domain);
    const std::size_t m = nu.atoms.size();
    const double area = polygon_area(domain);
    const double tol = opt.mass_tolerance_factor * area;

    KantorovichWeights result;
    result.weights.assign(m, 0.0);
    if (m == 1) {
        result.mass_residual = std::abs(nu.atoms[0].mass - area);
        result.dual_values = {detail::evaluate_dual(nu, domain, result.weights).objective};
        return result;
    }

    std::vector<double> a(m, 0.0);
    detail::DualEvaluation ev = detail::evaluate_dual(nu, domain, a);
    double step = 1.0;
    std::vector<double> grad(m), trial(m);
    for (std::size_t iter = 0; iter < opt.max_iterations; ++iter) {
        double residual = 0.0;
        double grad_norm2 = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            grad[i] = nu.atoms[i].mass - ev.areas[i];
            residual = std::max(residual, std::abs(grad[i]));
            grad_norm2 += grad[i] * grad[i];
        }
        result.dual_values.push_back(ev.objective);
        if (residual <= tol) {
            result.weights = a;
            result.iterations = iter;
            result.mass_residual = residual;
            return result;
        }

        // Armijo backtracking on the concave dual.
        bool accepted = false;
        for (int cut = 0; cut < 60; ++cut) {
            for (std::size_t i = 0; i < m; ++i) trial[i] = a[i] + step * grad[i];
            const double gauge = trial[0];
            for (double& t : trial) t -= gauge;
            detail::DualEvaluation ev_trial = detail::evaluate_dual(nu, domain, trial);
            if (ev_trial.objective >= ev.objective + 1e-4 * step * grad_norm2) {
                a = trial;
                ev = std::move(ev_trial);
                accepted = true;
                if (cut == 0) step = std::min(step * 2.0, 1e6);
                break;
            }
            step *= 0.5;
        }
        if (!accepted) throw NoConvergence(iter, residual);
    }
    double residual = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        residual = std::max(residual, std::abs(nu.atoms[i].mass - ev.areas[i]));
    throw NoConvergence(opt.max_iterations, residual);
}

// F(nu) = lambda sum_i sqrt(m_i) + W_2(1, nu), with the transport term
// evaluated on the optimal partition found by solve_weights.
inline EnergyBreakdown energy_measure(const AtomicMeasure& nu, const ConvexPolygon& domain,
                                      double lambda) {
    if (lambda < 0.0) throw ConfigError("lambda must be >= 0");
    const KantorovichWeights kw = solve_weights(nu, domain);
    std::vector<WeightedGenerator> gens(nu.atoms.size());
    for (std::size_t i = 0; i < gens.size(); ++i) gens[i] = {nu.atoms[i].site, kw.weights[i]};
    const PowerDiagram diagram = power_diagram(gens, domain);
    EnergyBreakdown e;
    e.lambda = lambda;
    for (std::size_t i = 0; i < nu.atoms.size(); ++i) {
        e.perimeter_term += lambda * std::sqrt(nu.atoms[i].mass);
        if (!diagram.cells[i].empty())
            e.transport_term += polygon_second_moment(*diagram.cells[i].polygon, nu.atoms[i].site);
    }
    e.total = e.perimeter_term + e.transport_term;
    return e;
}

// Reference data for the asymptotically optimal honeycomb: for a regular
// hexagon of diameter D the area is 3 sqrt(3) D^2 / 8, the transport cost is
// 5 sqrt(3) D^4 / 128, and the energy per cell is
//   e_D = lambda 3^{3/4} 2^{-3/2} D + 3^{1/2} 2^{-7} 5 D^4;
// minimising e_D / A_D gives the optimal diameter and the packing density.
struct HexagonalReference {
    double lambda = 0.0;
    double d_opt = 0.0;         // optimal hexagon diameter
    double cell_area = 0.0;     // area at the optimal diameter
    double cell_energy = 0.0;   // energy of one optimal cell
    double total_energy = 0.0;  // energy of |domain| / cell_area such cells
    double c6 = 0.0;
};

inline HexagonalReference hexagonal_reference(double lambda, double domain_area) {
    if (!(lambda > 0.0)) throw ConfigError("lambda must be > 0");
    HexagonalReference ref;
    ref.lambda = lambda;
    ref.c6 = kHexagonTransportConstant;
    ref.d_opt = std::pow(3.0, 1.0 / 12.0) * std::pow(2.0, 1.5) * std::pow(5.0, -1.0 / 3.0) *
                std::cbrt(lambda);
    ref.cell_area = 3.0 * std::sqrt(3.0) * ref.d_opt * ref.d_opt / 8.0;
    ref.cell_energy = lambda * std::pow(3.0, 0.75) * std::pow(2.0, -1.5) * ref.d_opt +
                      std::sqrt(3.0) * 5.0 / 128.0 * std::pow(ref.d_opt, 4.0);
    ref.total_energy = 0.5 * std::cbrt(5.0) * std::pow(3.0, 1.0 / 6.0) *
                       std::pow(lambda, 2.0 / 3.0) * domain_area;
    return ref;
}

// Scale-free energy: (E - E_ref) / e_cell. Zero for the ideal honeycomb.
inline double rescaled_energy(const EnergyBreakdown& e, const HexagonalReference& ref) {
    if (e.lambda != ref.lambda) throw ConfigError("energy and reference use different lambda");
    return (e.total - ref.total_energy) / ref.cell_energy;
}

// Blow-up rescaling (2 c6 / lambda)^{1/3} about the origin; the factor under
// which the energy becomes lambda-independent up to a multiplicative
// constant.
inline ConvexPolygon rescale_domain(const ConvexPolygon& domain, double lambda) {
    if (!(lambda > 0.0)) throw ConfigError("lambda must be > 0");
    return scaled(domain, std::cbrt(2.0 * kHexagonTransportConstant / lambda));
}

// Residuals of the two stationarity conditions: site at the cell centroid
// and weight w_i = -lambda/2 |P_i|^{-1/2}.
struct ElResidual {
    double centroid_residual = 0.0;
    double weight_residual = 0.0;
};

inline std::vector<ElResidual> el_residuals_from_diagram(const PowerDiagram& diagram,
                                                         std::span<const WeightedGenerator> gens,
                                                         double lambda) {
    std::vector<ElResidual> res(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const PowerCell& cell = diagram.cells[i];
        if (cell.empty()) throw EmptyCell(i);
        const double area = polygon_area(*cell.polygon);
        res[i].centroid_residual = distance(gens[i].site, polygon_centroid(*cell.polygon));
        res[i].weight_residual = std::abs(gens[i].weight + 0.5 * lambda / std::sqrt(area));
    }
    return res;
}

inline std::vector<ElResidual> el_residuals(std::span<const WeightedGenerator> gens,
                                            const ConvexPolygon& domain, double lambda) {
    return el_residuals_from_diagram(power_diagram(gens, domain), gens, lambda);
}

}  // namespace cpd
