#pragma once

// Multistart global search: seed many random configurations for every
// plausible cell count, relax each with the generalised Lloyd iteration,
// then keep refining the pool while culling states that agree with an
// earlier one in both cell count and (rescaled) energy. No crossover or
// mutation; the method is multistart + culling.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "cpd/energy.hpp"
#include "cpd/errors.hpp"
#include "cpd/geometry.hpp"
#include "cpd/lloyd.hpp"
#include "cpd/parallel.hpp"
#include "cpd/rng.hpp"

namespace cpd {

// Expected cell count of a minimiser: domain_area * 5^{2/3} 3^{-5/3} lambda^{-2/3}.
inline double estimate_cell_count(double lambda, double domain_area) {
    if (!(lambda > 0.0)) throw ConfigError("lambda must be > 0");
    return domain_area * kHexagonalDensityConstant * std::pow(lambda, -2.0 / 3.0);
}

// M sites i.i.d. uniform in the domain (rejection sampling from the bounding
// box), all weights zero. Deterministic per seed.
inline std::vector<WeightedGenerator> random_init(std::size_t m, const ConvexPolygon& domain,
                                                  std::uint64_t seed) {
    if (m == 0) throw ConfigError("need at least one site");
    validate_domain(domain);
    const BoundingBox box = bounding_box(domain);
    const double inside_tol = kDegeneracyTolerance * polygon_diameter(domain);
    Rng rng(seed);
    std::vector<WeightedGenerator> gens;
    gens.reserve(m);
    while (gens.size() < m) {
        const Point2 p{rng.uniform(box.x0, box.x1), rng.uniform(box.y0, box.y1)};
        if (polygon_contains_strictly(domain, p, inside_tol)) gens.push_back({p, 0.0});
    }
    return gens;
}

struct SearchConfig {
    double lambda = 0.0;
    double interval_coefficient = 1.0;     // C: half-width of I in units of lambda^{-2/3}
    std::size_t restarts_per_count = 50;   // N_r
    std::size_t round_iterations = 200;
    std::size_t rounds = 5;
    double energy_dedup_tolerance = 1e-9;  // absolute, on the rescaled energy
    std::uint64_t seed = 0;
    unsigned threads = 0;                  // 0 = hardware concurrency
};

inline void validate_config(const SearchConfig& cfg) {
    if (!(cfg.lambda > 0.0)) throw ConfigError("lambda must be > 0");
    if (!(cfg.interval_coefficient > 0.0)) throw ConfigError("interval coefficient must be > 0");
    if (cfg.restarts_per_count == 0) throw ConfigError("restarts must be positive");
    if (cfg.round_iterations == 0) throw ConfigError("round iterations must be positive");
    if (cfg.rounds == 0) throw ConfigError("rounds must be positive");
    if (!(cfg.energy_dedup_tolerance > 0.0)) throw ConfigError("dedup tolerance must be > 0");
}

struct Candidate {
    std::vector<WeightedGenerator> generators;
    EnergyBreakdown energy;
    double rescaled_energy = 0.0;
    std::size_t cell_count = 0;
    std::size_t m_init = 0;     // provenance: initial cell count ...
    std::uint64_t seed = 0;     // ... and derived seed
};

struct SearchResult {
    std::vector<Candidate> ranked;               // ascending energy
    std::map<int, std::size_t> side_histogram;   // of the best candidate
    const Candidate& best() const { return ranked.front(); }
};

// Side-count histogram of the nonempty cells.
inline std::map<int, std::size_t> side_histogram(const PowerDiagram& diagram,
                                                 double angular_tol = 1e-6) {
    std::map<int, std::size_t> hist;
    for (const PowerCell& cell : diagram.cells)
        if (!cell.empty()) ++hist[count_sides(*cell.polygon, angular_tol)];
    return hist;
}

struct InteriorCellStats {
    std::size_t interior_cells = 0;
    std::size_t interior_hexagons = 0;

    double hexagon_fraction() const {
        return interior_cells == 0 ? 0.0
                                   : static_cast<double>(interior_hexagons) /
                                         static_cast<double>(interior_cells);
    }
};

// Cells not touching the domain boundary, and how many of them are hexagons.
inline InteriorCellStats interior_cell_stats(const PowerDiagram& diagram,
                                             double angular_tol = 1e-6) {
    InteriorCellStats stats;
    for (const PowerCell& cell : diagram.cells) {
        if (cell.empty() || touches_boundary(*cell.polygon, diagram.domain)) continue;
        ++stats.interior_cells;
        if (count_sides(*cell.polygon, angular_tol) == 6) ++stats.interior_hexagons;
    }
    return stats;
}

namespace detail {

inline bool candidate_before(const Candidate& a, const Candidate& b) {
    if (a.energy.total != b.energy.total) return a.energy.total < b.energy.total;
    if (a.cell_count != b.cell_count) return a.cell_count < b.cell_count;
    if (a.m_init != b.m_init) return a.m_init < b.m_init;
    return a.seed < b.seed;
}

// Candidates are sorted ascending; one survives unless an earlier survivor
// has the same cell count and a rescaled energy within tolerance.
inline std::vector<Candidate> dedup_sorted(std::vector<Candidate> pool, double tolerance) {
    std::vector<Candidate> kept;
    std::map<std::size_t, double> last_kept_energy;  // cell count -> rescaled energy
    kept.reserve(pool.size());
    for (Candidate& c : pool) {
        const auto it = last_kept_energy.find(c.cell_count);
        if (it != last_kept_energy.end() && c.rescaled_energy - it->second <= tolerance) continue;
        last_kept_energy[c.cell_count] = c.rescaled_energy;
        kept.push_back(std::move(c));
    }
    return kept;
}

}  // namespace detail

// For each integer M in [M_g - C lambda^{-2/3}, M_g + C lambda^{-2/3}]
// (clipped below at 1), relax restarts_per_count random states for
// round_iterations Lloyd steps; pool, sort, dedup; then keep refining the
// survivors for further rounds until the round-best rescaled energy settles.
inline SearchResult genetic_search(const ConvexPolygon& domain, const SearchConfig& cfg) {
    validate_config(cfg);
    validate_domain(domain);
    const double area = polygon_area(domain);
    const HexagonalReference ref = hexagonal_reference(cfg.lambda, area);
    const double m_expected = estimate_cell_count(cfg.lambda, area);
    const double half_width = cfg.interval_coefficient * std::pow(cfg.lambda, -2.0 / 3.0);
    const double upper = std::floor(m_expected + half_width);
    if (upper < 1.0) throw EmptyInterval();
    const std::size_t m_lo = static_cast<std::size_t>(std::max(1.0, std::ceil(m_expected - half_width)));
    const std::size_t m_hi = static_cast<std::size_t>(upper);
    if (m_lo > m_hi) throw EmptyInterval();

    LloydConfig lloyd_cfg;
    lloyd_cfg.lambda = cfg.lambda;
    lloyd_cfg.max_iterations = cfg.round_iterations;

    const std::size_t counts = m_hi - m_lo + 1;
    std::vector<Candidate> pool(counts * cfg.restarts_per_count);
    parallel_for(
        pool.size(),
        [&](std::size_t job) {
            const std::size_t m = m_lo + job / cfg.restarts_per_count;
            const std::size_t replica = job % cfg.restarts_per_count;
            const std::uint64_t job_seed = derive_seed(cfg.seed, m, replica);
            const auto init = random_init(m, domain, job_seed);
            LloydResult run = run_lloyd(init, domain, lloyd_cfg);
            Candidate& c = pool[job];
            c.energy = run.trace.back().energy;
            c.rescaled_energy = rescaled_energy(c.energy, ref);
            c.cell_count = run.final_generators.size();
            c.generators = std::move(run.final_generators);
            c.m_init = m;
            c.seed = job_seed;
        },
        cfg.threads);

    std::sort(pool.begin(), pool.end(), detail::candidate_before);
    std::vector<Candidate> survivors = detail::dedup_sorted(std::move(pool), cfg.energy_dedup_tolerance);

    double best_energy = survivors.front().rescaled_energy;
    for (std::size_t round = 1; round < cfg.rounds; ++round) {
        parallel_for(
            survivors.size(),
            [&](std::size_t i) {
                Candidate& c = survivors[i];
                LloydResult run = run_lloyd(c.generators, domain, lloyd_cfg);
                c.energy = run.trace.back().energy;
                c.rescaled_energy = rescaled_energy(c.energy, ref);
                c.cell_count = run.final_generators.size();
                c.generators = std::move(run.final_generators);
            },
            cfg.threads);
        std::sort(survivors.begin(), survivors.end(), detail::candidate_before);
        survivors = detail::dedup_sorted(std::move(survivors), cfg.energy_dedup_tolerance);
        const double round_best = survivors.front().rescaled_energy;
        const bool settled = best_energy - round_best < cfg.energy_dedup_tolerance;
        best_energy = round_best;
        if (settled) break;
    }

    SearchResult result;
    result.ranked = std::move(survivors);
    const Candidate& best = result.ranked.front();
    result.side_histogram = side_histogram(power_diagram(best.generators, domain));
    return result;
}

}  // namespace cpd
