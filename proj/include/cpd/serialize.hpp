#pragma once

// JSON and CSV serialization. nlohmann::json keeps keys sorted and prints
// doubles with shortest round-trip formatting, so identical inputs produce
// byte-identical output.

#include <cstddef>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpd/energy.hpp"
#include "cpd/geometry.hpp"
#include "cpd/lloyd.hpp"
#include "cpd/search.hpp"

namespace cpd {

using json = nlohmann::json;

inline void to_json(json& j, const Point2& p) { j = json::array({p.x, p.y}); }
inline void from_json(const json& j, Point2& p) {
    p.x = j.at(0).get<double>();
    p.y = j.at(1).get<double>();
}

inline void to_json(json& j, const ConvexPolygon& poly) { j = json{{"vertices", poly.vertices}}; }
inline void from_json(const json& j, ConvexPolygon& poly) {
    poly.vertices = j.at("vertices").get<std::vector<Point2>>();
}

inline void to_json(json& j, const WeightedGenerator& g) {
    j = json{{"site", g.site}, {"weight", g.weight}};
}
inline void from_json(const json& j, WeightedGenerator& g) {
    j.at("site").get_to(g.site);
    g.weight = j.at("weight").get<double>();
}

inline void to_json(json& j, const PowerDiagram& diagram) {
    json cells = json::array();
    for (const PowerCell& cell : diagram.cells) {
        json c{{"generator", cell.generator}};
        c["vertices"] = cell.empty() ? json::array() : json(cell.polygon->vertices);
        cells.push_back(std::move(c));
    }
    j = json{{"cells", std::move(cells)}};
}

inline void to_json(json& j, const EnergyBreakdown& e) {
    j = json{{"lambda", e.lambda},
             {"perimeter", e.perimeter_term},
             {"transport", e.transport_term},
             {"total", e.total}};
}
inline void from_json(const json& j, EnergyBreakdown& e) {
    e.lambda = j.at("lambda").get<double>();
    e.perimeter_term = j.at("perimeter").get<double>();
    e.transport_term = j.at("transport").get<double>();
    e.total = j.at("total").get<double>();
}

inline void to_json(json& j, const AtomicMeasure& nu) {
    json atoms = json::array();
    for (const auto& a : nu.atoms) atoms.push_back(json{{"site", a.site}, {"mass", a.mass}});
    j = json{{"atoms", std::move(atoms)}};
}

inline void to_json(json& j, const Candidate& c) {
    j = json{{"generators", c.generators},
             {"energy", c.energy},
             {"rescaled_energy", c.rescaled_energy},
             {"cell_count", c.cell_count},
             {"m_init", c.m_init},
             {"seed", c.seed}};
}

// Fixed header: iteration,total,perimeter,transport,max_disp,cells
inline void write_trace_csv(std::ostream& out, const LloydTrace& trace) {
    out << "iteration,total,perimeter,transport,max_disp,cells\n";
    char line[256];
    for (const LloydRecord& r : trace) {
        std::snprintf(line, sizeof(line), "%zu,%.17g,%.17g,%.17g,%.17g,%zu\n", r.iteration,
                      r.energy.total, r.energy.perimeter_term, r.energy.transport_term,
                      r.max_site_displacement, r.live_cells);
        out << line;
    }
}

}  // namespace cpd
