#pragma once

// SVG rendering of a power diagram with cells filled by side count:
// 6 yellow, 7 pink, 5 red, 4 orange, everything else grey.

#include <cstdio>
#include <ostream>
#include <span>
#include <string>

#include "cpd/geometry.hpp"

namespace cpd {

inline const char* side_count_color(int sides) {
    switch (sides) {
        case 4: return "#f08c00";  // orange
        case 5: return "#e03131";  // red
        case 6: return "#ffd43b";  // yellow
        case 7: return "#f783ac";  // pink
        default: return "#ced4da";
    }
}

inline void write_diagram_svg(std::ostream& out, const PowerDiagram& diagram,
                              std::span<const WeightedGenerator> gens, double pixels = 640.0) {
    const BoundingBox box = bounding_box(diagram.domain);
    const double w = box.x1 - box.x0;
    const double h = box.y1 - box.y0;
    const double scale = pixels / std::max(w, h);
    const double margin = 0.02 * pixels;
    char buf[512];

    // y is flipped so the domain appears in the usual orientation.
    auto px = [&](Point2 p) {
        return Point2{margin + (p.x - box.x0) * scale, margin + (box.y1 - p.y) * scale};
    };

    std::snprintf(buf, sizeof(buf),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.1f\" height=\"%.1f\" "
                  "viewBox=\"0 0 %.1f %.1f\">\n",
                  w * scale + 2 * margin, h * scale + 2 * margin, w * scale + 2 * margin,
                  h * scale + 2 * margin);
    out << buf;

    for (const PowerCell& cell : diagram.cells) {
        if (cell.empty()) continue;
        out << "  <polygon points=\"";
        for (const Point2& v : cell.polygon->vertices) {
            const Point2 q = px(v);
            std::snprintf(buf, sizeof(buf), "%.3f,%.3f ", q.x, q.y);
            out << buf;
        }
        std::snprintf(buf, sizeof(buf), "\" fill=\"%s\" stroke=\"#222\" stroke-width=\"1\"/>\n",
                      side_count_color(count_sides(*cell.polygon)));
        out << buf;
        const Point2 s = px(gens[cell.generator].site);
        std::snprintf(buf, sizeof(buf), "  <circle cx=\"%.3f\" cy=\"%.3f\" r=\"2.5\" fill=\"#000\"/>\n",
                      s.x, s.y);
        out << buf;
    }
    out << "</svg>\n";
}

}  // namespace cpd
