#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "morphocell/error.hpp"
#include "morphocell/io/format.hpp"
#include "morphocell/mesher.hpp"
#include "morphocell/spirals.hpp"

namespace morphocell::io {

struct SvgStyle {
    std::string stroke = "black";
    double stroke_width = 1.0;  // relative to the document's base line width
    std::string fill = "none";
};

using PlanarGeometry = std::variant<Contour, ArcChain, Polyline, std::vector<Square>>;

struct SvgItem {
    PlanarGeometry geometry;
    SvgStyle style;
    std::string id;
};

struct SvgOptions {
    double pixels = 800.0;     // size of the longer side
    double margin = 0.05;      // fraction of the extent added on each side
    double line_width = 0.004; // fraction of the longer extent
};

namespace detail {

struct Extent {
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -std::numeric_limits<double>::infinity();
    double ymin = std::numeric_limits<double>::infinity();
    double ymax = -std::numeric_limits<double>::infinity();

    void add(Vec2 p) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    bool valid() const { return xmin <= xmax && ymin <= ymax; }
};

inline void add_arc(Extent& e, const Arc& arc) {
    e.add(arc.start());
    e.add(arc.end());
    const double lo = std::min(arc.start_angle, arc.end_angle);
    const double hi = std::max(arc.start_angle, arc.end_angle);
    const double quarter = std::numbers::pi / 2;
    for (double a = std::ceil(lo / quarter) * quarter; a <= hi; a += quarter) e.add(arc.point(a));
}

inline bool has_content(const PlanarGeometry& g) {
    return std::visit(
        [](const auto& v) -> bool {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Contour>) return !v.polylines.empty();
            else if constexpr (std::is_same_v<T, ArcChain>) return !v.arcs.empty();
            else if constexpr (std::is_same_v<T, Polyline>) return v.points.size() >= 2;
            else return !v.empty();
        },
        g);
}

// SVG's y axis points down; geometry is mirrored so it appears as in a
// y-up plot.
inline std::string pt(Vec2 p) { return format_fixed(p.x) + " " + format_fixed(-p.y); }

inline void polyline_path(std::string& d, const Polyline& line) {
    for (std::size_t i = 0; i < line.points.size(); ++i) {
        d += i == 0 ? "M " : " L ";
        d += pt(line.points[i]);
    }
    if (line.closed) d += " Z";
}

inline std::string arc_path(const ArcChain& chain) {
    std::string d;
    Vec2 cursor{};
    for (std::size_t i = 0; i < chain.arcs.size(); ++i) {
        const Arc& a = chain.arcs[i];
        const Vec2 s = a.start();
        if (i == 0 || norm(s - cursor) > 1e-9) {
            if (i) d += ' ';
            d += "M " + pt(s);
        }
        const Vec2 e = a.end();
        const double sweep = a.end_angle - a.start_angle;
        // Counterclockwise in y-up coordinates is sweep-flag 0 after mirroring.
        d += " A " + format_fixed(a.radius) + " " + format_fixed(a.radius) + " 0 " +
             (std::fabs(sweep) > std::numbers::pi ? "1" : "0") + " " + (sweep > 0 ? "0" : "1") + " " +
             pt(e);
        cursor = e;
    }
    return d;
}

}  // namespace detail

/// Standalone SVG 1.1 document. Arcs are emitted as native elliptical-arc
/// path commands; each item becomes one <path> (or a <g> of <rect>s for
/// squares) carrying its own stroke colour. Returns the number of bytes written.
inline std::size_t write_svg(const std::vector<SvgItem>& items, std::ostream& sink,
                             const SvgOptions& options = {}) {
    detail::Extent extent;
    bool any = false;
    for (const auto& item : items) {
        if (!detail::has_content(item.geometry)) continue;
        any = true;
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, Contour>) {
                    for (const auto& l : v.polylines)
                        for (auto p : l.points) extent.add(p);
                } else if constexpr (std::is_same_v<T, ArcChain>) {
                    for (const auto& a : v.arcs) detail::add_arc(extent, a);
                } else if constexpr (std::is_same_v<T, Polyline>) {
                    for (auto p : v.points) extent.add(p);
                } else {
                    for (const auto& s : v) {
                        extent.add(s.origin);
                        extent.add(s.origin + Vec2{s.side, s.side});
                    }
                }
            },
            item.geometry);
    }
    if (!any || !extent.valid()) throw ValidationError("nothing to draw");

    const double span = std::max({extent.xmax - extent.xmin, extent.ymax - extent.ymin, 1e-12});
    const double pad = span * options.margin;
    const double x0 = extent.xmin - pad, y0 = -(extent.ymax + pad);
    const double w = extent.xmax - extent.xmin + 2 * pad, h = extent.ymax - extent.ymin + 2 * pad;
    const double scale = options.pixels / std::max(w, h);
    const double base_width = span * options.line_width;

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + format_fixed(w * scale) +
           "\" height=\"" + format_fixed(h * scale) + "\" viewBox=\"" + format_fixed(x0) + " " +
           format_fixed(y0) + " " + format_fixed(w) + " " + format_fixed(h) + "\">\n";
    for (const auto& item : items) {
        if (!detail::has_content(item.geometry)) continue;
        const std::string id = item.id.empty() ? "" : " id=\"" + item.id + "\"";
        const std::string style = " fill=\"" + item.style.fill + "\" stroke=\"" + item.style.stroke +
                                  "\" stroke-width=\"" + format_fixed(base_width * item.style.stroke_width) +
                                  "\"";
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, std::vector<Square>>) {
                    out += "<g" + id + style + ">\n";
                    for (const auto& s : v)
                        out += "<rect x=\"" + format_fixed(s.origin.x) + "\" y=\"" +
                               format_fixed(-(s.origin.y + s.side)) + "\" width=\"" + format_fixed(s.side) +
                               "\" height=\"" + format_fixed(s.side) + "\"/>\n";
                    out += "</g>\n";
                } else {
                    std::string d;
                    if constexpr (std::is_same_v<T, Contour>) {
                        for (const auto& l : v.polylines) {
                            if (!d.empty()) d += ' ';
                            detail::polyline_path(d, l);
                        }
                    } else if constexpr (std::is_same_v<T, ArcChain>) {
                        d = detail::arc_path(v);
                    } else {
                        detail::polyline_path(d, v);
                    }
                    out += "<path" + id + style + " stroke-linejoin=\"round\" d=\"" + d + "\"/>\n";
                }
            },
            item.geometry);
    }
    out += "</svg>\n";

    sink.write(out.data(), static_cast<std::streamsize>(out.size()));
    sink.flush();
    if (!sink) throw SinkError("failed to write SVG output");
    return out.size();
}

}  // namespace morphocell::io
