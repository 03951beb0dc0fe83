#pragma once

// JSON layouts shared by the CLI and the HTTP service. See docs/formats.md.

#include <string>
#include <vector>

#include <json.hpp>
#include "morphocell/geometry.hpp"
#include "morphocell/mesher.hpp"
#include "morphocell/spirals.hpp"

namespace morphocell::io {

using Json = nlohmann::ordered_json;

inline Json to_json(Vec2 p) { return Json::array({p.x, p.y}); }
inline Json to_json(Vec3 p) { return Json::array({p.x, p.y, p.z}); }

inline Json to_json(const Mesh& mesh) {
    Json vertices = Json::array();
    for (const auto& v : mesh.vertices) vertices.push_back(to_json(v));
    Json triangles = Json::array();
    for (const auto& t : mesh.triangles) triangles.push_back(Json::array({t[0], t[1], t[2]}));
    Json j{{"type", "mesh"}, {"vertices", std::move(vertices)}, {"triangles", std::move(triangles)}};
    if (!mesh.normals.empty()) {
        Json normals = Json::array();
        for (const auto& n : mesh.normals) normals.push_back(to_json(n));
        j["normals"] = std::move(normals);
    }
    return j;
}

inline Json to_json(const Polyline& line) {
    Json points = Json::array();
    for (auto p : line.points) points.push_back(to_json(p));
    return Json{{"type", "polyline"}, {"closed", line.closed}, {"points", std::move(points)}};
}

inline Json to_json(const Contour& contour) {
    Json lines = Json::array();
    for (const auto& l : contour.polylines) lines.push_back(to_json(l));
    return Json{{"type", "contour"}, {"polylines", std::move(lines)}};
}

inline Json to_json(const ArcChain& chain) {
    Json arcs = Json::array();
    for (const auto& a : chain.arcs)
        arcs.push_back(Json{{"center", to_json(a.center)},
                            {"radius", a.radius},
                            {"start_angle", a.start_angle},
                            {"end_angle", a.end_angle}});
    return Json{{"type", "arc_chain"}, {"arcs", std::move(arcs)}};
}

inline Json to_json(const std::vector<Square>& squares) {
    Json out = Json::array();
    for (const auto& s : squares)
        out.push_back(Json{{"index", s.index}, {"origin", to_json(s.origin)}, {"side", s.side}});
    return Json{{"type", "squares"}, {"squares", std::move(out)}};
}

/// A geometry item with presentation hints for viewers.
inline Json styled(Json item, const std::string& name, const std::string& color = {}) {
    item["name"] = name;
    if (!color.empty()) item["color"] = color;
    return item;
}

/// The geometry envelope: {"format", "version", "meta", "items"}.
inline Json envelope(std::vector<Json> items, Json meta = Json::object()) {
    Json j{{"format", "morphocell.geometry"}, {"version", 1}, {"meta", std::move(meta)}};
    j["items"] = Json::array();
    for (auto& i : items) j["items"].push_back(std::move(i));
    return j;
}

/// {"format": "morphocell.grid", "dimension", "counts", "bounds", "t", "values"}
/// with values row-major (x fastest) and null for holes.
inline Json to_json(const geometry::ScalarGrid& grid) {
    Json counts = Json::array();
    for (int a = 0; a < grid.dimension; ++a) counts.push_back(grid.counts[a]);
    Json bounds{{"xmin", grid.lo[0]}, {"xmax", grid.hi[0]}, {"ymin", grid.lo[1]}, {"ymax", grid.hi[1]}};
    if (grid.dimension == 3) {
        bounds["zmin"] = grid.lo[2];
        bounds["zmax"] = grid.hi[2];
    }
    Json values = Json::array();
    for (double v : grid.values) {
        if (geometry::ScalarGrid::is_hole(v)) values.push_back(nullptr);
        else values.push_back(v);
    }
    return Json{{"format", "morphocell.grid"}, {"version", 1},     {"dimension", grid.dimension},
                {"counts", std::move(counts)},  {"bounds", bounds}, {"t", grid.t},
                {"values", std::move(values)}};
}

inline geometry::ScalarGrid grid_from_json(const Json& j) {
    geometry::ScalarGrid grid;
    grid.dimension = j.at("dimension").get<int>();
    if (grid.dimension != 2 && grid.dimension != 3) throw ValidationError("grid dimension must be 2 or 3");
    const auto& counts = j.at("counts");
    if (counts.size() != static_cast<std::size_t>(grid.dimension)) throw ValidationError("grid counts mismatch");
    grid.counts = {1, 1, 1};
    for (int a = 0; a < grid.dimension; ++a) grid.counts[a] = counts[a].get<std::size_t>();
    const auto& b = j.at("bounds");
    grid.lo = {b.at("xmin").get<double>(), b.at("ymin").get<double>(), 0.0};
    grid.hi = {b.at("xmax").get<double>(), b.at("ymax").get<double>(), 0.0};
    if (grid.dimension == 3) {
        grid.lo[2] = b.at("zmin").get<double>();
        grid.hi[2] = b.at("zmax").get<double>();
    }
    grid.t = j.at("t").get<double>();
    for (const auto& v : j.at("values"))
        grid.values.push_back(v.is_null() ? geometry::ScalarGrid::hole : v.get<double>());
    if (grid.values.size() != grid.counts[0] * grid.counts[1] * grid.counts[2])
        throw ValidationError("grid value count does not match its counts");
    return grid;
}

}  // namespace morphocell::io
