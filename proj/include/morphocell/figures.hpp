#pragma once

// The closed set of reproducible figures: three-dimensional forms go to
// OBJ/JSON meshes, planar spiral constructions to SVG/JSON.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "morphocell/dsl.hpp"
#include "morphocell/error.hpp"
#include "morphocell/geometry.hpp"
#include "morphocell/io/format.hpp"
#include "morphocell/io/json.hpp"
#include "morphocell/io/obj.hpp"
#include "morphocell/io/svg.hpp"
#include "morphocell/mesher.hpp"
#include "morphocell/spirals.hpp"

namespace morphocell {

/// Samples and meshes a cell at one instant. Height fields are triangulated
/// (disc domains get their rim closed onto the circle); implicit regions are
/// polygonized at their iso value.
inline Mesh mesh_cell(const geometry::CellSpec& cell, double t, const geometry::Resolution& res) {
    const auto grid = geometry::sample(cell, t, res);
    if (cell.kind == geometry::CellKind::ImplicitRegion) return mesher::extract_isosurface(grid, cell.iso);
    Mesh mesh = mesher::triangulate_heightfield(grid);
    if (const auto* disc = std::get_if<geometry::Disc>(&cell.domain)) {
        mesher::close_disc_rim(mesh, *disc, [&](double x, double y) {
            return geometry::field_value(cell, x, y, 0.0, t);
        });
    }
    return mesh;
}

namespace figures {

struct ParamSchema {
    std::string name;
    double default_value;
    double min;
    double max;
    bool exclusive_min = false;
    bool integer = false;
    std::string description;
};

enum class View { Surface, Plane };

struct RecipeInfo {
    std::string id;
    std::string title;
    View view;
    std::vector<ParamSchema> params;
};

inline constexpr double max_resolution = 4097;

inline const std::vector<RecipeInfo>& recipes() {
    static const std::vector<RecipeInfo> all = [] {
        const ParamSchema res{"resolution", 129, 2, max_resolution, false, true, "lattice samples per axis"};
        const auto time = [](double def, std::string desc) {
            return ParamSchema{"t", def, 0, 100, true, false, std::move(desc)};
        };
        return std::vector<RecipeInfo>{
            {"fig4", "Opening surface z = |xy|^(1/t) over [-2,2]^2", View::Surface,
             {time(1, "single instant; when unset the series t = 1, 2, 4 is produced"), res}},
            {"fig6", "Fibonacci squares and quarter-arc spiral", View::Plane,
             {{"n", 6, 2, 40, false, true, "number of squares"}}},
            {"fig7", "Fibonacci spiral (blue) and golden spiral (red)", View::Plane,
             {{"n", 6, 2, 40, false, true, "number of quarter arcs"}}},
            {"fig8", "Logarithmic spiral r = phi^(b theta) and its time transform", View::Plane,
             {{"b", 2 / std::numbers::pi, -10, 10, false, false, "growth constant"},
              time(0.5, "instant of the transformed (blue) spiral")}},
            {"fig12a", "Bell surface z = exp(-(x^2+y^2)^(1/t)) at t = 1", View::Surface,
             {time(1, "time parameter"), res}},
            {"fig12b", "Bell surface z = exp(-(x^2+y^2)^(1/t)) at t = 2", View::Surface,
             {time(2, "time parameter"), res}},
            {"fig12c", "Steady singular form z = -(x^2+y^2) sin(1/sqrt(x^2+y^2))", View::Surface, {res}},
            {"eq1", "Paraboloid z = H - b(x^2+y^2) over the disc x^2+y^2 <= H/b", View::Surface,
             {{"H", 10, 0, 1000, true, false, "height"}, {"b", 0.1, 0, 100, true, false, "curvature"}, res}},
        };
    }();
    return all;
}

inline const RecipeInfo& recipe_info(const std::string& id) {
    for (const auto& r : recipes())
        if (r.id == id) return r;
    throw ValidationError("unknown figure recipe '" + id + "'");
}

struct FigureRecipe {
    std::string id;
    ParamMap overrides;
    std::string format;  // empty selects the recipe's default
};

/// Declared defaults merged with validated overrides.
inline ParamMap resolve_params(const RecipeInfo& info, const ParamMap& overrides) {
    ParamMap out;
    for (const auto& p : info.params) out[p.name] = p.default_value;
    for (const auto& [name, value] : overrides) {
        auto it = std::find_if(info.params.begin(), info.params.end(),
                               [&](const ParamSchema& p) { return p.name == name; });
        if (it == info.params.end())
            throw ValidationError("recipe " + info.id + " has no parameter '" + name + "'");
        if (name == "t" && !(value > 0.0)) throw TimeError(value);
        const bool low = it->exclusive_min ? !(value > it->min) : !(value >= it->min);
        if (low || !(value <= it->max))
            throw ValidationError("parameter " + name + " out of range");
        if (it->integer && std::trunc(value) != value)
            throw ValidationError("parameter " + name + " must be an integer");
        out[name] = value;
    }
    return out;
}

inline std::string default_format(const RecipeInfo& info) { return info.view == View::Surface ? "obj" : "svg"; }

inline std::string resolve_format(const RecipeInfo& info, const std::string& requested) {
    const std::string format = requested.empty() ? default_format(info) : requested;
    const bool ok = format == "json" || (info.view == View::Surface ? format == "obj" : format == "svg");
    if (!ok) throw ValidationError("recipe " + info.id + " cannot be written as " + format);
    return format;
}

/// Cell definitions behind the surface recipes.
inline geometry::CellSpec surface_cell(const std::string& id, const ParamMap& params) {
    using geometry::CellKind;
    geometry::CellSpec cell;
    cell.kind = CellKind::HeightField;
    cell.domain = geometry::SquareDomain{4.0, true};
    if (id == "fig4") {
        cell.expr = dsl::parse("abs(x*y)^(1/t)");
    } else if (id == "fig12a" || id == "fig12b") {
        cell.expr = dsl::parse("exp(-(x^2 + y^2)^(1/t))");
    } else if (id == "fig12c") {
        cell.expr = dsl::parse("-(x^2 + y^2) * sin(1/sqrt(x^2 + y^2))");
        // |g| <= x^2 + y^2, so the limit at the origin is 0.
        cell.singularities.push_back({{0.0, 0.0, 0.0}, 0.0});
    } else if (id == "eq1") {
        const double height = params.at("H"), b = params.at("b");
        cell.expr = dsl::parse("H - b*(x^2 + y^2)");
        cell.params = {{"H", height}, {"b", b}};
        cell.domain = geometry::Disc{0.0, 0.0, std::sqrt(height / b)};
    } else {
        throw ValidationError("recipe " + id + " is not a surface");
    }
    return cell;
}

/// Instants at which a surface recipe is rendered.
inline std::vector<double> surface_instants(const std::string& id, const ParamMap& params,
                                            const ParamMap& overrides) {
    if (id == "fig4" && !overrides.contains("t")) return {1.0, 2.0, 4.0};
    if (auto it = params.find("t"); it != params.end()) return {it->second};
    return {1.0};
}

inline std::vector<io::SvgItem> plane_items(const std::string& id, const ParamMap& params) {
    if (id == "fig6") {
        const auto n = static_cast<std::size_t>(params.at("n"));
        return {{spirals::fibonacci_squares(n), {"#555555", 0.5, "none"}, "squares"},
                {spirals::fibonacci_spiral(n), {"black", 1.5, "none"}, "fibonacci"}};
    }
    if (id == "fig7") {
        const auto n = static_cast<std::size_t>(params.at("n"));
        const auto fib = spirals::fibonacci_spiral(n);
        // Golden arcs scaled and shifted so the outermost arc coincides with
        // the outermost Fibonacci arc.
        const double scale = fib.arcs.back().radius / std::pow(spirals::phi, static_cast<double>(n - 1));
        auto golden = spirals::golden_spiral(n, scale);
        golden = golden.translated(fib.arcs.back().center - golden.arcs.back().center);
        return {{spirals::fibonacci_squares(n), {"#999999", 0.5, "none"}, "squares"},
                {fib, {"blue", 1.5, "none"}, "fibonacci"},
                {golden, {"red", 1.5, "none"}, "golden"}};
    }
    if (id == "fig8") {
        spirals::SpiralSpec base;
        base.b = params.at("b");
        spirals::SpiralSpec transformed = base;
        transformed.t = params.at("t");
        return {{spirals::log_spiral(base), {"red", 1.5, "none"}, "t1"},
                {spirals::log_spiral(transformed), {"blue", 1.5, "none"}, "transformed"}};
    }
    throw ValidationError("recipe " + id + " is not a planar figure");
}

inline io::Json plane_json(const std::vector<io::SvgItem>& items, io::Json meta) {
    std::vector<io::Json> out;
    for (const auto& item : items) {
        io::Json j = std::visit([](const auto& g) { return io::to_json(g); }, item.geometry);
        out.push_back(io::styled(std::move(j), item.id, item.style.stroke));
    }
    return io::envelope(std::move(out), std::move(meta));
}

struct FigureOutput {
    std::string filename;
    std::string content;
};

inline io::Json recipe_meta(const RecipeInfo& info, const ParamMap& params) {
    io::Json p = io::Json::object();
    for (const auto& [k, v] : params) p[k] = v;
    return io::Json{{"recipe", info.id}, {"title", info.title}, {"params", std::move(p)}};
}

/// Renders a recipe in memory. Filenames depend only on the recipe id, the
/// instant (for surfaces) and the format.
inline std::vector<FigureOutput> render_figure(const FigureRecipe& recipe) {
    const auto& info = recipe_info(recipe.id);
    const ParamMap params = resolve_params(info, recipe.overrides);
    const std::string format = resolve_format(info, recipe.format);
    std::vector<FigureOutput> outputs;

    if (info.view == View::Plane) {
        const auto items = plane_items(info.id, params);
        std::ostringstream out;
        if (format == "svg") io::write_svg(items, out);
        else out << plane_json(items, recipe_meta(info, params)).dump(1) << '\n';
        outputs.push_back({info.id + "." + format, out.str()});
        return outputs;
    }

    const auto cell = surface_cell(info.id, params);
    const auto n = static_cast<std::size_t>(params.at("resolution"));
    const auto instants = surface_instants(info.id, params, recipe.overrides);
    for (double t : instants) {
        const Mesh mesh = mesh_cell(cell, t, {n, n, 1});
        std::ostringstream out;
        if (format == "obj") {
            io::write_obj(mesh, out);
        } else {
            auto meta = recipe_meta(info, params);
            meta["t"] = t;
            out << io::envelope({io::styled(io::to_json(mesh), info.id)}, std::move(meta)).dump() << '\n';
        }
        const bool timed = geometry::uses_time(cell);
        outputs.push_back({info.id + (timed ? "_t" + io::format_shortest(t) : "") + "." + format, out.str()});
    }
    return outputs;
}

/// Renders and writes a recipe into `out_dir`, returning the written paths.
inline std::vector<std::filesystem::path> run_figure(const FigureRecipe& recipe,
                                                     const std::filesystem::path& out_dir) {
    const auto outputs = render_figure(recipe);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw SinkError("cannot create " + out_dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> paths;
    for (const auto& o : outputs) {
        const auto path = out_dir / o.filename;
        std::ofstream file(path, std::ios::binary | std::ios::trunc);
        file.write(o.content.data(), static_cast<std::streamsize>(o.content.size()));
        if (!file) throw SinkError("cannot write " + path.string());
        paths.push_back(path);
    }
    return paths;
}

inline io::Json to_json(const ParamSchema& p) {
    return io::Json{{"name", p.name},       {"default", p.default_value}, {"min", p.min},
                    {"max", p.max},         {"exclusive_min", p.exclusive_min},
                    {"integer", p.integer}, {"description", p.description}};
}

inline io::Json to_json(const RecipeInfo& info) {
    io::Json params = io::Json::array();
    for (const auto& p : info.params) params.push_back(to_json(p));
    io::Json formats = info.view == View::Surface ? io::Json::array({"obj", "json"}) : io::Json::array({"svg", "json"});
    return io::Json{{"id", info.id},
                    {"title", info.title},
                    {"view", info.view == View::Surface ? "surface" : "plane"},
                    {"formats", std::move(formats)},
                    {"params", std::move(params)}};
}

}  // namespace figures
}  // namespace morphocell
