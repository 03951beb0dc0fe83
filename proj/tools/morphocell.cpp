// morphocell command-line tool: figure reproduction, generic meshing and
// spiral jobs, DSL checking, and the JSON service.
//
// Exit codes: 0 success, 2 usage error, 3 input/DSL error, 4 numeric domain
// error, 1 anything else (I/O failures).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "morphocell/morphocell.hpp"
#include "morphocell/service.hpp"

namespace mc = morphocell;

namespace {

constexpr int exit_usage = 2;
constexpr int exit_input = 3;
constexpr int exit_domain = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void configure_logging() {
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("MORPHOCELL_LOG")) {
        const auto level = spdlog::level::from_str(env);
        // from_str maps unknown names to "off"; only accept real level names.
        if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
    }
    spdlog::set_default_logger(spdlog::default_logger());
}

mc::ParamMap parse_assignments(const std::vector<std::string>& items) {
    mc::ParamMap out;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("expected k=v, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        try {
            std::size_t used = 0;
            const double value = std::stod(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) throw std::invalid_argument(item);
            out[key] = value;
        } catch (const std::logic_error&) {
            throw UsageError("value of " + key + " is not a number");
        }
    }
    return out;
}

std::pair<double, double> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageError("expected a:b, got '" + text + "'");
    try {
        return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
    } catch (const std::logic_error&) {
        throw UsageError("range bounds must be numbers");
    }
}

std::string extension(const std::string& path) {
    auto ext = std::filesystem::path(path).extension().string();
    if (!ext.empty()) ext.erase(0, 1);
    return ext;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    file.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!file) throw mc::SinkError("cannot write " + path);
    spdlog::info("wrote {} ({} bytes)", path, content.size());
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();

    CLI::App app{"morphocell: space-time cells, spirals and their meshes"};
    app.require_subcommand(1);

    // figure
    auto* figure = app.add_subcommand("figure", "Reproduce one of the fixed figure recipes");
    std::string figure_id;
    std::vector<std::string> figure_sets;
    std::string figure_out = ".";
    std::string figure_format;
    figure->add_option("id", figure_id, "fig4 | fig6 | fig7 | fig8 | fig12a | fig12b | fig12c | eq1")->required();
    figure->add_option("--set", figure_sets, "Parameter override k=v (repeatable)");
    figure->add_option("--out", figure_out, "Output directory");
    figure->add_option("--format", figure_format, "svg | obj | json")->check(CLI::IsMember({"svg", "obj", "json"}));

    // mesh
    auto* mesh = app.add_subcommand("mesh", "Mesh a cell written in the expression language");
    std::string mesh_expr;
    std::string mesh_kind = "heightfield";
    double mesh_t = 1.0;
    std::size_t mesh_res = 0;
    std::string mesh_out;
    std::vector<std::string> mesh_sets;
    double mesh_iso = 1.0;
    double mesh_extent = 2.0;
    bool mesh_grid = false;
    mesh->add_option("--expr", mesh_expr, "Field expression")->required();
    mesh->add_option("--kind", mesh_kind, "heightfield | implicit")->check(CLI::IsMember({"heightfield", "implicit"}));
    mesh->add_option("--t", mesh_t, "Time parameter (> 0)");
    mesh->add_option("--res", mesh_res, "Samples per axis (default 129 for height fields, 65 for volumes)")
        ->check(CLI::Range(2, 4097));
    mesh->add_option("--out", mesh_out, "Output path (.obj or .json)")->required();
    mesh->add_option("--set", mesh_sets, "Parameter binding k=v (repeatable)");
    mesh->add_option("--iso", mesh_iso, "Iso value for implicit regions");
    mesh->add_option("--extent", mesh_extent, "Half-width of the centred sampling domain");
    mesh->add_flag("--grid", mesh_grid, "Write the sampled grid as JSON instead of a mesh");

    // spiral
    auto* spiral = app.add_subcommand("spiral", "Sample the logarithmic spiral r = phi^(b theta t)");
    double spiral_b = mc::spirals::golden_b;
    double spiral_t = 1.0;
    std::string spiral_theta = "0:12.566370614359172";
    std::size_t spiral_samples = 721;
    std::string spiral_out;
    spiral->add_option("--b", spiral_b, "Growth constant (default 2/pi)");
    spiral->add_option("--t", spiral_t, "Time parameter (> 0)");
    spiral->add_option("--theta", spiral_theta, "Angle range a:b in radians");
    spiral->add_option("--samples", spiral_samples, "Number of samples")->check(CLI::Range(2, 10000000));
    spiral->add_option("--out", spiral_out, "Output path (.svg or .json)")->required();

    // serve
    auto* serve = app.add_subcommand("serve", "Serve the JSON API (and optional static assets)");
    int serve_port = 8080;
    std::string serve_host = "127.0.0.1";
    std::string serve_static;
    serve->add_option("--port", serve_port, "TCP port")->check(CLI::Range(1, 65535));
    serve->add_option("--host", serve_host, "Bind address");
    serve->add_option("--static", serve_static, "Directory of static assets served at /");

    // check
    auto* check = app.add_subcommand("check", "Parse and validate an expression");
    std::string check_expr;
    check->add_option("--expr", check_expr, "Field expression")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*figure) {
            mc::figures::FigureRecipe recipe{figure_id, parse_assignments(figure_sets), figure_format};
            for (const auto& p : mc::figures::run_figure(recipe, figure_out)) {
                spdlog::info("wrote {}", p.string());
                std::cout << p.string() << '\n';
            }
        } else if (*mesh) {
            mc::geometry::CellSpec cell;
            cell.kind = mesh_kind == "implicit" ? mc::geometry::CellKind::ImplicitRegion
                                                : mc::geometry::CellKind::HeightField;
            cell.expr = mc::dsl::parse(mesh_expr);
            cell.params = parse_assignments(mesh_sets);
            cell.iso = mesh_iso;
            if (cell.kind == mc::geometry::CellKind::HeightField)
                cell.domain = mc::geometry::SquareDomain{2 * mesh_extent, true};
            else
                cell.domain = mc::geometry::Box{-mesh_extent, mesh_extent, -mesh_extent,
                                                mesh_extent, -mesh_extent, mesh_extent};
            if (mesh_res == 0) mesh_res = mc::geometry::default_resolution(cell.kind).nx;
            if (cell.kind == mc::geometry::CellKind::ImplicitRegion &&
                mesh_res > mc::service::max_volume_resolution)
                throw UsageError("implicit meshing supports at most " +
                                 std::to_string(mc::service::max_volume_resolution) + " samples per axis");
            if (mc::geometry::uses_time(cell) && !(mesh_t > 0.0)) throw mc::TimeError(mesh_t);
            const mc::geometry::Resolution res{mesh_res, mesh_res, mesh_res};
            const std::string ext = extension(mesh_out);
            if (mesh_grid) {
                write_file(mesh_out, mc::io::to_json(mc::geometry::sample(cell, mesh_t, res)).dump() + "\n");
            } else {
                const auto m = mc::mesh_cell(cell, mesh_t, res);
                spdlog::info("mesh: {} vertices, {} triangles", m.vertices.size(), m.triangles.size());
                std::ostringstream out;
                if (ext == "obj") mc::io::write_obj(m, out);
                else if (ext == "json") out << mc::io::envelope({mc::io::to_json(m)}).dump() << '\n';
                else throw UsageError("mesh output must end in .obj or .json");
                write_file(mesh_out, out.str());
            }
        } else if (*spiral) {
            const auto [a, b] = parse_range(spiral_theta);
            mc::spirals::SpiralSpec spec{spiral_b, spiral_t, a, b, spiral_samples};
            const auto line = mc::spirals::log_spiral(spec);
            const std::string ext = extension(spiral_out);
            std::ostringstream out;
            if (ext == "svg") mc::io::write_svg({{line, {"red", 1.5, "none"}, "spiral"}}, out);
            else if (ext == "json") out << mc::io::envelope({mc::io::to_json(line)}).dump() << '\n';
            else throw UsageError("spiral output must end in .svg or .json");
            write_file(spiral_out, out.str());
        } else if (*serve) {
            httplib::Server server;
            mc::service::Api api;
            api.mount(server, serve_static);
            spdlog::info("listening on {}:{}", serve_host, serve_port);
            if (!server.listen(serve_host, serve_port)) {
                spdlog::error("cannot listen on {}:{}", serve_host, serve_port);
                return 1;
            }
        } else if (*check) {
            const auto expr = mc::dsl::parse(check_expr);
            std::cout << mc::dsl::to_string(expr) << '\n';
            const auto params = mc::dsl::free_params(expr);
            std::cout << "params:";
            for (const auto& p : params) std::cout << ' ' << p;
            std::cout << '\n';
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const mc::Error& e) {
        std::cerr << e.code() << ": " << e.what() << '\n';
        switch (e.category()) {
            case mc::ErrorCategory::Input: return exit_input;
            case mc::ErrorCategory::Domain: return exit_domain;
            case mc::ErrorCategory::Io: return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
