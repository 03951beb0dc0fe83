#pragma once

// JSON API over the figure recipes and the generic mesh/spiral pipelines.
//
//   GET  /api/health   -> {"status": "ok"}
//   GET  /api/recipes  -> {"recipes": [...]} with parameter schemas
//   POST /api/mesh     -> geometry envelope holding one mesh
//   POST /api/spiral   -> geometry envelope holding arc chains / polylines
//
// User errors map to 400 (malformed input) or 422 (numeric domain); the
// body is {"error": {"code", "message"[, "position"]}}. Handlers hold no
// mutable state.

#include <cmath>
#include <string>
#include <string_view>

#include <httplib.h>
#include "morphocell/dsl.hpp"
#include "morphocell/error.hpp"
#include "morphocell/figures.hpp"
#include "morphocell/geometry.hpp"
#include "morphocell/io/json.hpp"
#include "morphocell/spirals.hpp"

namespace morphocell::service {

using io::Json;

struct Reply {
    int status = 200;
    std::string body;
};

inline constexpr std::size_t max_volume_resolution = 257;

inline int http_status(const Error& e) {
    switch (e.category()) {
        case ErrorCategory::Input: return 400;
        case ErrorCategory::Domain: return 422;
        case ErrorCategory::Io: break;
    }
    return 500;
}

inline Reply error_reply(int status, const std::string& code, const std::string& message,
                         std::optional<std::size_t> position = std::nullopt) {
    Json err{{"code", code}, {"message", message}};
    if (position) err["position"] = *position;
    return {status, Json{{"error", std::move(err)}}.dump()};
}

namespace detail {

inline double number(const Json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number()) throw ValidationError(std::string(key) + " must be a number");
    return v.get<double>();
}

inline std::size_t count(const Json& j, const char* key, std::size_t fallback, std::size_t lo, std::size_t hi) {
    const double v = number(j, key, static_cast<double>(fallback));
    if (std::trunc(v) != v || v < static_cast<double>(lo) || v > static_cast<double>(hi))
        throw ValidationError(std::string(key) + " must be an integer in [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "]");
    return static_cast<std::size_t>(v);
}

inline ParamMap param_map(const Json& j) {
    ParamMap out;
    if (j.is_null()) return out;
    if (!j.is_object()) throw ValidationError("params must be an object");
    for (const auto& [k, v] : j.items()) {
        if (!v.is_number()) throw ValidationError("parameter " + k + " must be a number");
        out[k] = v.get<double>();
    }
    return out;
}

inline double time_value(const Json& j, double fallback) {
    const double t = number(j, "t", fallback);
    if (!(t > 0.0)) throw TimeError(t);
    return t;
}

}  // namespace detail

/// Domain layouts:
///   {"type": "square", "side": 4, "centered": true}
///   {"type": "disc", "center": [cx, cy], "radius": r}
///   {"type": "box", "min": [x, y, z], "max": [x, y, z]}
inline geometry::SpatialDomain domain_from_json(const Json& j) {
    const auto type = j.at("type").get<std::string>();
    geometry::SpatialDomain d;
    if (type == "square") {
        d = geometry::SquareDomain{j.at("side").get<double>(), j.value("centered", true)};
    } else if (type == "disc") {
        const auto c = j.value("center", Json::array({0.0, 0.0}));
        d = geometry::Disc{c.at(0).get<double>(), c.at(1).get<double>(), j.at("radius").get<double>()};
    } else if (type == "box") {
        const auto& lo = j.at("min");
        const auto& hi = j.at("max");
        d = geometry::Box{lo.at(0).get<double>(), hi.at(0).get<double>(), lo.at(1).get<double>(),
                          hi.at(1).get<double>(), lo.at(2).get<double>(), hi.at(2).get<double>()};
    } else {
        throw ValidationError("unknown domain type '" + type + "'");
    }
    geometry::validate(d);
    return d;
}

/// {"expr": "...", "kind": "heightfield" | "implicit", "domain": {...},
///  "params": {...}, "iso": 1}. The domain defaults to [-2,2]^2 for height
/// fields and [-2,2]^3 for implicit regions.
inline geometry::CellSpec cell_from_json(const Json& j) {
    geometry::CellSpec cell;
    const auto kind = j.value("kind", std::string("heightfield"));
    if (kind == "heightfield") {
        cell.kind = geometry::CellKind::HeightField;
        cell.domain = geometry::SquareDomain{4.0, true};
    } else if (kind == "implicit") {
        cell.kind = geometry::CellKind::ImplicitRegion;
        cell.domain = geometry::Box{-2, 2, -2, 2, -2, 2};
    } else {
        throw ValidationError("kind must be heightfield or implicit");
    }
    cell.expr = dsl::parse(j.at("expr").get<std::string>());
    if (j.contains("domain")) cell.domain = domain_from_json(j.at("domain"));
    cell.params = detail::param_map(j.value("params", Json()));
    cell.iso = detail::number(j, "iso", 1.0);
    geometry::validate(cell);
    return cell;
}

class Api {
public:
    Reply health() const { return {200, Json{{"status", "ok"}}.dump()}; }

    Reply recipes() const {
        Json list = Json::array();
        for (const auto& r : figures::recipes()) list.push_back(figures::to_json(r));
        return {200, Json{{"recipes", std::move(list)}}.dump()};
    }

    Reply mesh(std::string_view body) const {
        return guarded([&] {
            const Json req = Json::parse(body);
            geometry::CellSpec cell;
            double t = 1.0;
            std::size_t res = 0;
            Json meta = Json::object();
            if (req.contains("recipe")) {
                const auto& info = figures::recipe_info(req.at("recipe").get<std::string>());
                if (info.view != figures::View::Surface) throw ValidationError(info.id + " is not a surface recipe");
                auto overrides = detail::param_map(req.value("params", Json()));
                if (req.contains("t")) overrides["t"] = detail::time_value(req, 1.0);
                if (req.contains("resolution")) overrides["resolution"] = detail::number(req, "resolution", 0);
                const auto params = figures::resolve_params(info, overrides);
                cell = figures::surface_cell(info.id, params);
                t = params.contains("t") ? params.at("t") : 1.0;
                res = static_cast<std::size_t>(params.at("resolution"));
                meta["recipe"] = info.id;
            } else {
                cell = cell_from_json(req.at("cell"));
                t = detail::time_value(req, 1.0);
                const bool volume = cell.kind == geometry::CellKind::ImplicitRegion;
                res = detail::count(req, "resolution", volume ? geometry::default_resolution_3d
                                                             : geometry::default_resolution_2d,
                                    2, volume ? max_volume_resolution : std::size_t(figures::max_resolution));
            }
            const Mesh m = mesh_cell(cell, t, {res, res, res});
            meta["t"] = t;
            meta["resolution"] = res;
            meta["vertex_count"] = m.vertices.size();
            meta["triangle_count"] = m.triangles.size();
            return Reply{200, io::envelope({io::to_json(m)}, std::move(meta)).dump()};
        });
    }

    Reply spiral(std::string_view body) const {
        return guarded([&] {
            const Json req = Json::parse(body);
            if (req.contains("recipe")) {
                const auto& info = figures::recipe_info(req.at("recipe").get<std::string>());
                if (info.view != figures::View::Plane) throw ValidationError(info.id + " is not a planar recipe");
                const auto params = figures::resolve_params(info, detail::param_map(req.value("params", Json())));
                const auto items = figures::plane_items(info.id, params);
                return Reply{200, figures::plane_json(items, figures::recipe_meta(info, params)).dump()};
            }
            const auto kind = req.value("kind", std::string("log"));
            Json item;
            if (kind == "log") {
                spirals::SpiralSpec spec;
                spec.b = detail::number(req, "b", spirals::golden_b);
                spec.t = detail::time_value(req, 1.0);
                if (req.contains("theta")) {
                    spec.theta_start = req.at("theta").at(0).get<double>();
                    spec.theta_end = req.at("theta").at(1).get<double>();
                }
                spec.samples = detail::count(req, "samples", spec.samples, 2, 100000);
                item = io::to_json(spirals::log_spiral(spec));
            } else if (kind == "fibonacci") {
                item = io::to_json(spirals::fibonacci_spiral(detail::count(req, "n", 6, 2, 40)));
            } else if (kind == "golden") {
                item = io::to_json(spirals::golden_spiral(detail::count(req, "n", 6, 2, 40)));
            } else {
                throw ValidationError("kind must be log, fibonacci or golden");
            }
            return Reply{200, io::envelope({std::move(item)}, Json{{"kind", kind}}).dump()};
        });
    }

    /// Registers the API routes, and optionally static assets at "/".
    void mount(httplib::Server& server, const std::string& static_dir = {}) const {
        const auto send = [](httplib::Response& res, const Reply& r) {
            res.status = r.status;
            res.set_content(r.body, "application/json");
        };
        server.Get("/api/health", [this, send](const httplib::Request&, httplib::Response& res) { send(res, health()); });
        server.Get("/api/recipes", [this, send](const httplib::Request&, httplib::Response& res) { send(res, recipes()); });
        server.Post("/api/mesh", [this, send](const httplib::Request& req, httplib::Response& res) {
            send(res, mesh(req.body));
        });
        server.Post("/api/spiral", [this, send](const httplib::Request& req, httplib::Response& res) {
            send(res, spiral(req.body));
        });
        if (!static_dir.empty() && !server.set_mount_point("/", static_dir))
            throw ValidationError("static asset directory not found: " + static_dir);
    }

private:
    template <class F>
    static Reply guarded(F&& f) {
        try {
            return f();
        } catch (const Error& e) {
            return error_reply(http_status(e), e.code(), e.what(), e.position());
        } catch (const Json::parse_error& e) {
            return error_reply(400, "BAD_JSON", e.what());
        } catch (const Json::exception& e) {
            return error_reply(400, "INVALID_INPUT", e.what());
        } catch (const std::exception& e) {
            return error_reply(500, "INTERNAL", e.what());
        }
    }
};

}  // namespace morphocell::service
