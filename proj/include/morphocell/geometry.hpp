#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "morphocell/dsl.hpp"
#include "morphocell/error.hpp"

namespace morphocell {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Vec2&) const = default;
    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
};

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    bool operator==(const Vec3&) const = default;
    friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
};

inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Vec3 v) { return std::sqrt(dot(v, v)); }

/// Open or closed sequence of planar points.
struct Polyline {
    std::vector<Vec2> points;
    bool closed = false;

    double length() const {
        double total = 0.0;
        for (std::size_t i = 1; i < points.size(); ++i) total += norm(points[i] - points[i - 1]);
        if (closed && points.size() > 1) total += norm(points.front() - points.back());
        return total;
    }
};

using ParamMap = std::map<std::string, double, std::less<>>;

namespace geometry {

// ---------------------------------------------------------------------------
// Spatial domains

struct Box {
    double xmin, xmax, ymin, ymax, zmin, zmax;
};

/// Planar disc; unbounded in z.
struct Disc {
    double cx, cy, radius;
};

/// Planar square of the given side, either centred on the origin or spanning
/// [0, side]^2; unbounded in z.
struct SquareDomain {
    double side;
    bool centered = true;
};

using SpatialDomain = std::variant<Box, Disc, SquareDomain>;

struct PlanarBounds {
    double xmin, xmax, ymin, ymax;
};

inline void validate(const SpatialDomain& domain) {
    std::visit(
        [](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Box>) {
                if (!(d.xmin < d.xmax && d.ymin < d.ymax && d.zmin < d.zmax))
                    throw ValidationError("box domain needs min < max on every axis");
            } else if constexpr (std::is_same_v<T, Disc>) {
                if (!(d.radius > 0.0) || !std::isfinite(d.radius) || !std::isfinite(d.cx) ||
                    !std::isfinite(d.cy))
                    throw ValidationError("disc domain needs a finite positive radius");
            } else {
                if (!(d.side > 0.0) || !std::isfinite(d.side))
                    throw ValidationError("square domain needs a finite positive side");
            }
        },
        domain);
}

inline PlanarBounds planar_bounds(const SpatialDomain& domain) {
    return std::visit(
        [](const auto& d) -> PlanarBounds {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Box>) {
                return {d.xmin, d.xmax, d.ymin, d.ymax};
            } else if constexpr (std::is_same_v<T, Disc>) {
                return {d.cx - d.radius, d.cx + d.radius, d.cy - d.radius, d.cy + d.radius};
            } else {
                const double lo = d.centered ? -d.side / 2 : 0.0;
                return {lo, lo + d.side, lo, lo + d.side};
            }
        },
        domain);
}

/// Closed-set membership in the domain (boundary points included).
inline bool contains(const SpatialDomain& domain, double x, double y, double z) {
    return std::visit(
        [&](const auto& d) -> bool {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Box>) {
                return x >= d.xmin && x <= d.xmax && y >= d.ymin && y <= d.ymax && z >= d.zmin &&
                       z <= d.zmax;
            } else if constexpr (std::is_same_v<T, Disc>) {
                const double dx = x - d.cx;
                const double dy = y - d.cy;
                return dx * dx + dy * dy <= d.radius * d.radius;
            } else {
                const auto b = planar_bounds(domain);
                return x >= b.xmin && x <= b.xmax && y >= b.ymin && y <= b.ymax;
            }
        },
        domain);
}

// ---------------------------------------------------------------------------
// Cells

enum class CellKind {
    ImplicitRegion,  // {p in D : f(p; t) <= iso}
    HeightField,     // surface z = g(x, y; t)
};

/// A point where the expression is undefined but has a known limit, e.g. the
/// origin of -(x^2+y^2) sin(1/sqrt(x^2+y^2)). Matching is exact. For height
/// fields z is ignored.
struct RemovableSingularity {
    Vec3 point;
    double value;
};

struct CellSpec {
    CellKind kind = CellKind::ImplicitRegion;
    dsl::Expr expr = dsl::Expr::constant(0.0);
    SpatialDomain domain = Box{-2, 2, -2, 2, -2, 2};
    ParamMap params;
    double iso = 1.0;
    std::vector<RemovableSingularity> singularities;
};

inline void validate(const CellSpec& cell) {
    validate(cell.domain);
    if (cell.kind == CellKind::HeightField && dsl::uses_variable(cell.expr, dsl::Variable::Z))
        throw ValidationError("a height field expression may not reference z");
    for (const auto& name : dsl::free_params(cell.expr))
        if (!cell.params.contains(name)) throw UnboundParam(name);
    if (!std::isfinite(cell.iso)) throw ValidationError("iso value must be finite");
}

inline bool uses_time(const CellSpec& cell) { return dsl::uses_variable(cell.expr, dsl::Variable::T); }

inline void require_time(const CellSpec& cell, double t) {
    if (uses_time(cell) && !(t > 0.0)) throw TimeError(t);
}

namespace detail {

inline const RemovableSingularity* find_singularity(const CellSpec& cell, double x, double y, double z) {
    for (const auto& s : cell.singularities) {
        if (s.point.x == x && s.point.y == y && (cell.kind == CellKind::HeightField || s.point.z == z))
            return &s;
    }
    return nullptr;
}

}  // namespace detail

/// Field value at a point: f for implicit regions, g for height fields.
inline double field_value(const CellSpec& cell, double x, double y, double z, double t) {
    if (auto s = detail::find_singularity(cell, x, y, z)) return s->value;
    dsl::EvalContext ctx{x, y, z, t, cell.params};
    return dsl::evaluate(cell.expr, ctx);
}

struct Membership {
    bool inside = false;
    /// Set when the field was undefined at the point; such points are never members.
    bool domain_error = false;
    std::string diagnostic;

    explicit operator bool() const { return inside; }
};

/// Implicit region: p in D and f(p; t) <= iso.
/// Height field: the solid below the surface, p in D and z <= g(x, y; t).
inline Membership membership(const CellSpec& cell, Vec3 p, double t) {
    validate(cell);
    require_time(cell, t);
    if (!contains(cell.domain, p.x, p.y, p.z)) return {};
    try {
        const double v = field_value(cell, p.x, p.y, p.z, t);
        if (!std::isfinite(v)) return {false, true, "non-finite field value"};
        if (cell.kind == CellKind::HeightField) return {p.z <= v, false, {}};
        return {v <= cell.iso, false, {}};
    } catch (const DomainError& e) {
        return {false, true, e.what()};
    }
}

// ---------------------------------------------------------------------------
// Sampling

/// Regular lattice of field values. Storage is row-major with x varying
/// fastest: index = (k * ny + j) * nx + i. Holes are NaN.
struct ScalarGrid {
    static constexpr double hole = std::numeric_limits<double>::quiet_NaN();

    int dimension = 2;
    std::array<std::size_t, 3> counts{2, 2, 1};
    std::array<double, 3> lo{0, 0, 0};
    std::array<double, 3> hi{1, 1, 0};
    double t = 1.0;
    std::vector<double> values;
    /// Lattice nodes that became holes because the field was undefined there
    /// (as opposed to lying outside the domain).
    std::size_t domain_error_count = 0;

    std::size_t nx() const { return counts[0]; }
    std::size_t ny() const { return counts[1]; }
    std::size_t nz() const { return counts[2]; }

    std::size_t index(std::size_t i, std::size_t j, std::size_t k = 0) const {
        return (k * counts[1] + j) * counts[0] + i;
    }

    /// coordinate(i) = min + i (max - min) / (n - 1)
    double coordinate(int axis, std::size_t i) const {
        const auto a = static_cast<std::size_t>(axis);
        return lo[a] + (static_cast<double>(i) * (hi[a] - lo[a])) / static_cast<double>(counts[a] - 1);
    }

    double at(std::size_t i, std::size_t j, std::size_t k = 0) const { return values[index(i, j, k)]; }
    static bool is_hole(double v) { return std::isnan(v); }
    std::size_t hole_count() const {
        std::size_t n = 0;
        for (double v : values) n += is_hole(v);
        return n;
    }
};

struct Resolution {
    std::size_t nx = 129;
    std::size_t ny = 129;
    std::size_t nz = 65;
};

inline constexpr std::size_t default_resolution_2d = 129;
inline constexpr std::size_t default_resolution_3d = 65;

inline Resolution default_resolution(CellKind kind) {
    return kind == CellKind::HeightField
               ? Resolution{default_resolution_2d, default_resolution_2d, 1}
               : Resolution{default_resolution_3d, default_resolution_3d, default_resolution_3d};
}

namespace detail {

inline void require_counts(std::initializer_list<std::size_t> counts) {
    for (auto n : counts)
        if (n < 2) throw ValidationError("grids need at least 2 samples per axis");
}

inline double sample_point(const CellSpec& cell, const dsl::Expr& bound, dsl::EvalContext& ctx,
                           std::size_t& errors) {
    if (auto s = find_singularity(cell, ctx.x, ctx.y, ctx.z)) return s->value;
    try {
        const double v = dsl::evaluate(bound, ctx);
        if (std::isfinite(v)) return v;
    } catch (const DomainError&) {
    }
    ++errors;
    return ScalarGrid::hole;
}

}  // namespace detail

inline ScalarGrid sample_heightfield(const CellSpec& cell, double t, std::size_t nx, std::size_t ny) {
    if (cell.kind != CellKind::HeightField)
        throw ValidationError("sample_heightfield needs a height-field cell");
    validate(cell);
    detail::require_counts({nx, ny});
    require_time(cell, t);

    const auto b = planar_bounds(cell.domain);
    ScalarGrid grid;
    grid.dimension = 2;
    grid.counts = {nx, ny, 1};
    grid.lo = {b.xmin, b.ymin, 0.0};
    grid.hi = {b.xmax, b.ymax, 0.0};
    grid.t = t;
    grid.values.resize(nx * ny);

    const dsl::Expr bound = dsl::bind(cell.expr, cell.params);
    dsl::EvalContext ctx{0.0, 0.0, 0.0, t, {}};
    for (std::size_t j = 0; j < ny; ++j) {
        ctx.y = grid.coordinate(1, j);
        for (std::size_t i = 0; i < nx; ++i) {
            ctx.x = grid.coordinate(0, i);
            grid.values[grid.index(i, j)] =
                contains(cell.domain, ctx.x, ctx.y, 0.0)
                    ? detail::sample_point(cell, bound, ctx, grid.domain_error_count)
                    : ScalarGrid::hole;
        }
    }
    return grid;
}

inline ScalarGrid sample_volume(const CellSpec& cell, double t, std::size_t nx, std::size_t ny,
                                std::size_t nz) {
    if (cell.kind != CellKind::ImplicitRegion)
        throw ValidationError("sample_volume needs an implicit-region cell");
    validate(cell);
    const auto* box = std::get_if<Box>(&cell.domain);
    if (!box) throw ValidationError("volume sampling needs a box domain");
    detail::require_counts({nx, ny, nz});
    require_time(cell, t);

    ScalarGrid grid;
    grid.dimension = 3;
    grid.counts = {nx, ny, nz};
    grid.lo = {box->xmin, box->ymin, box->zmin};
    grid.hi = {box->xmax, box->ymax, box->zmax};
    grid.t = t;
    grid.values.resize(nx * ny * nz);

    const dsl::Expr bound = dsl::bind(cell.expr, cell.params);
    dsl::EvalContext ctx{0.0, 0.0, 0.0, t, {}};
    for (std::size_t k = 0; k < nz; ++k) {
        ctx.z = grid.coordinate(2, k);
        for (std::size_t j = 0; j < ny; ++j) {
            ctx.y = grid.coordinate(1, j);
            for (std::size_t i = 0; i < nx; ++i) {
                ctx.x = grid.coordinate(0, i);
                grid.values[grid.index(i, j, k)] =
                    detail::sample_point(cell, bound, ctx, grid.domain_error_count);
            }
        }
    }
    return grid;
}

/// Samples according to the cell kind.
inline ScalarGrid sample(const CellSpec& cell, double t, const Resolution& res) {
    return cell.kind == CellKind::HeightField ? sample_heightfield(cell, t, res.nx, res.ny)
                                              : sample_volume(cell, t, res.nx, res.ny, res.nz);
}

/// Grids at explicitly chosen instants.
inline std::vector<ScalarGrid> time_sweep(const CellSpec& cell, std::span<const double> instants,
                                          const Resolution& res) {
    std::vector<ScalarGrid> grids;
    grids.reserve(instants.size());
    for (double t : instants) {
        if (!(t > 0.0)) throw TimeError(t);
        grids.push_back(sample(cell, t, res));
    }
    return grids;
}

/// `steps` grids at instants linearly spaced over [t_start, t_end], both ends included.
inline std::vector<ScalarGrid> time_sweep(const CellSpec& cell, double t_start, double t_end,
                                          std::size_t steps, const Resolution& res) {
    if (!(t_start > 0.0)) throw TimeError(t_start);
    if (!(t_end >= t_start)) throw ValidationError("time sweep needs t_start <= t_end");
    if (steps < 1) throw ValidationError("time sweep needs at least one step");
    std::vector<double> instants(steps);
    for (std::size_t s = 0; s < steps; ++s) {
        instants[s] = steps == 1 ? t_start
                                 : t_start + (static_cast<double>(s) * (t_end - t_start)) /
                                                 static_cast<double>(steps - 1);
    }
    if (steps > 1) instants.back() = t_end;
    return time_sweep(cell, instants, res);
}

}  // namespace geometry
}  // namespace morphocell
