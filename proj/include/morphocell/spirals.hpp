#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "morphocell/error.hpp"
#include "morphocell/geometry.hpp"

namespace morphocell {

/// Axis-aligned square, `origin` is its lower-left corner.
struct Square {
    Vec2 origin;
    double side = 0.0;
    std::size_t index = 0;

    bool operator==(const Square&) const = default;
};

/// (cos a, sin a), exact when a is within rounding of a multiple of a quarter turn.
inline Vec2 unit_direction(double angle) {
    const double quarter = std::numbers::pi / 2;
    const double q = std::nearbyint(angle / quarter);
    if (std::fabs(angle - q * quarter) <= 8 * std::numeric_limits<double>::epsilon() * std::fabs(angle)) {
        constexpr std::array<Vec2, 4> dirs{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
        const auto k = static_cast<long long>(q);
        return dirs[static_cast<std::size_t>(((k % 4) + 4) % 4)];
    }
    return {std::cos(angle), std::sin(angle)};
}

/// Circular arc; angles in radians, counterclockwise when end > start.
struct Arc {
    Vec2 center;
    double radius = 0.0;
    double start_angle = 0.0;
    double end_angle = 0.0;

    Vec2 point(double angle) const { return center + radius * unit_direction(angle); }
    Vec2 start() const { return point(start_angle); }
    Vec2 end() const { return point(end_angle); }
    /// Unit tangent in the direction of travel.
    Vec2 tangent(double angle) const {
        const double s = end_angle >= start_angle ? 1.0 : -1.0;
        const Vec2 u = unit_direction(angle);
        return {-s * u.y, s * u.x};
    }
};

struct ArcChain {
    std::vector<Arc> arcs;

    double total_turning() const {
        double total = 0.0;
        for (const auto& a : arcs) total += std::fabs(a.end_angle - a.start_angle);
        return total;
    }

    ArcChain translated(Vec2 offset) const {
        ArcChain out = *this;
        for (auto& a : out.arcs) a.center = a.center + offset;
        return out;
    }
};

namespace spirals {

inline constexpr double phi = std::numbers::phi;
/// Growth constant that makes the logarithmic spiral grow by phi per quarter turn.
inline constexpr double golden_b = 2.0 / std::numbers::pi;

struct SpiralSpec {
    double b = golden_b;
    double t = 1.0;
    double theta_start = 0.0;
    double theta_end = 4.0 * std::numbers::pi;
    std::size_t samples = 721;

    /// Samples chosen so the spacing is as close to `step` as the range allows.
    static SpiralSpec with_step(double b, double t, double theta_start, double theta_end, double step) {
        const auto intervals = static_cast<std::size_t>(std::llround((theta_end - theta_start) / step));
        return {b, t, theta_start, theta_end, intervals + 1};
    }

    double theta(std::size_t i) const {
        return theta_start + (static_cast<double>(i) * (theta_end - theta_start)) /
                                 static_cast<double>(samples - 1);
    }
};

inline void validate(const SpiralSpec& spec) {
    if (!(spec.t > 0.0)) throw TimeError(spec.t);
    if (!(spec.theta_start < spec.theta_end)) throw ValidationError("spiral needs theta_start < theta_end");
    if (spec.samples < 2) throw ValidationError("spiral needs at least 2 samples");
    if (!std::isfinite(spec.b)) throw ValidationError("spiral growth constant must be finite");
}

/// 1, 1, 2, 3, 5, ... (n terms).
inline std::vector<std::uint64_t> fibonacci_numbers(std::size_t n) {
    std::vector<std::uint64_t> out;
    out.reserve(n);
    std::uint64_t a = 1, b = 1;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(a);
        const auto c = a + b;
        a = b;
        b = c;
    }
    return out;
}

/// Squares with Fibonacci sides. The first is [0,1]^2; each later square is
/// attached to the current bounding rectangle, cycling right, up, left, down.
/// After n squares the union is an F(n) x F(n+1) rectangle.
inline std::vector<Square> fibonacci_squares(std::size_t n) {
    if (n < 1) throw ValidationError("fibonacci_squares needs n >= 1");
    const auto sides = fibonacci_numbers(n);
    std::vector<Square> squares;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    squares.push_back({{0.0, 0.0}, 1.0, 0});
    for (std::size_t k = 1; k < n; ++k) {
        const auto s = static_cast<double>(sides[k]);
        Vec2 origin;
        switch ((k - 1) % 4) {
            case 0: origin = {xmax, ymin}; xmax += s; break;
            case 1: origin = {xmin, ymax}; ymax += s; break;
            case 2: origin = {xmin - s, ymin}; xmin -= s; break;
            default: origin = {xmin, ymin - s}; ymin -= s; break;
        }
        squares.push_back({origin, s, k});
    }
    return squares;
}

namespace detail {

// Exact unit directions for multiples of a quarter turn.
inline Vec2 quarter_direction(std::size_t q) {
    constexpr std::array<Vec2, 4> dirs{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
    return dirs[q % 4];
}

// Counterclockwise quarter arcs with the given radii. The first arc starts at
// angle pi around centre (r0, r0), so it is inscribed in [0, r0]^2; each
// further arc continues from the previous end point with a shared tangent.
inline ArcChain quarter_arc_chain(const std::vector<double>& radii) {
    ArcChain chain;
    Vec2 start{0.0, radii.empty() ? 0.0 : radii.front()};
    for (std::size_t k = 0; k < radii.size(); ++k) {
        const std::size_t q = k + 2;
        const double r = radii[k];
        const Vec2 center = start - r * quarter_direction(q);
        const double a0 = std::numbers::pi + static_cast<double>(k) * (std::numbers::pi / 2);
        chain.arcs.push_back({center, r, a0, a0 + std::numbers::pi / 2});
        start = center + r * quarter_direction(q + 1);
    }
    return chain;
}

}  // namespace detail

/// The square a quarter arc is inscribed in (its centre is one corner).
inline Square square_of_arc(const Arc& arc, std::size_t index = 0) {
    const Vec2 a = arc.start(), b = arc.end();
    const Vec2 far = a + b - arc.center;
    const double x0 = std::min({arc.center.x, a.x, b.x, far.x});
    const double y0 = std::min({arc.center.y, a.y, b.y, far.y});
    return {{x0, y0}, arc.radius, index};
}

/// One quarter arc per Fibonacci square, radius equal to the square side.
inline ArcChain fibonacci_spiral(std::size_t n) {
    if (n < 2) throw ValidationError("fibonacci_spiral needs n >= 2");
    std::vector<double> radii;
    for (auto f : fibonacci_numbers(n)) radii.push_back(static_cast<double>(f));
    return detail::quarter_arc_chain(radii);
}

/// Quarter arcs whose radii grow by exactly phi: scale, scale*phi, scale*phi^2, ...
inline ArcChain golden_spiral(std::size_t levels, double scale = 1.0) {
    if (levels < 2) throw ValidationError("golden_spiral needs levels >= 2");
    if (!(scale > 0.0)) throw ValidationError("golden_spiral needs a positive scale");
    std::vector<double> radii{scale};
    while (radii.size() < levels) radii.push_back(radii.back() * phi);
    return detail::quarter_arc_chain(radii);
}

/// r(theta; t) = phi^(b theta t). At t = 1 this is the Spira mirabilis; t
/// rescales the growth exponent, so r(theta; t) = r(theta; 1)^t.
inline double spiral_radius(double b, double t, double theta) { return std::pow(phi, b * theta * t); }

inline Polyline log_spiral(const SpiralSpec& spec) {
    validate(spec);
    Polyline line;
    line.points.reserve(spec.samples);
    for (std::size_t i = 0; i < spec.samples; ++i) {
        const double theta = spec.theta(i);
        const double r = spiral_radius(spec.b, spec.t, theta);
        line.points.push_back({r * std::cos(theta), r * std::sin(theta)});
    }
    return line;
}

/// Largest |dr/dtheta - b ln(phi) r| over interior samples, with dr/dtheta
/// taken by central differences on the sampled radii.
inline double ode_residual(const SpiralSpec& spec) {
    validate(spec);
    if (spec.t != 1.0) throw ValidationError("the growth equation holds for t = 1");
    if (spec.samples < 3) throw ValidationError("ode_residual needs at least 3 samples");
    const double rate = spec.b * std::log(phi);
    double worst = 0.0;
    double theta_prev = spec.theta(0), theta_cur = spec.theta(1);
    double r_prev = spiral_radius(spec.b, 1.0, theta_prev), r_cur = spiral_radius(spec.b, 1.0, theta_cur);
    for (std::size_t i = 1; i + 1 < spec.samples; ++i) {
        const double theta_next = spec.theta(i + 1);
        const double r_next = spiral_radius(spec.b, 1.0, theta_next);
        const double derivative = (r_next - r_prev) / (theta_next - theta_prev);
        worst = std::max(worst, std::fabs(derivative - rate * r_cur));
        theta_prev = theta_cur;
        theta_cur = theta_next;
        r_prev = r_cur;
        r_cur = r_next;
    }
    return worst;
}

/// |phi^(b atan2(y, x)) - sqrt(x^2 + y^2)|. The angle is the principal value
/// in (-pi, pi], so points past half a turn from theta = 0 deviate.
inline double implicit_spiral_check(Vec2 p, double b) {
    if (p.x == 0.0 && p.y == 0.0) throw OriginError();
    return std::fabs(std::pow(phi, b * std::atan2(p.y, p.x)) - std::hypot(p.x, p.y));
}

}  // namespace spirals
}  // namespace morphocell
