#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

#include "morphocell/error.hpp"
#include "morphocell/geometry.hpp"

namespace morphocell {

using Triangle = std::array<std::uint32_t, 3>;

struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;
    /// Optional; empty or one per vertex.
    std::vector<Vec3> normals;

    bool empty() const { return triangles.empty(); }

    double area() const {
        double total = 0.0;
        for (const auto& t : triangles) {
            const Vec3 a = vertices[t[0]], b = vertices[t[1]], c = vertices[t[2]];
            total += 0.5 * norm(cross(b - a, c - a));
        }
        return total;
    }
};

struct Contour {
    std::vector<Polyline> polylines;

    bool empty() const { return polylines.empty(); }
    double length() const {
        double total = 0.0;
        for (const auto& p : polylines) total += p.length();
        return total;
    }
};

namespace mesher {

// ---------------------------------------------------------------------------
// Validation

struct MeshReport {
    std::size_t index_out_of_range = 0;
    std::size_t degenerate_triangles = 0;  // a vertex index repeated within a triangle
    std::size_t non_finite_vertices = 0;
    std::size_t boundary_edges = 0;        // edges used by exactly one triangle
    std::size_t non_manifold_edges = 0;    // edges used by more than two triangles
    std::size_t inconsistent_orientation_edges = 0;
    std::size_t clockwise_from_above = 0;  // triangles not counterclockwise seen from +z

    /// True when the hard mesh invariants hold (indices, degeneracy, finiteness).
    bool valid() const {
        return index_out_of_range == 0 && degenerate_triangles == 0 && non_finite_vertices == 0;
    }
};

inline MeshReport validate_mesh(const Mesh& mesh) {
    MeshReport report;
    for (const auto& v : mesh.vertices)
        if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z)) ++report.non_finite_vertices;

    const auto n = mesh.vertices.size();
    // undirected edge -> (uses, uses in the (lo, hi) direction)
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::pair<int, int>> edges;
    for (const auto& t : mesh.triangles) {
        if (t[0] >= n || t[1] >= n || t[2] >= n) {
            ++report.index_out_of_range;
            continue;
        }
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
            ++report.degenerate_triangles;
            continue;
        }
        const Vec3 a = mesh.vertices[t[0]], b = mesh.vertices[t[1]], c = mesh.vertices[t[2]];
        if ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x) <= 0.0) ++report.clockwise_from_above;
        for (int e = 0; e < 3; ++e) {
            const auto u = t[e], w = t[(e + 1) % 3];
            auto& entry = edges[{std::min(u, w), std::max(u, w)}];
            ++entry.first;
            entry.second += u < w;
        }
    }
    for (const auto& [edge, use] : edges) {
        if (use.first == 1) ++report.boundary_edges;
        if (use.first > 2) ++report.non_manifold_edges;
        if (use.first == 2 && use.second != 1) ++report.inconsistent_orientation_edges;
    }
    return report;
}

/// Area-weighted vertex normals.
inline void compute_vertex_normals(Mesh& mesh) {
    mesh.normals.assign(mesh.vertices.size(), Vec3{});
    for (const auto& t : mesh.triangles) {
        const Vec3 a = mesh.vertices[t[0]], b = mesh.vertices[t[1]], c = mesh.vertices[t[2]];
        const Vec3 n = cross(b - a, c - a);
        for (auto i : t) mesh.normals[i] = mesh.normals[i] + n;
    }
    for (auto& n : mesh.normals) {
        const double len = norm(n);
        if (len > 0.0) n = (1.0 / len) * n;
    }
}

// ---------------------------------------------------------------------------
// Height fields

/// Two triangles per lattice cell whose four corners are all samples, split
/// along the lower-left to upper-right diagonal and wound counterclockwise
/// seen from +z. Only vertices used by some triangle are emitted, in lattice
/// order.
inline Mesh triangulate_heightfield(const geometry::ScalarGrid& grid) {
    if (grid.dimension != 2) throw ValidationError("triangulate_heightfield needs a 2D grid");
    const std::size_t nx = grid.nx(), ny = grid.ny();
    const auto complete = [&](std::size_t i, std::size_t j) {
        return !geometry::ScalarGrid::is_hole(grid.at(i, j)) &&
               !geometry::ScalarGrid::is_hole(grid.at(i + 1, j)) &&
               !geometry::ScalarGrid::is_hole(grid.at(i, j + 1)) &&
               !geometry::ScalarGrid::is_hole(grid.at(i + 1, j + 1));
    };

    constexpr auto unused = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> ids(nx * ny, unused);
    for (std::size_t j = 0; j + 1 < ny; ++j)
        for (std::size_t i = 0; i + 1 < nx; ++i)
            if (complete(i, j))
                for (auto idx : {grid.index(i, j), grid.index(i + 1, j), grid.index(i, j + 1),
                                 grid.index(i + 1, j + 1)})
                    ids[idx] = 0;

    Mesh mesh;
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const auto idx = grid.index(i, j);
            if (ids[idx] == unused) continue;
            ids[idx] = static_cast<std::uint32_t>(mesh.vertices.size());
            mesh.vertices.push_back({grid.coordinate(0, i), grid.coordinate(1, j), grid.values[idx]});
        }
    }
    if (mesh.vertices.empty()) throw EmptyMesh("height field has no complete lattice cell");

    for (std::size_t j = 0; j + 1 < ny; ++j) {
        for (std::size_t i = 0; i + 1 < nx; ++i) {
            if (!complete(i, j)) continue;
            const auto v00 = ids[grid.index(i, j)], v10 = ids[grid.index(i + 1, j)];
            const auto v01 = ids[grid.index(i, j + 1)], v11 = ids[grid.index(i + 1, j + 1)];
            mesh.triangles.push_back({v00, v10, v11});
            mesh.triangles.push_back({v00, v11, v01});
        }
    }
    return mesh;
}

/// Closes a height-field mesh sampled over a disc so that its outer boundary
/// lies on the disc rim: every outer boundary vertex is projected radially
/// onto the circle, evaluated with `height`, and joined by a ring of triangles.
inline void close_disc_rim(Mesh& mesh, const geometry::Disc& disc,
                           const std::function<double(double, double)>& height) {
    // Directed boundary edges; interior lies to their left.
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> directed;
    for (const auto& t : mesh.triangles)
        for (int e = 0; e < 3; ++e) ++directed[{t[e], t[(e + 1) % 3]}];
    std::map<std::uint32_t, std::uint32_t> next;
    for (const auto& [edge, count] : directed)
        if (!directed.contains({edge.second, edge.first})) next[edge.first] = edge.second;

    // Pick the loop enclosing the largest positive area (the outer boundary).
    std::vector<std::uint32_t> outer;
    double outer_area = 0.0;
    std::map<std::uint32_t, bool> seen;
    for (const auto& [start, unused_next] : next) {
        if (seen[start]) continue;
        std::vector<std::uint32_t> loop;
        auto v = start;
        while (!seen[v]) {
            seen[v] = true;
            loop.push_back(v);
            auto it = next.find(v);
            if (it == next.end()) break;
            v = it->second;
        }
        double area = 0.0;
        for (std::size_t i = 0; i < loop.size(); ++i) {
            const Vec3 a = mesh.vertices[loop[i]], b = mesh.vertices[loop[(i + 1) % loop.size()]];
            area += a.x * b.y - b.x * a.y;
        }
        if (area > outer_area) {
            outer_area = area;
            outer = std::move(loop);
        }
    }
    if (outer.size() < 3) return;

    std::vector<std::uint32_t> rim(outer.size());
    for (std::size_t i = 0; i < outer.size(); ++i) {
        const Vec3 p = mesh.vertices[outer[i]];
        const double dx = p.x - disc.cx, dy = p.y - disc.cy;
        const double r = std::hypot(dx, dy);
        if (r == 0.0) return;
        const double x = disc.cx + disc.radius * (dx / r);
        const double y = disc.cy + disc.radius * (dy / r);
        rim[i] = static_cast<std::uint32_t>(mesh.vertices.size());
        mesh.vertices.push_back({x, y, height(x, y)});
    }
    const auto add = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
        const Vec3 pa = mesh.vertices[a], pb = mesh.vertices[b], pc = mesh.vertices[c];
        if ((pb.x - pa.x) * (pc.y - pa.y) - (pb.y - pa.y) * (pc.x - pa.x) > 0.0)
            mesh.triangles.push_back({a, b, c});
    };
    for (std::size_t i = 0; i < outer.size(); ++i) {
        const std::size_t k = (i + 1) % outer.size();
        // boundary edge a -> b has the ring on its right
        add(outer[k], outer[i], rim[i]);
        add(outer[k], rim[i], rim[k]);
    }
}

// ---------------------------------------------------------------------------
// Shared lattice-edge interpolation

namespace detail {

// Vertex identity: a lattice edge (node index, axis) or, when the crossing
// falls exactly on a node, the node itself.
inline std::uint64_t edge_key(std::size_t node, int axis) { return (std::uint64_t(node) << 2) | unsigned(axis); }
inline std::uint64_t node_key(std::size_t node) { return (std::uint64_t(node) << 2) | 3u; }

struct Crossing {
    std::uint64_t key;
    double t;          // fraction from the below node towards the above node
    bool below_first;  // whether the edge's lower-index endpoint is the below node
};

// Corners are "above" when value >= iso; crossings interpolate from the below
// corner so that a corner exactly at iso yields that corner's coordinates.
inline Crossing crossing(double f_first, double f_second, std::size_t first_node,
                         std::size_t second_node, int axis, double iso) {
    const bool below_first = f_first < iso;
    const double fb = below_first ? f_first : f_second;
    const double fa = below_first ? f_second : f_first;
    if (fa == iso) return {node_key(below_first ? second_node : first_node), 1.0, below_first};
    return {edge_key(first_node, axis), (iso - fb) / (fa - fb), below_first};
}

inline double lerp(double a, double b, double t) { return (1.0 - t) * a + t * b; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Marching squares

/// Contour of the level set value == iso. Segments are oriented with the
/// region below iso on their left, so closed loops around a minimum run
/// counterclockwise. A saddle cell joins its below-iso corners when the
/// cell's average is below iso and separates them otherwise. Cells touching
/// a hole produce nothing.
inline Contour extract_isocontour(const geometry::ScalarGrid& grid, double iso) {
    if (grid.dimension != 2) throw ValidationError("extract_isocontour needs a 2D grid");
    const std::size_t nx = grid.nx(), ny = grid.ny();

    std::unordered_map<std::uint64_t, Vec2> points;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> segments;

    // Cell corners counterclockwise from the lower-left.
    constexpr std::array<std::array<int, 2>, 4> corner{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
    for (std::size_t j = 0; j + 1 < ny; ++j) {
        for (std::size_t i = 0; i + 1 < nx; ++i) {
            std::array<double, 4> f{};
            std::array<std::size_t, 4> node{};
            bool hole = false;
            int above = 0;
            for (int c = 0; c < 4; ++c) {
                node[c] = grid.index(i + corner[c][0], j + corner[c][1]);
                f[c] = grid.values[node[c]];
                hole |= geometry::ScalarGrid::is_hole(f[c]);
                above += f[c] >= iso;
            }
            if (hole || above == 0 || above == 4) continue;

            // Walk the boundary counterclockwise recording crossings.
            struct Hit { std::uint64_t key; bool exits_below; };
            std::array<Hit, 4> hits{};
            int count = 0;
            for (int c = 0; c < 4; ++c) {
                const int d = (c + 1) % 4;
                const bool below_c = f[c] < iso, below_d = f[d] < iso;
                if (below_c == below_d) continue;
                // Orient the lattice edge from its lower-index node.
                const bool forward = node[c] < node[d];
                const int a = forward ? c : d, b = forward ? d : c;
                const int axis = corner[a][0] != corner[b][0] ? 0 : 1;
                const auto x = detail::crossing(f[a], f[b], node[a], node[b], axis, iso);
                if (!points.contains(x.key)) {
                    const int lb = x.below_first ? a : b, la = x.below_first ? b : a;
                    const double xb = grid.coordinate(0, i + corner[lb][0]);
                    const double yb = grid.coordinate(1, j + corner[lb][1]);
                    const double xa = grid.coordinate(0, i + corner[la][0]);
                    const double ya = grid.coordinate(1, j + corner[la][1]);
                    points.emplace(x.key, Vec2{detail::lerp(xb, xa, x.t), detail::lerp(yb, ya, x.t)});
                }
                hits[count++] = {x.key, below_c};
            }

            bool join_below = false;
            if (count == 4) join_below = (f[0] + f[1] + f[2] + f[3]) / 4.0 < iso;
            for (int h = 0; h < count; ++h) {
                if (!hits[h].exits_below) continue;
                // Link to the previous entry crossing, or the next one when
                // the below corners of a saddle are joined.
                const int partner = join_below ? (h + 1) % count : (h + count - 1) % count;
                if (hits[h].key != hits[partner].key) segments.emplace_back(hits[h].key, hits[partner].key);
            }
        }
    }

    // Chain segments into polylines: open chains first, then loops.
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> outgoing;
    std::unordered_map<std::uint64_t, int> incoming;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        outgoing[segments[s].first].push_back(s);
        ++incoming[segments[s].second];
    }
    std::vector<bool> used(segments.size(), false);
    Contour contour;
    const auto walk = [&](std::size_t first) {
        std::vector<std::uint64_t> keys{segments[first].first};
        std::size_t s = first;
        while (true) {
            used[s] = true;
            const auto end = segments[s].second;
            keys.push_back(end);
            auto it = outgoing.find(end);
            std::size_t next = segments.size();
            if (it != outgoing.end())
                for (auto cand : it->second)
                    if (!used[cand]) {
                        next = cand;
                        break;
                    }
            if (next == segments.size()) break;
            s = next;
        }
        Polyline line;
        line.closed = keys.size() > 2 && keys.front() == keys.back();
        if (line.closed) keys.pop_back();
        for (auto k : keys) {
            const Vec2 p = points.at(k);
            if (line.points.empty() || !(line.points.back() == p)) line.points.push_back(p);
        }
        if (line.closed && line.points.size() > 1 && line.points.front() == line.points.back())
            line.points.pop_back();
        if (line.closed ? line.points.size() >= 3 : line.points.size() >= 2)
            contour.polylines.push_back(std::move(line));
    };
    for (std::size_t s = 0; s < segments.size(); ++s)
        if (!used[s] && !incoming.contains(segments[s].first)) walk(s);
    for (std::size_t s = 0; s < segments.size(); ++s)
        if (!used[s]) walk(s);
    return contour;
}

// ---------------------------------------------------------------------------
// Marching cubes

namespace detail {

// Corner c of a cube sits at offset (c & 1, (c >> 1) & 1, (c >> 2) & 1).
// Faces list their corners counterclockwise seen from outside the cube.
inline constexpr std::array<std::array<int, 4>, 6> cube_faces{{
    {0, 4, 6, 2},  // -x
    {1, 3, 7, 5},  // +x
    {0, 1, 5, 4},  // -y
    {2, 6, 7, 3},  // +y
    {0, 2, 3, 1},  // -z
    {4, 5, 7, 6},  // +z
}};

// Local id (below cube_edge_ids) for the edge between corners a and b, which
// differ in one bit. Only 12 of the ids are used.
inline constexpr int cube_edge_ids = 24;
inline int cube_edge(int a, int b) {
    const int lo = std::min(a, b);
    const int axis = (a ^ b) == 1 ? 0 : (a ^ b) == 2 ? 1 : 2;
    return lo * 3 + axis;
}

}  // namespace detail

/// Closed-manifold isosurface of value == iso, oriented with normals pointing
/// towards increasing values. Each cube face is split like a marching-squares
/// cell (saddles decided by the face average), so neighbouring cubes always
/// agree on shared faces; the resulting boundary loops inside each cube are
/// fan-triangulated. Vertices lie on lattice edges and are shared between
/// cubes. Cubes touching a hole are skipped.
inline Mesh extract_isosurface(const geometry::ScalarGrid& grid, double iso) {
    if (grid.dimension != 3) throw ValidationError("extract_isosurface needs a 3D grid");
    const std::size_t nx = grid.nx(), ny = grid.ny(), nz = grid.nz();

    Mesh mesh;
    std::unordered_map<std::uint64_t, std::uint32_t> ids;

    for (std::size_t k = 0; k + 1 < nz; ++k) {
        for (std::size_t j = 0; j + 1 < ny; ++j) {
            for (std::size_t i = 0; i + 1 < nx; ++i) {
                std::array<double, 8> f{};
                std::array<std::size_t, 8> node{};
                bool hole = false;
                int above = 0;
                for (int c = 0; c < 8; ++c) {
                    node[c] = grid.index(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1));
                    f[c] = grid.values[node[c]];
                    hole |= geometry::ScalarGrid::is_hole(f[c]);
                    above += f[c] >= iso;
                }
                if (hole || above == 0 || above == 8) continue;

                // Vertex id per local cube edge, created on demand.
                std::array<std::int64_t, detail::cube_edge_ids> vertex;
                vertex.fill(-1);
                const auto vertex_on = [&](int a, int b) -> std::uint32_t {
                    const int e = detail::cube_edge(a, b);
                    if (vertex[e] >= 0) return static_cast<std::uint32_t>(vertex[e]);
                    const int lo = std::min(a, b), hi = std::max(a, b);
                    const int axis = e % 3;
                    const auto x = detail::crossing(f[lo], f[hi], node[lo], node[hi], axis, iso);
                    auto [it, inserted] = ids.try_emplace(x.key, static_cast<std::uint32_t>(mesh.vertices.size()));
                    if (inserted) {
                        const int cb = x.below_first ? lo : hi, ca = x.below_first ? hi : lo;
                        const auto coord = [&](int c, int ax) {
                            const std::size_t base = ax == 0 ? i : ax == 1 ? j : k;
                            return grid.coordinate(ax, base + ((c >> ax) & 1));
                        };
                        mesh.vertices.push_back({detail::lerp(coord(cb, 0), coord(ca, 0), x.t),
                                                 detail::lerp(coord(cb, 1), coord(ca, 1), x.t),
                                                 detail::lerp(coord(cb, 2), coord(ca, 2), x.t)});
                    }
                    vertex[e] = it->second;
                    return it->second;
                };

                // next[e] = following local edge along the surface boundary loop.
                std::array<int, detail::cube_edge_ids> next;
                next.fill(-1);
                for (const auto& face : detail::cube_faces) {
                    struct Hit { int edge; bool exits_below; };
                    std::array<Hit, 4> hits{};
                    int count = 0;
                    double sum = 0.0;
                    for (int c = 0; c < 4; ++c) {
                        const int a = face[c], b = face[(c + 1) % 4];
                        sum += f[a];
                        const bool below_a = f[a] < iso, below_b = f[b] < iso;
                        if (below_a == below_b) continue;
                        vertex_on(a, b);
                        hits[count++] = {detail::cube_edge(a, b), below_a};
                    }
                    const bool join_below = count == 4 && sum / 4.0 < iso;
                    for (int h = 0; h < count; ++h) {
                        if (!hits[h].exits_below) continue;
                        const int partner = join_below ? (h + 1) % count : (h + count - 1) % count;
                        next[hits[h].edge] = hits[partner].edge;
                    }
                }

                std::array<bool, detail::cube_edge_ids> visited{};
                for (int start = 0; start < detail::cube_edge_ids; ++start) {
                    if (next[start] < 0 || visited[start]) continue;
                    std::vector<std::uint32_t> loop;
                    for (int e = start; e >= 0 && !visited[e]; e = next[e]) {
                        visited[e] = true;
                        const auto v = static_cast<std::uint32_t>(vertex[e]);
                        if (loop.empty() || loop.back() != v) loop.push_back(v);
                    }
                    while (loop.size() > 1 && loop.front() == loop.back()) loop.pop_back();
                    // The face walk runs with the below region on the left, which
                    // orients the loop towards decreasing values; reverse the fan.
                    for (std::size_t q = 1; q + 1 < loop.size(); ++q) {
                        const Triangle tri{loop[0], loop[q + 1], loop[q]};
                        if (tri[0] != tri[1] && tri[1] != tri[2] && tri[0] != tri[2])
                            mesh.triangles.push_back(tri);
                    }
                }
            }
        }
    }
    if (mesh.triangles.empty()) throw EmptyMesh("iso value does not cross the sampled field");
    return mesh;
}

}  // namespace mesher
}  // namespace morphocell
