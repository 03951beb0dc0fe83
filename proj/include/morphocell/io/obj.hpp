#pragma once

#include <cstddef>
#include <ostream>
#include <string>

#include "morphocell/error.hpp"
#include "morphocell/io/format.hpp"
#include "morphocell/mesher.hpp"

namespace morphocell::io {

/// ASCII Wavefront OBJ: all "v x y z" lines, then "f i j k" lines with
/// 1-based indices. Coordinates use 9 significant digits so output is
/// byte-stable. Returns the number of bytes written.
inline std::size_t write_obj(const Mesh& mesh, std::ostream& sink) {
    if (mesh.empty()) throw EmptyMesh("refusing to write an empty OBJ");
    if (!mesher::validate_mesh(mesh).valid()) throw ValidationError("mesh violates its invariants");

    std::string out;
    out.reserve(mesh.vertices.size() * 40 + mesh.triangles.size() * 24);
    for (const auto& v : mesh.vertices) {
        out += "v ";
        out += format_fixed(v.x);
        out += ' ';
        out += format_fixed(v.y);
        out += ' ';
        out += format_fixed(v.z);
        out += '\n';
    }
    for (const auto& t : mesh.triangles) {
        out += "f ";
        out += std::to_string(t[0] + 1);
        out += ' ';
        out += std::to_string(t[1] + 1);
        out += ' ';
        out += std::to_string(t[2] + 1);
        out += '\n';
    }
    sink.write(out.data(), static_cast<std::streamsize>(out.size()));
    sink.flush();
    if (!sink) throw SinkError("failed to write OBJ output");
    return out.size();
}

}  // namespace morphocell::io
