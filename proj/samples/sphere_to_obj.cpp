// Meshes the unit sphere x^2 + y^2 + z^2 <= 1 and prints it as OBJ.
//
//   sphere_to_obj [samples-per-axis] > sphere.obj

#include <cstdlib>
#include <iostream>

#include "morphocell/morphocell.hpp"

int main(int argc, char** argv) {
    using namespace morphocell;
    const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 49;

    geometry::CellSpec cell;
    cell.kind = geometry::CellKind::ImplicitRegion;
    cell.expr = dsl::parse("x^2 + y^2 + z^2");
    cell.domain = geometry::Box{-1.5, 1.5, -1.5, 1.5, -1.5, 1.5};
    cell.iso = 1.0;

    try {
        const Mesh mesh = mesh_cell(cell, 1.0, {n, n, n});
        std::cerr << mesh.vertices.size() << " vertices, " << mesh.triangles.size()
                  << " triangles, area " << mesh.area() << '\n';
        io::write_obj(mesh, std::cout);
    } catch (const Error& e) {
        std::cerr << e.code() << ": " << e.what() << '\n';
        return 1;
    }
}
