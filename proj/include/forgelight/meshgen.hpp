#ifndef FORGELIGHT_MESHGEN_HPP
#define FORGELIGHT_MESHGEN_HPP

#include <functional>

#include "forgelight/jsonio.hpp"
#include "forgelight/mesh.hpp"

namespace forgelight {

// Unit cube split into the classic 6-tet decomposition, scaled to `size`.
Mesh make_cube_tets(double size = 1.0);

// Axis-aligned voxel block of cx*cy*cz cells (cell edge h), each cell
// split into 6 tets. `keep` filters cells by integer coordinates; null
// keeps everything.
Mesh make_voxel_box(int cx, int cy, int cz, double h,
                    const std::function<bool(int, int, int)>& keep = nullptr);

// Bar with two notches carved from the bottom, leaving necks of
// different thicknesses. Lengths in cells.
struct TwoNeckSpec {
  int length = 48, height = 10, depth = 6;
  int neck_a_start = 10, neck_a_width = 4, neck_a_thickness = 4;
  int neck_b_start = 32, neck_b_width = 4, neck_b_thickness = 6;
  double cell = 1.0;
};
Mesh make_two_neck_bar(const TwoNeckSpec& spec);

// L-shaped bracket: vertical leg and horizontal foot.
Mesh make_l_bracket(int leg = 24, int foot = 24, int thickness = 8, int depth = 8,
                    double cell = 1.0);

// Subdivided icosahedron with all vertices on the unit sphere.
Mesh make_icosphere(int subdivisions);

// Region selectors: a JSON array of node ids, or {axis,min,max} rules
// (single object or array = union) against boundary node coordinates.
SurfaceRegion resolve_region(const Mesh& mesh, const Json& spec, SurfaceRegion::Kind kind);

}  // namespace forgelight

#endif
