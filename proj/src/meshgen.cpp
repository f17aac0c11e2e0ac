#include "forgelight/meshgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace forgelight {

namespace {

double tet_signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).cross(c - a).dot(d - a) / 6.0;
}

void finalize_tets(Mesh& mesh) {
  mesh.kind = ElementKind::Tet4;
  mesh.dim = 3;
  mesh.element_volumes.resize(mesh.elements.size());
  for (int e = 0; e < mesh.element_count(); ++e) {
    auto& el = mesh.elements[static_cast<size_t>(e)];
    double v = tet_signed_volume(mesh.nodes[static_cast<size_t>(el[0])],
                                 mesh.nodes[static_cast<size_t>(el[1])],
                                 mesh.nodes[static_cast<size_t>(el[2])],
                                 mesh.nodes[static_cast<size_t>(el[3])]);
    if (v < 0) {
      std::swap(el[2], el[3]);
      v = -v;
    }
    mesh.element_volumes[static_cast<size_t>(e)] = v;
  }
}

// Kuhn/Freudenthal 6-tet split of the unit cube with corners indexed by
// bit code (x | y<<1 | z<<2). All six share the main diagonal 0-7.
constexpr int kCubeTets[6][4] = {
    {0, 1, 3, 7}, {0, 3, 2, 7}, {0, 2, 6, 7}, {0, 6, 4, 7}, {0, 4, 5, 7}, {0, 5, 1, 7}};

}  // namespace

Mesh make_cube_tets(double size) {
  Mesh mesh;
  for (int z = 0; z <= 1; ++z)
    for (int y = 0; y <= 1; ++y)
      for (int x = 0; x <= 1; ++x)
        mesh.nodes.push_back(Vec3(x * size, y * size, z * size));
  auto id = [](int code) {  // bit code -> node id in the loop order above
    int x = code & 1, y = (code >> 1) & 1, z = (code >> 2) & 1;
    return z * 4 + y * 2 + x;
  };
  for (const auto& t : kCubeTets)
    mesh.elements.push_back({id(t[0]), id(t[1]), id(t[2]), id(t[3])});
  finalize_tets(mesh);
  return mesh;
}

Mesh make_voxel_box(int cx, int cy, int cz, double h,
                    const std::function<bool(int, int, int)>& keep) {
  Mesh mesh;
  std::map<std::array<int, 3>, int> node_ids;
  auto node = [&](int x, int y, int z) {
    std::array<int, 3> key{x, y, z};
    auto it = node_ids.find(key);
    if (it != node_ids.end()) return it->second;
    int id = static_cast<int>(mesh.nodes.size());
    mesh.nodes.push_back(Vec3(x * h, y * h, z * h));
    node_ids.emplace(key, id);
    return id;
  };
  for (int x = 0; x < cx; ++x) {
    for (int y = 0; y < cy; ++y) {
      for (int z = 0; z < cz; ++z) {
        if (keep && !keep(x, y, z)) continue;
        int corner[8];
        for (int code = 0; code < 8; ++code)
          corner[code] = node(x + (code & 1), y + ((code >> 1) & 1), z + ((code >> 2) & 1));
        for (const auto& t : kCubeTets)
          mesh.elements.push_back({corner[t[0]], corner[t[1]], corner[t[2]], corner[t[3]]});
      }
    }
  }
  finalize_tets(mesh);
  return mesh;
}

Mesh make_two_neck_bar(const TwoNeckSpec& s) {
  auto keep = [&](int x, int y, int /*z*/) {
    bool in_a = x >= s.neck_a_start && x < s.neck_a_start + s.neck_a_width;
    bool in_b = x >= s.neck_b_start && x < s.neck_b_start + s.neck_b_width;
    if (in_a) return y >= s.height - s.neck_a_thickness;
    if (in_b) return y >= s.height - s.neck_b_thickness;
    return true;
  };
  return make_voxel_box(s.length, s.height, s.depth, s.cell, keep);
}

Mesh make_l_bracket(int leg, int foot, int thickness, int depth, double cell) {
  auto keep = [&](int x, int y, int /*z*/) {
    return (x < thickness) || (y < thickness && x < foot);
  };
  return make_voxel_box(foot, leg, depth, cell, keep);
}

Mesh make_icosphere(int subdivisions) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> verts = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
      {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : verts) v.normalize();
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 m = (verts[static_cast<size_t>(a)] + verts[static_cast<size_t>(b)]).normalized();
      int id = static_cast<int>(verts.size());
      verts.push_back(m);
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    for (const auto& f : faces) {
      int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
    }
    faces = std::move(next);
  }
  Mesh mesh;
  mesh.kind = ElementKind::Tri3;
  mesh.dim = 3;
  mesh.nodes = std::move(verts);
  for (const auto& f : faces) mesh.elements.push_back({f[0], f[1], f[2], -1});
  mesh.element_volumes.resize(mesh.elements.size());
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto& el = mesh.elements[static_cast<size_t>(e)];
    const Vec3& a = mesh.nodes[static_cast<size_t>(el[0])];
    const Vec3& b = mesh.nodes[static_cast<size_t>(el[1])];
    const Vec3& c = mesh.nodes[static_cast<size_t>(el[2])];
    mesh.element_volumes[static_cast<size_t>(e)] = 0.5 * (b - a).cross(c - a).norm();
  }
  return mesh;
}

SurfaceRegion resolve_region(const Mesh& mesh, const Json& spec, SurfaceRegion::Kind kind) {
  const Surface& s = mesh.surface();
  SurfaceRegion region;
  region.kind = kind;

  auto apply_rule = [&](const Json& rule) {
    require_keys_subset(rule, "region rule", {"axis", "min", "max"});
    std::string axis = require_string(rule, "region rule", "axis");
    int ax = axis == "x" ? 0 : axis == "y" ? 1 : axis == "z" ? 2 : -1;
    if (ax < 0) throw ConfigError("region rule: axis must be x, y or z");
    double lo = number_or(rule, "min", -std::numeric_limits<double>::infinity());
    double hi = number_or(rule, "max", std::numeric_limits<double>::infinity());
    for (int v : s.node_ids) {
      double c = mesh.nodes[static_cast<size_t>(v)][ax];
      if (c >= lo && c <= hi) region.node_ids.push_back(v);
    }
  };

  if (spec.is_array() && (spec.empty() || spec[0].is_number_integer())) {
    for (const auto& v : spec) {
      int id = v.get<int>();
      if (!s.contains(id))
        throw ConfigError("region: node " + std::to_string(id) + " is not a boundary node");
      region.node_ids.push_back(id);
    }
  } else if (spec.is_array()) {
    for (const auto& rule : spec) apply_rule(rule);
  } else if (spec.is_object()) {
    apply_rule(spec);
  } else {
    throw ConfigError("region: expected node array or {axis,min,max} rule(s)");
  }
  std::sort(region.node_ids.begin(), region.node_ids.end());
  region.node_ids.erase(std::unique(region.node_ids.begin(), region.node_ids.end()),
                        region.node_ids.end());
  return region;
}

}  // namespace forgelight
