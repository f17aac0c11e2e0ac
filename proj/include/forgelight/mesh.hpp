#ifndef FORGELIGHT_MESH_HPP
#define FORGELIGHT_MESH_HPP

#include <array>
#include <string>
#include <vector>

#include "forgelight/common.hpp"

namespace forgelight {

enum class ElementKind { Tet4, Quad4, Tri3 };

// Boundary surface of a volume mesh (or the mesh itself for surface
// input). Triangles are outward oriented. node_ids index into the parent
// mesh; triangles store parent node indices directly.
struct Surface {
  std::vector<int> node_ids;                    // sorted unique boundary nodes
  std::vector<std::array<int, 3>> triangles;    // parent node indices, outward CCW
  std::vector<std::vector<int>> adjacency;      // per boundary node: neighbor node ids
  std::vector<Vec3> node_normals;               // area-weighted, unit length
  std::vector<char> is_boundary;                // size n lookup

  bool contains(int node) const {
    return node >= 0 && node < static_cast<int>(is_boundary.size()) && is_boundary[node];
  }
};

// Immutable after construction; all queries are read-only.
class Mesh {
public:
  ElementKind kind = ElementKind::Tet4;
  int dim = 3;
  std::vector<Vec3> nodes;                      // z = 0 in 2D
  std::vector<std::array<int, 4>> elements;     // Tri3 uses entries [0..2], [3] = -1
  std::vector<double> element_volumes;          // area in 2D

  // Quad-grid metadata (set for grid meshes only).
  int grid_nx = 0, grid_ny = 0;
  double grid_cell = 1.0;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int element_count() const { return static_cast<int>(elements.size()); }
  double total_volume() const;
  Vec3 element_centroid(int e) const;
  void bounding_box(Vec3& lo, Vec3& hi) const;

  const Surface& surface() const;

  // Elements sharing a face (2D: an edge). Built lazily, cached.
  const std::vector<std::vector<int>>& element_adjacency() const;

private:
  mutable Surface surface_;
  mutable bool surface_built_ = false;
  mutable std::vector<std::vector<int>> elem_adj_;
  mutable bool elem_adj_built_ = false;
};

struct SurfaceRegion {
  enum class Kind { Contact, Fixed, ForceRegion, WeakProjection };
  Kind kind = Kind::Contact;
  std::vector<int> node_ids;  // sorted unique, all on the boundary surface
};

struct ShellMask {
  std::vector<int> element_ids;  // sorted unique
  double thickness = 0.0;
  std::vector<char> in_mask;     // size m lookup

  bool contains(int e) const { return in_mask[static_cast<size_t>(e)] != 0; }
};

enum class MeshFormat { OffSurface, TetgenVolume, QuadGrid };

// OFF surface, TetGen .node/.ele pair (pass the .node path; 1-based
// indices tolerated), or a JSON grid descriptor {nx, ny, cell_size}.
Mesh load_mesh(const std::string& path, MeshFormat format);

Mesh make_quad_grid(int nx, int ny, double cell_size);

void write_tetgen(const Mesh& mesh, const std::string& node_path, const std::string& ele_path);
void write_off(const Mesh& mesh, const std::string& path);
void write_vtk(const Mesh& mesh, const std::string& path,
               const std::vector<std::pair<std::string, VecX>>& cell_fields);

// Dijkstra over the surface edge graph with Euclidean edge weights.
// Unreachable nodes get +infinity. Indexed by parent node id (non-surface
// nodes get +infinity too).
std::vector<double> surface_distances(const Mesh& mesh, int source);

// k-means on surface graph distances with farthest-first initialization;
// returns the cluster 1-median nodes. Deterministic per seed, ties by
// lowest node index.
std::vector<int> sample_contact_nodes(const Mesh& mesh, const SurfaceRegion& region,
                                      int count, std::uint64_t seed);

// Elements whose centroid lies within `thickness` of the boundary
// surface, plus every boundary-touching element.
ShellMask mark_shell(const Mesh& mesh, double thickness);

// Maximal edge-connected subsets of `nodes` under surface adjacency.
std::vector<std::vector<int>> connected_components(const Mesh& mesh,
                                                   const std::vector<int>& nodes);

// Pairwise surface distances restricted to a node set; shared by the
// clustering and hierarchical-search code.
class RegionDistances {
public:
  RegionDistances(const Mesh& mesh, const std::vector<int>& nodes);
  double between(int a, int b) const;  // parent node ids
  const std::vector<int>& nodes() const { return nodes_; }

private:
  std::vector<int> nodes_;
  std::vector<int> index_of_;  // parent id -> row, -1 otherwise
  MatX d_;
};

}  // namespace forgelight

#endif
