#include "forgelight/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "forgelight/jsonio.hpp"

namespace forgelight {

namespace {

double tet_signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).cross(c - a).dot(d - a) / 6.0;
}

double quad_area(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  // CCW planar quad, shoelace on xy.
  double s = 0.0;
  const Vec3* p[4] = {&a, &b, &c, &d};
  for (int i = 0; i < 4; ++i) {
    const Vec3& u = *p[i];
    const Vec3& v = *p[(i + 1) % 4];
    s += u.x() * v.y() - v.x() * u.y();
  }
  return 0.5 * s;
}

double tri_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

void validate_volumes(Mesh& mesh) {
  Vec3 lo, hi;
  mesh.bounding_box(lo, hi);
  Vec3 ext = hi - lo;
  double box = 1.0;
  for (int d = 0; d < mesh.dim; ++d) box *= std::max(ext[d], 1e-300);
  const double floor_v = 1e-12 * box;
  for (int e = 0; e < mesh.element_count(); ++e) {
    if (std::abs(mesh.element_volumes[static_cast<size_t>(e)]) < floor_v)
      throw ConfigError("degenerate element " + std::to_string(e) +
                        " (|volume| below 1e-12 of bounding box)");
  }
}

void check_indices(const Mesh& mesh, int nodes_per_elem) {
  const int n = mesh.node_count();
  for (int e = 0; e < mesh.element_count(); ++e) {
    for (int k = 0; k < nodes_per_elem; ++k) {
      int v = mesh.elements[static_cast<size_t>(e)][static_cast<size_t>(k)];
      if (v < 0 || v >= n)
        throw ConfigError("element " + std::to_string(e) + " references node " +
                          std::to_string(v) + " outside [0," + std::to_string(n) + ")");
    }
  }
}

}  // namespace

double Mesh::total_volume() const {
  double s = 0.0;
  for (double v : element_volumes) s += v;
  return s;
}

Vec3 Mesh::element_centroid(int e) const {
  const auto& el = elements[static_cast<size_t>(e)];
  int k = (kind == ElementKind::Tri3) ? 3 : 4;
  Vec3 c = Vec3::Zero();
  for (int i = 0; i < k; ++i) c += nodes[static_cast<size_t>(el[static_cast<size_t>(i)])];
  return c / k;
}

void Mesh::bounding_box(Vec3& lo, Vec3& hi) const {
  lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  hi = -lo;
  for (const Vec3& p : nodes) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
}

namespace {

// Face key: sorted node triple (tets) or node pair (2D edges mapped to
// degenerate triples).
struct FaceKey {
  std::array<int, 3> v;
  bool operator<(const FaceKey& o) const { return v < o.v; }
};

void build_surface_tet(const Mesh& mesh, Surface& s) {
  // Faces of tet (a,b,c,d), outward when the tet is positively oriented:
  // (a,c,b),(a,b,d),(b,c,d),(a,d,c)
  static const int F[4][3] = {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}};
  std::map<FaceKey, std::pair<int, std::array<int, 3>>> count;  // key -> (count, oriented)
  for (const auto& el : mesh.elements) {
    for (const auto& f : F) {
      std::array<int, 3> tri = {el[static_cast<size_t>(f[0])], el[static_cast<size_t>(f[1])],
                                el[static_cast<size_t>(f[2])]};
      FaceKey key{tri};
      std::sort(key.v.begin(), key.v.end());
      auto it = count.find(key);
      if (it == count.end())
        count.emplace(key, std::make_pair(1, tri));
      else
        it->second.first++;
    }
  }
  for (const auto& [key, val] : count) {
    if (val.first == 1) s.triangles.push_back(val.second);
  }
}

void build_surface_tri(const Mesh& mesh, Surface& s) {
  for (const auto& el : mesh.elements)
    s.triangles.push_back({el[0], el[1], el[2]});
}

void build_surface_quad(const Mesh& mesh, Surface& s) {
  // 2D: boundary edges, stored as degenerate "triangles" (a, b, b). Only
  // the edge graph matters for 2D region machinery.
  std::map<std::pair<int, int>, std::pair<int, std::pair<int, int>>> count;
  static const int E[4][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  for (const auto& el : mesh.elements) {
    for (const auto& ed : E) {
      int a = el[static_cast<size_t>(ed[0])], b = el[static_cast<size_t>(ed[1])];
      auto key = std::minmax(a, b);
      auto it = count.find(key);
      if (it == count.end())
        count.emplace(key, std::make_pair(1, std::make_pair(a, b)));
      else
        it->second.first++;
    }
  }
  for (const auto& [key, val] : count) {
    if (val.first == 1) s.triangles.push_back({val.second.first, val.second.second, val.second.second});
  }
}

}  // namespace

const Surface& Mesh::surface() const {
  if (surface_built_) return surface_;
  Surface s;
  switch (kind) {
    case ElementKind::Tet4: build_surface_tet(*this, s); break;
    case ElementKind::Tri3: build_surface_tri(*this, s); break;
    case ElementKind::Quad4: build_surface_quad(*this, s); break;
  }
  std::set<int> node_set;
  for (const auto& t : s.triangles) {
    node_set.insert(t[0]);
    node_set.insert(t[1]);
    node_set.insert(t[2]);
  }
  s.node_ids.assign(node_set.begin(), node_set.end());
  s.is_boundary.assign(static_cast<size_t>(node_count()), 0);
  for (int v : s.node_ids) s.is_boundary[static_cast<size_t>(v)] = 1;

  s.adjacency.assign(static_cast<size_t>(node_count()), {});
  std::set<std::pair<int, int>> edges;
  for (const auto& t : s.triangles) {
    int tri[3] = {t[0], t[1], t[2]};
    int nk = (t[1] == t[2]) ? 1 : 3;  // degenerate 2D edge contributes one edge
    for (int i = 0; i < nk; ++i) {
      int a = tri[i], b = tri[(i + 1) % 3];
      if (a == b) continue;
      auto key = std::minmax(a, b);
      if (edges.insert(key).second) {
        s.adjacency[static_cast<size_t>(a)].push_back(b);
        s.adjacency[static_cast<size_t>(b)].push_back(a);
      }
    }
  }
  for (auto& nb : s.adjacency) std::sort(nb.begin(), nb.end());

  // Area-weighted node normals (3D surfaces only).
  s.node_normals.assign(static_cast<size_t>(node_count()), Vec3::Zero());
  if (kind != ElementKind::Quad4) {
    for (const auto& t : s.triangles) {
      const Vec3& a = nodes[static_cast<size_t>(t[0])];
      const Vec3& b = nodes[static_cast<size_t>(t[1])];
      const Vec3& c = nodes[static_cast<size_t>(t[2])];
      Vec3 an = 0.5 * (b - a).cross(c - a);  // area-scaled normal
      for (int k = 0; k < 3; ++k) s.node_normals[static_cast<size_t>(t[static_cast<size_t>(k)])] += an;
    }
    for (auto& nrm : s.node_normals) {
      double len = nrm.norm();
      if (len > 0) nrm /= len;
    }
  }
  surface_ = std::move(s);
  surface_built_ = true;
  return surface_;
}

const std::vector<std::vector<int>>& Mesh::element_adjacency() const {
  if (elem_adj_built_) return elem_adj_;
  elem_adj_.assign(static_cast<size_t>(element_count()), {});
  if (kind == ElementKind::Tet4) {
    static const int F[4][3] = {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}};
    std::map<FaceKey, int> first;
    for (int e = 0; e < element_count(); ++e) {
      const auto& el = elements[static_cast<size_t>(e)];
      for (const auto& f : F) {
        FaceKey key{{el[static_cast<size_t>(f[0])], el[static_cast<size_t>(f[1])],
                     el[static_cast<size_t>(f[2])]}};
        std::sort(key.v.begin(), key.v.end());
        auto it = first.find(key);
        if (it == first.end()) {
          first.emplace(key, e);
        } else {
          elem_adj_[static_cast<size_t>(e)].push_back(it->second);
          elem_adj_[static_cast<size_t>(it->second)].push_back(e);
        }
      }
    }
  } else if (kind == ElementKind::Quad4) {
    static const int E[4][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    std::map<std::pair<int, int>, int> first;
    for (int e = 0; e < element_count(); ++e) {
      const auto& el = elements[static_cast<size_t>(e)];
      for (const auto& ed : E) {
        auto key = std::minmax(el[static_cast<size_t>(ed[0])], el[static_cast<size_t>(ed[1])]);
        auto it = first.find(key);
        if (it == first.end()) {
          first.emplace(key, e);
        } else {
          elem_adj_[static_cast<size_t>(e)].push_back(it->second);
          elem_adj_[static_cast<size_t>(it->second)].push_back(e);
        }
      }
    }
  }
  for (auto& nb : elem_adj_) std::sort(nb.begin(), nb.end());
  elem_adj_built_ = true;
  return elem_adj_;
}

// ---------------------------------------------------------------------------
// Loaders

namespace {

Mesh load_off(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::string tok;
  in >> tok;
  if (tok != "OFF") throw ConfigError(path + ": not an OFF file (missing header)");
  long n = 0, m = 0, ne = 0;
  in >> n >> m >> ne;
  if (!in || n <= 0 || m < 0) throw ConfigError(path + ": malformed OFF counts");
  Mesh mesh;
  mesh.kind = ElementKind::Tri3;
  mesh.dim = 3;
  mesh.nodes.resize(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) {
    double x, y, z;
    in >> x >> y >> z;
    if (!in) throw ConfigError(path + ": truncated vertex list");
    mesh.nodes[static_cast<size_t>(i)] = Vec3(x, y, z);
  }
  for (long f = 0; f < m; ++f) {
    int cnt;
    in >> cnt;
    if (!in) throw ConfigError(path + ": truncated face list");
    if (cnt != 3) throw ConfigError(path + ": face " + std::to_string(f) + " is not a triangle");
    int a, b, c;
    in >> a >> b >> c;
    mesh.elements.push_back({a, b, c, -1});
  }
  check_indices(mesh, 3);
  mesh.element_volumes.resize(mesh.elements.size());
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto& el = mesh.elements[static_cast<size_t>(e)];
    mesh.element_volumes[static_cast<size_t>(e)] =
        tri_area(mesh.nodes[static_cast<size_t>(el[0])], mesh.nodes[static_cast<size_t>(el[1])],
                 mesh.nodes[static_cast<size_t>(el[2])]);
  }
  validate_volumes(mesh);
  return mesh;
}

Mesh load_tetgen(const std::string& node_path) {
  std::string ele_path = node_path;
  auto pos = ele_path.rfind(".node");
  if (pos == std::string::npos) throw ConfigError(node_path + ": expected a .node file");
  ele_path.replace(pos, 5, ".ele");

  std::ifstream nin(node_path);
  if (!nin) throw ConfigError("cannot open file: " + node_path);
  long n = 0;
  int ndim = 0, nattr = 0, nmark = 0;
  nin >> n >> ndim >> nattr >> nmark;
  if (!nin || n <= 0 || ndim != 3) throw ConfigError(node_path + ": malformed .node header");
  Mesh mesh;
  mesh.kind = ElementKind::Tet4;
  mesh.dim = 3;
  mesh.nodes.resize(static_cast<size_t>(n));
  long min_idx = std::numeric_limits<long>::max();
  std::vector<long> ids(static_cast<size_t>(n));
  std::vector<Vec3> coords(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) {
    long id;
    double x, y, z;
    nin >> id >> x >> y >> z;
    for (int a = 0; a < nattr + nmark; ++a) {
      double skip;
      nin >> skip;
    }
    if (!nin) throw ConfigError(node_path + ": truncated node list");
    ids[static_cast<size_t>(i)] = id;
    coords[static_cast<size_t>(i)] = Vec3(x, y, z);
    min_idx = std::min(min_idx, id);
  }
  if (min_idx != 0 && min_idx != 1)
    throw ConfigError(node_path + ": node indices must start at 0 or 1");
  for (long i = 0; i < n; ++i)
    mesh.nodes[static_cast<size_t>(ids[static_cast<size_t>(i)] - min_idx)] =
        coords[static_cast<size_t>(i)];

  std::ifstream ein(ele_path);
  if (!ein) throw ConfigError("cannot open file: " + ele_path);
  long m = 0;
  int npe = 0, eattr = 0;
  ein >> m >> npe >> eattr;
  if (!ein || m <= 0 || npe != 4) throw ConfigError(ele_path + ": malformed .ele header");
  for (long e = 0; e < m; ++e) {
    long id, a, b, c, d;
    ein >> id >> a >> b >> c >> d;
    for (int x = 0; x < eattr; ++x) {
      double skip;
      ein >> skip;
    }
    if (!ein) throw ConfigError(ele_path + ": truncated element list");
    mesh.elements.push_back({static_cast<int>(a - min_idx), static_cast<int>(b - min_idx),
                             static_cast<int>(c - min_idx), static_cast<int>(d - min_idx)});
  }
  check_indices(mesh, 4);
  mesh.element_volumes.resize(mesh.elements.size());
  for (int e = 0; e < mesh.element_count(); ++e) {
    auto& el = mesh.elements[static_cast<size_t>(e)];
    double v = tet_signed_volume(mesh.nodes[static_cast<size_t>(el[0])],
                                 mesh.nodes[static_cast<size_t>(el[1])],
                                 mesh.nodes[static_cast<size_t>(el[2])],
                                 mesh.nodes[static_cast<size_t>(el[3])]);
    if (v < 0) {  // canonical reordering: swap to positive orientation
      std::swap(el[2], el[3]);
      v = -v;
    }
    mesh.element_volumes[static_cast<size_t>(e)] = v;
  }
  validate_volumes(mesh);
  return mesh;
}

}  // namespace

Mesh make_quad_grid(int nx, int ny, double cell_size) {
  if (nx <= 0 || ny <= 0 || cell_size <= 0)
    throw ConfigError("quad grid: nx, ny, cell_size must be positive");
  Mesh mesh;
  mesh.kind = ElementKind::Quad4;
  mesh.dim = 2;
  mesh.grid_nx = nx;
  mesh.grid_ny = ny;
  mesh.grid_cell = cell_size;
  // Node (i,j) at id i*(ny+1)+j, x = i*h, y = j*h.
  mesh.nodes.reserve(static_cast<size_t>((nx + 1) * (ny + 1)));
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= ny; ++j)
      mesh.nodes.push_back(Vec3(i * cell_size, j * cell_size, 0.0));
  auto nid = [ny](int i, int j) { return i * (ny + 1) + j; };
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      // CCW: (i,j),(i+1,j),(i+1,j+1),(i,j+1)
      mesh.elements.push_back({nid(i, j), nid(i + 1, j), nid(i + 1, j + 1), nid(i, j + 1)});
      mesh.element_volumes.push_back(cell_size * cell_size);
    }
  }
  return mesh;
}

Mesh load_mesh(const std::string& path, MeshFormat format) {
  switch (format) {
    case MeshFormat::OffSurface: return load_off(path);
    case MeshFormat::TetgenVolume: return load_tetgen(path);
    case MeshFormat::QuadGrid: {
      Json j = load_json_file(path);
      require_keys_subset(j, "grid descriptor", {"nx", "ny", "cell_size"});
      return make_quad_grid(require_int(j, "grid descriptor", "nx"),
                            require_int(j, "grid descriptor", "ny"),
                            require_number(j, "grid descriptor", "cell_size"));
    }
  }
  throw ConfigError("unknown mesh format");
}

void write_tetgen(const Mesh& mesh, const std::string& node_path, const std::string& ele_path) {
  std::ostringstream ns;
  ns << mesh.node_count() << " 3 0 0\n";
  for (int i = 0; i < mesh.node_count(); ++i) {
    const Vec3& p = mesh.nodes[static_cast<size_t>(i)];
    ns << i << " " << format_full(p.x()) << " " << format_full(p.y()) << " "
       << format_full(p.z()) << "\n";
  }
  write_text_file(node_path, ns.str());
  std::ostringstream es;
  es << mesh.element_count() << " 4 0\n";
  for (int e = 0; e < mesh.element_count(); ++e) {
    const auto& el = mesh.elements[static_cast<size_t>(e)];
    es << e << " " << el[0] << " " << el[1] << " " << el[2] << " " << el[3] << "\n";
  }
  write_text_file(ele_path, es.str());
}

void write_off(const Mesh& mesh, const std::string& path) {
  const Surface& s = mesh.surface();
  // Compact to surface-local indices.
  std::vector<int> local(static_cast<size_t>(mesh.node_count()), -1);
  for (size_t i = 0; i < s.node_ids.size(); ++i) local[static_cast<size_t>(s.node_ids[i])] = static_cast<int>(i);
  std::ostringstream os;
  os << "OFF\n" << s.node_ids.size() << " " << s.triangles.size() << " 0\n";
  for (int v : s.node_ids) {
    const Vec3& p = mesh.nodes[static_cast<size_t>(v)];
    os << format_full(p.x()) << " " << format_full(p.y()) << " " << format_full(p.z()) << "\n";
  }
  for (const auto& t : s.triangles)
    os << "3 " << local[static_cast<size_t>(t[0])] << " " << local[static_cast<size_t>(t[1])]
       << " " << local[static_cast<size_t>(t[2])] << "\n";
  write_text_file(path, os.str());
}

void write_vtk(const Mesh& mesh, const std::string& path,
               const std::vector<std::pair<std::string, VecX>>& cell_fields) {
  std::ostringstream os;
  os << "# vtk DataFile Version 3.0\nforgelight export\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh.node_count() << " double\n";
  for (const Vec3& p : mesh.nodes)
    os << format_full(p.x()) << " " << format_full(p.y()) << " " << format_full(p.z()) << "\n";
  int npe = (mesh.kind == ElementKind::Tri3) ? 3 : 4;
  os << "CELLS " << mesh.element_count() << " " << mesh.element_count() * (npe + 1) << "\n";
  for (const auto& el : mesh.elements) {
    os << npe;
    for (int k = 0; k < npe; ++k) os << " " << el[static_cast<size_t>(k)];
    os << "\n";
  }
  int ct = (mesh.kind == ElementKind::Tet4) ? 10 : (mesh.kind == ElementKind::Quad4 ? 9 : 5);
  os << "CELL_TYPES " << mesh.element_count() << "\n";
  for (int e = 0; e < mesh.element_count(); ++e) os << ct << "\n";
  if (!cell_fields.empty()) {
    os << "CELL_DATA " << mesh.element_count() << "\n";
    for (const auto& [name, field] : cell_fields) {
      os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (int e = 0; e < mesh.element_count(); ++e) os << format_full(field[e]) << "\n";
    }
  }
  write_text_file(path, os.str());
}

// ---------------------------------------------------------------------------
// Surface graph machinery

std::vector<double> surface_distances(const Mesh& mesh, int source) {
  const Surface& s = mesh.surface();
  if (!s.contains(source))
    throw ConfigError("surface_distances: node " + std::to_string(source) +
                      " is not on the boundary surface");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<size_t>(mesh.node_count()), inf);
  dist[static_cast<size_t>(source)] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.push({0.0, source});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[static_cast<size_t>(u)]) continue;
    for (int v : s.adjacency[static_cast<size_t>(u)]) {
      double w = (mesh.nodes[static_cast<size_t>(u)] - mesh.nodes[static_cast<size_t>(v)]).norm();
      double nd = d + w;
      if (nd < dist[static_cast<size_t>(v)]) {
        dist[static_cast<size_t>(v)] = nd;
        pq.push({nd, v});
      }
    }
  }
  return dist;
}

RegionDistances::RegionDistances(const Mesh& mesh, const std::vector<int>& nodes)
    : nodes_(nodes) {
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
  index_of_.assign(static_cast<size_t>(mesh.node_count()), -1);
  for (size_t i = 0; i < nodes_.size(); ++i) index_of_[static_cast<size_t>(nodes_[i])] = static_cast<int>(i);
  const int k = static_cast<int>(nodes_.size());
  d_.resize(k, k);
  for (int i = 0; i < k; ++i) {
    std::vector<double> dist = surface_distances(mesh, nodes_[static_cast<size_t>(i)]);
    for (int j = 0; j < k; ++j) d_(i, j) = dist[static_cast<size_t>(nodes_[static_cast<size_t>(j)])];
  }
}

double RegionDistances::between(int a, int b) const {
  int ia = index_of_[static_cast<size_t>(a)], ib = index_of_[static_cast<size_t>(b)];
  if (ia < 0 || ib < 0) throw Error("RegionDistances: node outside region");
  return d_(ia, ib);
}

namespace {

// 1-median of `members` under region distances; ties by lowest node id.
int cluster_median(const RegionDistances& rd, const std::vector<int>& members) {
  double best = std::numeric_limits<double>::infinity();
  int best_node = -1;
  for (int cand : members) {
    double s = 0.0;
    for (int m : members) s += rd.between(cand, m);
    if (s < best - 1e-15 || (std::abs(s - best) <= 1e-15 && cand < best_node)) {
      best = s;
      best_node = cand;
    }
  }
  return best_node;
}

}  // namespace

std::vector<int> sample_contact_nodes(const Mesh& mesh, const SurfaceRegion& region,
                                      int count, std::uint64_t seed) {
  if (region.node_ids.empty()) throw ConfigError("sample_contact_nodes: empty region");
  if (count <= 0) throw ConfigError("sample_contact_nodes: count must be positive");
  if (count > static_cast<int>(region.node_ids.size()))
    throw ConfigError("sample_contact_nodes: count exceeds region size");

  std::vector<int> nodes = region.node_ids;
  std::sort(nodes.begin(), nodes.end());
  if (count == static_cast<int>(nodes.size())) return nodes;

  RegionDistances rd(mesh, nodes);

  // Farthest-first traversal; seed picks the starting node.
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick(0, nodes.size() - 1);
  std::vector<int> centers;
  centers.push_back(nodes[pick(rng)]);
  std::vector<double> mind(nodes.size());
  for (size_t i = 0; i < nodes.size(); ++i) mind[i] = rd.between(nodes[i], centers[0]);
  while (static_cast<int>(centers.size()) < count) {
    double best = -1.0;
    int best_node = -1;
    for (size_t i = 0; i < nodes.size(); ++i) {
      // Lowest index wins among equidistant candidates.
      if (mind[i] > best + 1e-15) {
        best = mind[i];
        best_node = nodes[i];
      }
    }
    centers.push_back(best_node);
    for (size_t i = 0; i < nodes.size(); ++i)
      mind[i] = std::min(mind[i], rd.between(nodes[i], best_node));
  }

  // Lloyd iterations with 1-median centers.
  for (int iter = 0; iter < 30; ++iter) {
    std::vector<std::vector<int>> clusters(centers.size());
    for (int v : nodes) {
      double best = std::numeric_limits<double>::infinity();
      int ci = 0;
      for (size_t c = 0; c < centers.size(); ++c) {
        double d = rd.between(v, centers[c]);
        if (d < best - 1e-15) {
          best = d;
          ci = static_cast<int>(c);
        }
      }
      clusters[static_cast<size_t>(ci)].push_back(v);
    }
    std::vector<int> next(centers.size());
    bool changed = false;
    for (size_t c = 0; c < centers.size(); ++c) {
      next[c] = clusters[c].empty() ? centers[c] : cluster_median(rd, clusters[c]);
      changed |= (next[c] != centers[c]);
    }
    centers = std::move(next);
    if (!changed) break;
  }
  std::sort(centers.begin(), centers.end());
  return centers;
}

// ---------------------------------------------------------------------------
// Shell marking

namespace {

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // Ericson, Real-Time Collision Detection, closest point on triangle.
  Vec3 ab = b - a, ac = c - a, ap = p - a;
  double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return (p - a).norm();
  Vec3 bp = p - b;
  double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return (p - b).norm();
  double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) {
    double v = d1 / (d1 - d3);
    return (p - (a + v * ab)).norm();
  }
  Vec3 cp = p - c;
  double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return (p - c).norm();
  double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) {
    double w = d2 / (d2 - d6);
    return (p - (a + w * ac)).norm();
  }
  double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
    double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return (p - (b + w * (c - b))).norm();
  }
  double denom = 1.0 / (va + vb + vc);
  double v = vb * denom, w = vc * denom;
  return (p - (a + ab * v + ac * w)).norm();
}

}  // namespace

ShellMask mark_shell(const Mesh& mesh, double thickness) {
  if (thickness <= 0) throw ConfigError("mark_shell: thickness must be positive");
  Vec3 lo, hi;
  mesh.bounding_box(lo, hi);
  double min_extent = std::numeric_limits<double>::infinity();
  for (int d = 0; d < mesh.dim; ++d) min_extent = std::min(min_extent, hi[d] - lo[d]);
  if (thickness >= 0.5 * min_extent)
    throw ConfigError("mark_shell: thickness exceeds half the minimum bounding-box extent");

  const Surface& s = mesh.surface();
  const auto& adj = mesh.element_adjacency();

  // Exact centroid distance to the boundary, evaluated lazily: start from
  // boundary-touching elements and expand through the adjacency graph
  // while the band condition holds. Surface triangles live in a uniform
  // grid for the distance queries.
  struct TriGrid {
    Vec3 origin;
    double cell;
    int nx, ny, nz;
    std::vector<std::vector<int>> bins;
    int index(int ix, int iy, int iz) const { return (ix * ny + iy) * nz + iz; }
  } grid;
  Vec3 pad = Vec3::Constant(1e-9 + 1e-9 * (hi - lo).norm());
  Vec3 glo = lo - pad, ghi = hi + pad;
  double target_cell = std::max({(ghi - glo).x(), (ghi - glo).y(), (ghi - glo).z()}) / 24.0;
  grid.cell = std::max(target_cell, 1e-12);
  grid.origin = glo;
  grid.nx = std::max(1, static_cast<int>((ghi - glo).x() / grid.cell) + 1);
  grid.ny = std::max(1, static_cast<int>((ghi - glo).y() / grid.cell) + 1);
  grid.nz = std::max(1, static_cast<int>((ghi - glo).z() / grid.cell) + 1);
  grid.bins.assign(static_cast<size_t>(grid.nx * grid.ny * grid.nz), {});
  auto clampi = [](int v, int n) { return std::max(0, std::min(v, n - 1)); };
  for (size_t t = 0; t < s.triangles.size(); ++t) {
    Vec3 tlo = Vec3::Constant(std::numeric_limits<double>::infinity()), thi = -tlo;
    for (int k = 0; k < 3; ++k) {
      const Vec3& p = mesh.nodes[static_cast<size_t>(s.triangles[t][static_cast<size_t>(k)])];
      tlo = tlo.cwiseMin(p);
      thi = thi.cwiseMax(p);
    }
    int ix0 = clampi(static_cast<int>((tlo.x() - grid.origin.x()) / grid.cell), grid.nx);
    int ix1 = clampi(static_cast<int>((thi.x() - grid.origin.x()) / grid.cell), grid.nx);
    int iy0 = clampi(static_cast<int>((tlo.y() - grid.origin.y()) / grid.cell), grid.ny);
    int iy1 = clampi(static_cast<int>((thi.y() - grid.origin.y()) / grid.cell), grid.ny);
    int iz0 = clampi(static_cast<int>((tlo.z() - grid.origin.z()) / grid.cell), grid.nz);
    int iz1 = clampi(static_cast<int>((thi.z() - grid.origin.z()) / grid.cell), grid.nz);
    for (int ix = ix0; ix <= ix1; ++ix)
      for (int iy = iy0; iy <= iy1; ++iy)
        for (int iz = iz0; iz <= iz1; ++iz)
          grid.bins[static_cast<size_t>(grid.index(ix, iy, iz))].push_back(static_cast<int>(t));
  }

  auto surface_distance = [&](const Vec3& p) {
    // Expand rings of cells until a hit is found, then one extra ring to
    // guarantee the minimum.
    int cx = clampi(static_cast<int>((p.x() - grid.origin.x()) / grid.cell), grid.nx);
    int cy = clampi(static_cast<int>((p.y() - grid.origin.y()) / grid.cell), grid.ny);
    int cz = clampi(static_cast<int>((p.z() - grid.origin.z()) / grid.cell), grid.nz);
    double best = std::numeric_limits<double>::infinity();
    int max_r = std::max({grid.nx, grid.ny, grid.nz});
    for (int r = 0; r <= max_r; ++r) {
      if (best < (r - 1) * grid.cell) break;  // no closer hit possible
      for (int ix = clampi(cx - r, grid.nx); ix <= clampi(cx + r, grid.nx); ++ix)
        for (int iy = clampi(cy - r, grid.ny); iy <= clampi(cy + r, grid.ny); ++iy)
          for (int iz = clampi(cz - r, grid.nz); iz <= clampi(cz + r, grid.nz); ++iz) {
            if (std::max({std::abs(ix - cx), std::abs(iy - cy), std::abs(iz - cz)}) != r) continue;
            for (int t : grid.bins[static_cast<size_t>(grid.index(ix, iy, iz))]) {
              const auto& tr = s.triangles[static_cast<size_t>(t)];
              best = std::min(best, point_triangle_distance(
                                        p, mesh.nodes[static_cast<size_t>(tr[0])],
                                        mesh.nodes[static_cast<size_t>(tr[1])],
                                        mesh.nodes[static_cast<size_t>(tr[2])]));
            }
          }
    }
    return best;
  };

  ShellMask mask;
  mask.thickness = thickness;
  mask.in_mask.assign(static_cast<size_t>(mesh.element_count()), 0);

  std::vector<int> frontier;
  for (int e = 0; e < mesh.element_count(); ++e) {
    bool touches = false;
    for (int k = 0; k < 4 && !touches; ++k) {
      int v = mesh.elements[static_cast<size_t>(e)][static_cast<size_t>(k)];
      touches = s.contains(v);
    }
    if (touches) {
      mask.in_mask[static_cast<size_t>(e)] = 1;
      frontier.push_back(e);
    }
  }
  // Expand inward while centroids stay inside the band.
  std::vector<char> visited = mask.in_mask;
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int e : frontier) {
      for (int nb : adj[static_cast<size_t>(e)]) {
        if (visited[static_cast<size_t>(nb)]) continue;
        visited[static_cast<size_t>(nb)] = 1;
        if (surface_distance(mesh.element_centroid(nb)) <= thickness) {
          mask.in_mask[static_cast<size_t>(nb)] = 1;
          next.push_back(nb);
        }
      }
    }
    frontier = std::move(next);
  }
  for (int e = 0; e < mesh.element_count(); ++e)
    if (mask.in_mask[static_cast<size_t>(e)]) mask.element_ids.push_back(e);
  if (static_cast<int>(mask.element_ids.size()) == mesh.element_count())
    throw ConfigError("mark_shell: no interior design space (mask covers every element)");
  return mask;
}

std::vector<std::vector<int>> connected_components(const Mesh& mesh,
                                                   const std::vector<int>& nodes) {
  const Surface& s = mesh.surface();
  std::vector<int> sorted = nodes;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<char> in_set(static_cast<size_t>(mesh.node_count()), 0);
  for (int v : sorted) {
    if (!s.contains(v))
      throw ConfigError("connected_components: node " + std::to_string(v) +
                        " is not a boundary node");
    in_set[static_cast<size_t>(v)] = 1;
  }
  std::vector<char> seen(static_cast<size_t>(mesh.node_count()), 0);
  std::vector<std::vector<int>> components;
  for (int v : sorted) {
    if (seen[static_cast<size_t>(v)]) continue;
    std::vector<int> comp, stack{v};
    seen[static_cast<size_t>(v)] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (int w : s.adjacency[static_cast<size_t>(u)]) {
        if (in_set[static_cast<size_t>(w)] && !seen[static_cast<size_t>(w)]) {
          seen[static_cast<size_t>(w)] = 1;
          stack.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  return components;
}

}  // namespace forgelight
