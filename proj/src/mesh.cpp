#include "mixedwave/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <utility>

namespace mixedwave {

std::string_view to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::DirichletP:
      return "dirichlet_p";
    case BoundaryTag::NeumannU:
      return "neumann_u";
    case BoundaryTag::Scatterer:
      return "scatterer";
  }
  return "?";
}

std::optional<BoundaryTag> parse_boundary_tag(std::string_view name) {
  if (name == "dirichlet_p") return BoundaryTag::DirichletP;
  if (name == "neumann_u") return BoundaryTag::NeumannU;
  if (name == "scatterer") return BoundaryTag::Scatterer;
  return std::nullopt;
}

namespace {

std::pair<Index, Index> ordered(Index a, Index b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

void build_csr(std::size_t rows, const std::vector<std::pair<Index, Index>>& pairs,
               std::vector<Index>& offsets, std::vector<Index>& list) {
  offsets.assign(rows + 1, 0);
  for (const auto& [r, c] : pairs) ++offsets[r + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  list.assign(pairs.size(), 0);
  std::vector<Index> fill(offsets.begin(), offsets.end() - 1);
  for (const auto& [r, c] : pairs) list[fill[r]++] = c;
  for (std::size_t r = 0; r < rows; ++r) std::sort(list.begin() + offsets[r], list.begin() + offsets[r + 1]);
}

}  // namespace

TriMesh TriMesh::build(std::vector<Vec2> vertices, std::vector<std::array<Index, 3>> cells,
                       std::span<const BoundarySegment> boundary, std::optional<BoundaryTag> default_tag) {
  TriMesh m;
  const auto nv = static_cast<Index>(vertices.size());
  if (cells.empty()) throw MeshError("mesh has no cells");

  std::set<std::array<Index, 3>> seen;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    auto& cell = cells[c];
    for (Index v : cell)
      if (v < 0 || v >= nv) throw MeshError("cell " + std::to_string(c) + " references missing vertex");
    if (cell[0] == cell[1] || cell[1] == cell[2] || cell[0] == cell[2])
      throw MeshError("cell " + std::to_string(c) + " repeats a vertex");
    auto key = cell;
    std::sort(key.begin(), key.end());
    if (!seen.insert(key).second) throw MeshError("duplicated cell " + std::to_string(c));
    const double a2 = signed_area2(vertices[cell[0]], vertices[cell[1]], vertices[cell[2]]);
    if (std::abs(a2) <= 1e-14 * std::max(1.0, norm(vertices[cell[1]] - vertices[cell[0]])))
      throw MeshError("cell " + std::to_string(c) + " has zero area");
    if (a2 < 0) std::swap(cell[1], cell[2]);
  }

  m.vertices_ = std::move(vertices);
  m.cells_ = std::move(cells);

  std::map<std::pair<Index, Index>, Index> edge_index;
  for (const auto& cell : m.cells_)
    for (int i = 0; i < 3; ++i) edge_index.emplace(ordered(cell[(i + 1) % 3], cell[(i + 2) % 3]), 0);
  Index next = 0;
  for (auto& [key, idx] : edge_index) {
    idx = next++;
    const Vec2 t = m.vertices_[key.second] - m.vertices_[key.first];
    const double len = norm(t);
    m.edges_.push_back({{key.first, key.second}, rot90(t / len), len});
  }

  m.edge_cells_.assign(m.edges_.size(), {-1, -1});
  m.cell_edges_.resize(m.cells_.size());
  m.areas_.resize(m.cells_.size());
  for (std::size_t c = 0; c < m.cells_.size(); ++c) {
    const auto& cell = m.cells_[c];
    m.areas_[c] = 0.5 * signed_area2(m.vertices_[cell[0]], m.vertices_[cell[1]], m.vertices_[cell[2]]);
    for (int i = 0; i < 3; ++i) {
      const Index a = cell[(i + 1) % 3], b = cell[(i + 2) % 3];
      const Index e = edge_index.at(ordered(a, b));
      auto& adj = m.edge_cells_[e];
      if (adj[0] < 0) {
        adj[0] = static_cast<Index>(c);
      } else if (adj[1] < 0) {
        adj[1] = static_cast<Index>(c);
      } else {
        throw MeshError("edge (" + std::to_string(a) + "," + std::to_string(b) + ") shared by more than two cells");
      }
      // Outward normal of a counterclockwise cell across a->b is the
      // clockwise rotation of b - a, i.e. -rot90.
      const Vec2 outward = -rot90(m.vertices_[b] - m.vertices_[a]);
      m.cell_edges_[c].edge[i] = e;
      m.cell_edges_[c].sign[i] = dot(outward, m.edges_[e].normal) > 0 ? 1 : -1;
    }
  }
  for (std::size_t e = 0; e < m.edges_.size(); ++e) {
    const auto& adj = m.edge_cells_[e];
    if (adj[1] >= 0) {
      int s0 = 0, s1 = 0;
      for (int i = 0; i < 3; ++i) {
        if (m.cell_edges_[adj[0]].edge[i] == static_cast<Index>(e)) s0 = m.cell_edges_[adj[0]].sign[i];
        if (m.cell_edges_[adj[1]].edge[i] == static_cast<Index>(e)) s1 = m.cell_edges_[adj[1]].sign[i];
      }
      if (s0 == s1) throw MeshError("inconsistent orientation across edge " + std::to_string(e));
    }
  }

  m.edge_tag_.assign(m.edges_.size(), -1);
  for (const auto& seg : boundary) {
    if (seg.a < 0 || seg.b < 0 || seg.a >= nv || seg.b >= nv)
      throw MeshError("boundary segment references missing vertex");
    auto it = edge_index.find(ordered(seg.a, seg.b));
    if (it == edge_index.end())
      throw MeshError("boundary segment (" + std::to_string(seg.a) + "," + std::to_string(seg.b) + ") is not an edge");
    if (m.edge_cells_[it->second][1] >= 0)
      throw MeshError("boundary segment (" + std::to_string(seg.a) + "," + std::to_string(seg.b) +
                      ") is an interior edge");
    if (m.edge_tag_[it->second] >= 0) throw MeshError("boundary segment tagged twice");
    m.edge_tag_[it->second] = static_cast<std::int8_t>(seg.tag);
  }
  for (std::size_t e = 0; e < m.edges_.size(); ++e) {
    if (m.edge_cells_[e][1] >= 0 || m.edge_tag_[e] >= 0) continue;
    if (!default_tag)
      throw MeshError("boundary edge (" + std::to_string(m.edges_[e].v[0]) + "," + std::to_string(m.edges_[e].v[1]) +
                      ") has no tag");
    m.edge_tag_[e] = static_cast<std::int8_t>(*default_tag);
  }

  std::vector<std::pair<Index, Index>> ve, vc;
  for (std::size_t e = 0; e < m.edges_.size(); ++e)
    for (Index v : m.edges_[e].v) ve.emplace_back(v, static_cast<Index>(e));
  for (std::size_t c = 0; c < m.cells_.size(); ++c)
    for (Index v : m.cells_[c]) vc.emplace_back(v, static_cast<Index>(c));
  build_csr(m.vertices_.size(), ve, m.vertex_edge_offsets_, m.vertex_edge_list_);
  build_csr(m.vertices_.size(), vc, m.vertex_cell_offsets_, m.vertex_cell_list_);

  m.h_max_ = 0.0;
  m.h_min_ = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < m.cells_.size(); ++c) {
    const double d = m.diameter(static_cast<Index>(c));
    m.h_max_ = std::max(m.h_max_, d);
    m.h_min_ = std::min(m.h_min_, d);
  }
  return m;
}

std::array<Vec2, 3> TriMesh::corners(Index cell) const {
  const auto& c = cells_[cell];
  return {vertices_[c[0]], vertices_[c[1]], vertices_[c[2]]};
}

Vec2 TriMesh::centroid(Index cell) const {
  const auto x = corners(cell);
  return (x[0] + x[1] + x[2]) / 3.0;
}

std::optional<BoundaryTag> TriMesh::boundary_tag(Index edge) const {
  if (edge_tag_[edge] < 0) return std::nullopt;
  return static_cast<BoundaryTag>(edge_tag_[edge]);
}

std::vector<Index> TriMesh::boundary_edges() const {
  std::vector<Index> out;
  for (std::size_t e = 0; e < edges_.size(); ++e)
    if (edge_cells_[e][1] < 0) out.push_back(static_cast<Index>(e));
  return out;
}

std::optional<Index> TriMesh::find_edge(Index a, Index b) const {
  for (Index e : vertex_edges(a)) {
    const auto& v = edges_[e].v;
    if ((v[0] == a && v[1] == b) || (v[0] == b && v[1] == a)) return e;
  }
  return std::nullopt;
}

std::span<const Index> TriMesh::vertex_edges(Index v) const {
  return {vertex_edge_list_.data() + vertex_edge_offsets_[v],
          static_cast<std::size_t>(vertex_edge_offsets_[v + 1] - vertex_edge_offsets_[v])};
}

std::span<const Index> TriMesh::vertex_cells(Index v) const {
  return {vertex_cell_list_.data() + vertex_cell_offsets_[v],
          static_cast<std::size_t>(vertex_cell_offsets_[v + 1] - vertex_cell_offsets_[v])};
}

double TriMesh::diameter(Index cell) const {
  double d = 0.0;
  for (Index e : cell_edges_[cell].edge) d = std::max(d, edges_[e].length);
  return d;
}

double TriMesh::shape_ratio(Index cell) const {
  double perimeter = 0.0;
  for (Index e : cell_edges_[cell].edge) perimeter += edges_[e].length;
  const double inradius = 2.0 * areas_[cell] / perimeter;
  return inradius / diameter(cell);
}

MeshReport validate(const TriMesh& mesh, double gamma) {
  MeshReport report;
  report.min_shape_ratio = std::numeric_limits<double>::infinity();
  report.min_signed_area = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto x = mesh.corners(static_cast<Index>(c));
    report.min_signed_area = std::min(report.min_signed_area, 0.5 * signed_area2(x[0], x[1], x[2]));
    report.min_shape_ratio = std::min(report.min_shape_ratio, mesh.shape_ratio(static_cast<Index>(c)));
  }
  if (report.min_signed_area <= 0) throw MeshError("cell with non-positive signed area");
  if (report.min_shape_ratio < gamma) throw MeshError("shape regularity below configured gamma");

  // Boundary loops via union-find on boundary vertices; every boundary
  // vertex must have exactly two boundary edges.
  std::vector<Index> parent(mesh.num_vertices());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Index v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::vector<int> degree(mesh.num_vertices(), 0);
  for (Index e : mesh.boundary_edges()) {
    if (!mesh.boundary_tag(e)) throw MeshError("untagged boundary edge");
    const auto& v = mesh.edges()[e].v;
    ++degree[v[0]];
    ++degree[v[1]];
    parent[find(v[0])] = find(v[1]);
  }
  std::set<Index> roots;
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    if (degree[v] == 0) continue;
    if (degree[v] != 2) throw MeshError("boundary is not a manifold at vertex " + std::to_string(v));
    roots.insert(find(static_cast<Index>(v)));
  }
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const auto adj = mesh.edge_cells(static_cast<Index>(e));
    if (adj[0] < 0) throw MeshError("edge without cell");
  }
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v)
    if (mesh.vertex_cells(static_cast<Index>(v)).empty()) throw MeshError("unused vertex " + std::to_string(v));

  report.boundary_loops = static_cast<long>(roots.size());
  report.euler_characteristic = static_cast<long>(mesh.num_vertices()) - static_cast<long>(mesh.num_edges()) +
                                static_cast<long>(mesh.num_cells());
  if (report.euler_characteristic != 2 - report.boundary_loops)
    throw MeshError("Euler relation violated: V - E + C = " + std::to_string(report.euler_characteristic) +
                    " with " + std::to_string(report.boundary_loops) + " boundary loops");
  return report;
}

namespace {

TriMesh grid_mesh(const Rect& b, int n, BoundaryTag tag, bool cut_upper_right) {
  if (n < 1) throw MeshError("subdivisions per unit length must be positive");
  const int nx = static_cast<int>(std::lround((b.x1 - b.x0) * n));
  const int ny = static_cast<int>(std::lround((b.y1 - b.y0) * n));
  if (nx < 1 || ny < 1) throw MeshError("rectangle too small for requested subdivision");
  const double hx = (b.x1 - b.x0) / nx, hy = (b.y1 - b.y0) / ny;
  const double xm = 0.5 * (b.x0 + b.x1), ym = 0.5 * (b.y0 + b.y1);

  auto removed = [&](int i, int j) {
    // square (i, j) lies in the upper-right quadrant
    return cut_upper_right && b.x0 + (i + 0.5) * hx > xm && b.y0 + (j + 0.5) * hy > ym;
  };
  std::vector<Index> id((nx + 1) * (ny + 1), -1);
  auto node = [&](int i, int j) -> Index& { return id[j * (nx + 1) + i]; };
  std::vector<Vec2> vertices;
  std::vector<std::array<Index, 3>> cells;
  std::vector<char> used((nx + 1) * (ny + 1), 0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (removed(i, j)) continue;
      for (auto [di, dj] : {std::pair{0, 0}, {1, 0}, {0, 1}, {1, 1}}) used[(j + dj) * (nx + 1) + i + di] = 1;
    }
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      if (used[j * (nx + 1) + i]) {
        node(i, j) = static_cast<Index>(vertices.size());
        vertices.push_back({b.x0 + i * hx, b.y0 + j * hy});
      }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (removed(i, j)) continue;
      const Index v00 = node(i, j), v10 = node(i + 1, j), v01 = node(i, j + 1), v11 = node(i + 1, j + 1);
      cells.push_back({v00, v10, v11});
      cells.push_back({v00, v11, v01});
    }
  return TriMesh::build(std::move(vertices), std::move(cells), {}, tag);
}

}  // namespace

TriMesh generate_rect_mesh(const Rect& bounds, int n, BoundaryTag tag) {
  if (!(bounds.x1 > bounds.x0 && bounds.y1 > bounds.y0)) throw MeshError("degenerate rectangle");
  return grid_mesh(bounds, n, tag, false);
}

TriMesh generate_lshape_mesh(int n, BoundaryTag tag) { return grid_mesh({-1, -1, 1, 1}, n, tag, true); }

}  // namespace mixedwave

namespace mixedwave {

TriMesh perturb_interior_vertices(const TriMesh& mesh, double amplitude, std::uint64_t seed) {
  std::vector<char> on_boundary(mesh.num_vertices(), 0);
  std::vector<BoundarySegment> segments;
  for (Index e : mesh.boundary_edges()) {
    const auto& edge = mesh.edges()[e];
    on_boundary[edge.v[0]] = on_boundary[edge.v[1]] = 1;
    segments.push_back({edge.v[0], edge.v[1], *mesh.boundary_tag(e)});
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.0, 1.0), angle(0.0, 2.0 * std::numbers::pi);
  auto vertices = mesh.vertices();
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    const double r = amplitude * std::sqrt(radius(rng));
    const double a = angle(rng);
    if (!on_boundary[v]) vertices[v] += Vec2{r * std::cos(a), r * std::sin(a)};
  }
  for (const auto& c : mesh.cells())
    if (signed_area2(vertices[c[0]], vertices[c[1]], vertices[c[2]]) <= 0)
      throw MeshError("vertex perturbation inverted a cell");
  return TriMesh::build(std::move(vertices), mesh.cells(), segments);
}

}  // namespace mixedwave
