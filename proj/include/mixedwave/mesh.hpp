#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mixedwave/geometry.hpp"

namespace mixedwave {

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class BoundaryTag : std::uint8_t { DirichletP, NeumannU, Scatterer };

std::string_view to_string(BoundaryTag tag);
/// Parses the file spelling (dirichlet_p, neumann_u, scatterer).
std::optional<BoundaryTag> parse_boundary_tag(std::string_view name);

struct BoundarySegment {
  Index a;
  Index b;
  BoundaryTag tag;
};

/// Edge (a, b) with a < b. The global unit normal is rot90 of the unit
/// tangent from a to b.
struct Edge {
  std::array<Index, 2> v;
  Vec2 normal;
  double length;
};

/// Local edge i of a cell is opposite local vertex i, i.e. it joins local
/// vertices (i+1)%3 and (i+2)%3. sign[i] is +1 when the global normal of
/// the edge points out of the cell.
struct CellEdges {
  std::array<Index, 3> edge;
  std::array<int, 3> sign;
};

/// Conforming triangulation. Immutable after construction.
class TriMesh {
 public:
  /// Builds connectivity, orients cells counterclockwise and attaches the
  /// given boundary tags. Every boundary edge must be tagged unless
  /// default_tag is set, in which case untagged boundary edges receive it.
  static TriMesh build(std::vector<Vec2> vertices, std::vector<std::array<Index, 3>> cells,
                       std::span<const BoundarySegment> boundary,
                       std::optional<BoundaryTag> default_tag = std::nullopt);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_cells() const { return cells_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<std::array<Index, 3>>& cells() const { return cells_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<CellEdges>& cell_edges() const { return cell_edges_; }

  Vec2 vertex(Index v) const { return vertices_[v]; }
  std::array<Vec2, 3> corners(Index cell) const;
  double area(Index cell) const { return areas_[cell]; }
  const std::vector<double>& areas() const { return areas_; }
  Vec2 centroid(Index cell) const;

  /// Adjacent cells of an edge; second entry is -1 on the boundary.
  std::array<Index, 2> edge_cells(Index edge) const { return edge_cells_[edge]; }
  bool is_boundary(Index edge) const { return edge_cells_[edge][1] < 0; }
  std::optional<BoundaryTag> boundary_tag(Index edge) const;
  std::vector<Index> boundary_edges() const;
  /// Looks up the edge joining two vertices.
  std::optional<Index> find_edge(Index a, Index b) const;

  /// Edges incident to each vertex, ascending edge index.
  std::span<const Index> vertex_edges(Index v) const;
  std::span<const Index> vertex_cells(Index v) const;

  double h_max() const { return h_max_; }
  double h_min() const { return h_min_; }
  /// Diameter (longest edge) of a cell.
  double diameter(Index cell) const;
  /// Inscribed radius over diameter.
  double shape_ratio(Index cell) const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<std::array<Index, 3>> cells_;
  std::vector<Edge> edges_;
  std::vector<CellEdges> cell_edges_;
  std::vector<std::array<Index, 2>> edge_cells_;
  std::vector<std::int8_t> edge_tag_;  // -1 interior
  std::vector<double> areas_;
  std::vector<Index> vertex_edge_offsets_, vertex_edge_list_;
  std::vector<Index> vertex_cell_offsets_, vertex_cell_list_;
  double h_max_ = 0.0;
  double h_min_ = 0.0;
};

struct MeshReport {
  long euler_characteristic = 0;   // V - E + C
  long boundary_loops = 0;
  double min_shape_ratio = 0.0;    // min over cells of rho_K / h_K
  double min_signed_area = 0.0;
};

/// Checks the structural invariants (conformity, orientation, tags, Euler
/// relation V - E + C = 2 - loops, shape regularity >= gamma). Throws
/// MeshError on violation.
MeshReport validate(const TriMesh& mesh, double gamma = 0.0);

struct Rect {
  double x0, y0, x1, y1;
};

/// Uniform grid with n squares per unit length, each split along the
/// diagonal from lower-left to upper-right. Boundary edges get `tag`.
TriMesh generate_rect_mesh(const Rect& bounds, int n, BoundaryTag tag = BoundaryTag::DirichletP);

/// (-1,1)^2 minus [0,1]^2 with the same grid structure as generate_rect_mesh.
TriMesh generate_lshape_mesh(int n, BoundaryTag tag = BoundaryTag::DirichletP);

/// Moves every vertex not on the boundary by a random offset of length at
/// most `amplitude` (seeded, reproducible). Throws MeshError if a cell
/// would invert.
TriMesh perturb_interior_vertices(const TriMesh& mesh, double amplitude, std::uint64_t seed);

/// Line-oriented ASCII format: `trimesh 1`, `vertices N` + N lines `x y`,
/// `cells M` + M lines `i j k`, `boundary B` + B lines `i j TAG`.
TriMesh read_mesh(std::istream& in);
TriMesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const TriMesh& mesh);

// --- refinement ---------------------------------------------------------

/// Maps a point to the exact boundary curve.
using BoundaryProjector = std::function<Vec2(Vec2)>;

BoundaryProjector circle_projector(Vec2 center, double radius);

struct SnappedVertex {
  Index vertex;
  Vec2 unsnapped;
  Vec2 snapped;
};

struct RefinementMap {
  std::size_t coarse_cells = 0;
  std::vector<Index> parent_cell;      // per fine cell
  std::vector<std::uint8_t> child_index;  // 0..3
  std::vector<SnappedVertex> boundary_snap;
};

/// Barycentric coordinates of a child's corners inside its parent.
const std::array<Barycentric, 3>& child_corners_in_parent(int child);

/// Converts barycentric coordinates in a child to barycentric coordinates
/// in the unperturbed parent.
Barycentric child_to_parent(int child, const Barycentric& lambda);

struct Refinement {
  TriMesh mesh;
  RefinementMap map;
};

/// Regular red refinement through edge midpoints. Midpoints of Scatterer
/// edges are moved by `snap` when given.
Refinement refine_regular(const TriMesh& mesh, const BoundaryProjector& snap = {});

/// Copies each parent value to its four children.
std::vector<double> prolong_p0(std::span<const double> coarse, const RefinementMap& map);

}  // namespace mixedwave
