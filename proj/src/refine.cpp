#include <stdexcept>

#include "mixedwave/mesh.hpp"

namespace mixedwave {

BoundaryProjector circle_projector(Vec2 center, double radius) {
  return [center, radius](Vec2 x) {
    const Vec2 d = x - center;
    return center + (radius / norm(d)) * d;
  };
}

namespace {

// Child corners in parent barycentrics. Children 0..2 sit at parent
// vertices 0..2, child 3 is the middle triangle; all counterclockwise.
constexpr Barycentric kP0{1, 0, 0}, kP1{0, 1, 0}, kP2{0, 0, 1};
constexpr Barycentric kM01{0.5, 0.5, 0}, kM12{0, 0.5, 0.5}, kM20{0.5, 0, 0.5};
const std::array<std::array<Barycentric, 3>, 4> kChildren{{
    {kP0, kM01, kM20},
    {kM01, kP1, kM12},
    {kM20, kM12, kP2},
    {kM12, kM20, kM01},
}};

}  // namespace

const std::array<Barycentric, 3>& child_corners_in_parent(int child) { return kChildren.at(child); }

Barycentric child_to_parent(int child, const Barycentric& lambda) {
  const auto& c = kChildren[child];
  Barycentric out{0, 0, 0};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) out[k] += lambda[i] * c[i][k];
  return out;
}

Refinement refine_regular(const TriMesh& mesh, const BoundaryProjector& snap) {
  const auto nv = static_cast<Index>(mesh.num_vertices());
  std::vector<Vec2> vertices = mesh.vertices();
  Refinement out;
  out.map.coarse_cells = mesh.num_cells();

  const double max_move = 0.5 * mesh.h_max();
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const auto& edge = mesh.edges()[e];
    const Vec2 mid = 0.5 * (mesh.vertex(edge.v[0]) + mesh.vertex(edge.v[1]));
    Vec2 x = mid;
    const auto tag = mesh.boundary_tag(static_cast<Index>(e));
    if (snap && tag == BoundaryTag::Scatterer) {
      x = snap(mid);
      if (!(norm(x - mid) <= max_move))
        throw MeshError("boundary projector moved a vertex by more than h_max/2");
      out.map.boundary_snap.push_back({nv + static_cast<Index>(e), mid, x});
    }
    vertices.push_back(x);
  }

  std::vector<std::array<Index, 3>> cells;
  cells.reserve(4 * mesh.num_cells());
  out.map.parent_cell.reserve(4 * mesh.num_cells());
  out.map.child_index.reserve(4 * mesh.num_cells());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto& v = mesh.cells()[c];
    const auto& ce = mesh.cell_edges()[c].edge;
    // local edge i is opposite vertex i
    const Index m12 = nv + ce[0], m20 = nv + ce[1], m01 = nv + ce[2];
    const std::array<std::array<Index, 3>, 4> kids{{
        {v[0], m01, m20},
        {m01, v[1], m12},
        {m20, m12, v[2]},
        {m12, m20, m01},
    }};
    for (int k = 0; k < 4; ++k) {
      cells.push_back(kids[k]);
      out.map.parent_cell.push_back(static_cast<Index>(c));
      out.map.child_index.push_back(static_cast<std::uint8_t>(k));
    }
  }

  std::vector<BoundarySegment> boundary;
  for (Index e : mesh.boundary_edges()) {
    const auto& edge = mesh.edges()[e];
    const auto tag = *mesh.boundary_tag(e);
    boundary.push_back({edge.v[0], nv + e, tag});
    boundary.push_back({nv + e, edge.v[1], tag});
  }
  // child order must survive build(), so snapping may not invert a child
  for (const auto& cell : cells)
    if (signed_area2(vertices[cell[0]], vertices[cell[1]], vertices[cell[2]]) <= 0)
      throw MeshError("boundary snapping inverted a refined cell");
  out.mesh = TriMesh::build(std::move(vertices), std::move(cells), boundary);
  return out;
}

std::vector<double> prolong_p0(std::span<const double> coarse, const RefinementMap& map) {
  if (coarse.size() != map.coarse_cells) throw std::invalid_argument("prolong_p0: field does not match coarse mesh");
  std::vector<double> fine(map.parent_cell.size());
  for (std::size_t c = 0; c < fine.size(); ++c) fine[c] = coarse[map.parent_cell[c]];
  return fine;
}

}  // namespace mixedwave
