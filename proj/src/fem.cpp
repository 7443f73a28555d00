#include "mixedwave/fem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mixedwave {

namespace reference_bdm1 {

int dof_vertex(int j) {
  const int i = j / 2;
  return j % 2 == 0 ? (i + 1) % 3 : (i + 2) % 3;
}

Vec2 vertex(int a) {
  static constexpr std::array<Vec2, 3> v{{{0, 0}, {1, 0}, {0, 1}}};
  return v.at(a);
}

Vec2 normal(int i) {
  const Vec2 t = vertex((i + 2) % 3) - vertex((i + 1) % 3);
  return -rot90(t) / norm(t);
}

double edge_length(int i) { return norm(vertex((i + 2) % 3) - vertex((i + 1) % 3)); }

namespace {

double lambda(int a, Vec2 x) {
  switch (a) {
    case 0:
      return 1.0 - x.x - x.y;
    case 1:
      return x.x;
    default:
      return x.y;
  }
}

Vec2 grad_lambda(int a) {
  switch (a) {
    case 0:
      return {-1, -1};
    case 1:
      return {1, 0};
    default:
      return {0, 1};
  }
}

Vec2 dual_vector(int j) {
  const int a = dof_vertex(j);
  const int i = j / 2;
  const int other = 3 - a - i;
  const Vec2 t = rot90(normal(other));
  return t / dot(t, normal(i));
}

}  // namespace

Vec2 shape(int j, Vec2 xhat) { return lambda(dof_vertex(j), xhat) * dual_vector(j); }

double divergence(int j) { return dot(grad_lambda(dof_vertex(j)), dual_vector(j)); }

double functional(int i, const VectorFunction& v) { return dot(v(vertex(dof_vertex(i))), normal(i / 2)); }

}  // namespace reference_bdm1

Vec2 AffineMap::apply(Vec2 xhat) const { return origin + jacobian_times(xhat); }

Vec2 AffineMap::jacobian_times(Vec2 v) const {
  return {jacobian[0][0] * v.x + jacobian[0][1] * v.y, jacobian[1][0] * v.x + jacobian[1][1] * v.y};
}

Vec2 AffineMap::inverse(Vec2 x) const {
  const Vec2 d = x - origin;
  return {(jacobian[1][1] * d.x - jacobian[0][1] * d.y) / det, (-jacobian[1][0] * d.x + jacobian[0][0] * d.y) / det};
}

AffineMap affine_map(const std::array<Vec2, 3>& c) {
  AffineMap m;
  m.origin = c[0];
  const Vec2 e1 = c[1] - c[0], e2 = c[2] - c[0];
  m.jacobian = {{{e1.x, e2.x}, {e1.y, e2.y}}};
  m.det = cross(e1, e2);
  return m;
}

Vec2 piola(const AffineMap& map, Vec2 vhat) {
  if (std::abs(map.det) < 1e-300) throw std::invalid_argument("piola: degenerate cell");
  return map.jacobian_times(vhat) / map.det;
}

// --- global space --------------------------------------------------------

Bdm1Space::Bdm1Space(const TriMesh& mesh) : mesh_(&mesh) {
  const auto nv = mesh.num_vertices();
  dofs_.block_offsets.assign(nv + 1, 0);
  dofs_.edge_dofs.assign(mesh.num_edges(), {-1, -1});
  Index next = 0;
  for (std::size_t v = 0; v < nv; ++v) {
    dofs_.block_offsets[v] = next;
    for (Index e : mesh.vertex_edges(static_cast<Index>(v))) {
      const int k = mesh.edges()[e].v[0] == static_cast<Index>(v) ? 0 : 1;
      dofs_.edge_dofs[e][k] = next++;
      dofs_.dof_edge.push_back(e);
      dofs_.dof_vertex.push_back(static_cast<Index>(v));
    }
  }
  dofs_.block_offsets[nv] = next;
  dofs_.num_pressure = mesh.num_cells();
  dofs_.constrained.assign(dofs_.num_velocity(), 0);
  for (std::size_t d = 0; d < dofs_.num_velocity(); ++d)
    if (mesh.boundary_tag(dofs_.dof_edge[d]) == BoundaryTag::NeumannU) dofs_.constrained[d] = 1;

  elements_.resize(mesh.num_cells());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto x = mesh.corners(static_cast<Index>(c));
    const auto& cell = mesh.cells()[c];
    const auto& ce = mesh.cell_edges()[c];
    auto& el = elements_[c];
    el.area = mesh.area(static_cast<Index>(c));
    for (int i = 0; i < 3; ++i) el.grad_lambda[i] = rot90(x[(i + 2) % 3] - x[(i + 1) % 3]) / (2.0 * el.area);
    for (int j = 0; j < 6; ++j) {
      const int i = j / 2;
      const int a = reference_bdm1::dof_vertex(j);
      const Index e = ce.edge[i];
      const auto& edge = mesh.edges()[e];
      el.vertex[j] = a;
      el.dof[j] = dofs_.edge_dofs[e][edge.v[0] == cell[a] ? 0 : 1];
      const int other = 3 - a - i;
      const Vec2 t = x[(other + 2) % 3] - x[(other + 1) % 3];
      el.w[j] = t / dot(t, edge.normal);
    }
  }
}

Vec2 Bdm1Element::eval(const Barycentric& lambda, std::span<const double> coeffs) const {
  Vec2 u{};
  for (int j = 0; j < 6; ++j) u += (coeffs[dof[j]] * lambda[vertex[j]]) * w[j];
  return u;
}

std::vector<double> interpolate_bdm1(const Bdm1Space& space, const VectorFunction& u) {
  const auto& mesh = space.mesh();
  const auto& g = gauss4();
  std::vector<double> coeffs(space.num_velocity(), 0.0);
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const auto& edge = mesh.edges()[e];
    const Vec2 a = mesh.vertex(edge.v[0]), b = mesh.vertex(edge.v[1]);
    double m0 = 0.0, m1 = 0.0;
    for (int q = 0; q < 4; ++q) {
      const double s = g.nodes[q];
      const double f = dot(u(a + s * (b - a)), edge.normal);
      m0 += g.weights[q] * f * (1.0 - s);
      m1 += g.weights[q] * f * s;
    }
    // inverse of the P1 mass matrix [[1/3, 1/6], [1/6, 1/3]] on [0, 1]
    coeffs[space.dofs().edge_dofs[e][0]] = 4.0 * m0 - 2.0 * m1;
    coeffs[space.dofs().edge_dofs[e][1]] = -2.0 * m0 + 4.0 * m1;
  }
  return coeffs;
}

std::vector<double> project_p0(const TriMesh& mesh, const ScalarFunction& p) {
  const auto& rule = quad_rule(QuadKind::high_order);
  std::vector<double> out(mesh.num_cells());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto x = mesh.corners(static_cast<Index>(c));
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) sum += 2.0 * rule.weights[q] * p(from_barycentric(x, rule.points[q]));
    out[c] = sum;
  }
  return out;
}

namespace {

Barycentric locate(const TriMesh& mesh, Index cell, Vec2 x) {
  const auto lambda = to_barycentric(mesh.corners(cell), x);
  for (double l : lambda)
    if (l < -1e-12) throw std::out_of_range("point lies outside cell " + std::to_string(cell));
  return lambda;
}

}  // namespace

Vec2 eval_velocity(const Bdm1Space& space, std::span<const double> coeffs, Index cell, Vec2 x) {
  return space.element(cell).eval(locate(space.mesh(), cell, x), coeffs);
}

double eval_p0(const TriMesh& mesh, std::span<const double> coeffs, Index cell, Vec2 x) {
  locate(mesh, cell, x);
  return coeffs[cell];
}

double eval_p1(const TriMesh& mesh, const P1Field& field, Index cell, Vec2 x) {
  const auto l = locate(mesh, cell, x);
  const auto& v = field.values[cell];
  return l[0] * v[0] + l[1] * v[1] + l[2] * v[2];
}

std::vector<double> cell_divergence(const Bdm1Space& space, std::span<const double> coeffs) {
  std::vector<double> div(space.num_pressure(), 0.0);
  for (std::size_t c = 0; c < div.size(); ++c) {
    const auto& el = space.element(static_cast<Index>(c));
    for (int j = 0; j < 6; ++j) div[c] += coeffs[el.dof[j]] * el.divergence(j);
  }
  return div;
}

}  // namespace mixedwave
