#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mixedwave/mesh.hpp"
#include "mixedwave/quadrature.hpp"

namespace mixedwave {

using ScalarFunction = std::function<double(Vec2)>;
using VectorFunction = std::function<Vec2(Vec2)>;

// --- reference element ---------------------------------------------------

/// Lowest-order BDM element on conv{(0,0),(1,0),(0,1)}.
///
/// Local DOF j = 2*i + k belongs to local edge i (opposite vertex i) and to
/// its endpoint k, which is vertex (i+1)%3 for k = 0 and (i+2)%3 for k = 1.
/// The functional is the outward normal component of the field at that
/// endpoint. Each shape function is lambda_a * w with a constant vector w.
namespace reference_bdm1 {

inline constexpr int kDofs = 6;

int dof_vertex(int j);
Vec2 vertex(int a);
/// Outward unit normal of reference edge i.
Vec2 normal(int i);
double edge_length(int i);
Vec2 shape(int j, Vec2 xhat);
double divergence(int j);
double functional(int i, const VectorFunction& v);

}  // namespace reference_bdm1

struct AffineMap {
  Vec2 origin;
  std::array<std::array<double, 2>, 2> jacobian;
  double det;

  Vec2 apply(Vec2 xhat) const;
  Vec2 jacobian_times(Vec2 v) const;
  Vec2 inverse(Vec2 x) const;
};

/// x = x0 + J xhat with columns x1 - x0 and x2 - x0.
AffineMap affine_map(const std::array<Vec2, 3>& corners);

/// Contravariant Piola transform (1/det J) J vhat. Throws on a degenerate map.
Vec2 piola(const AffineMap& map, Vec2 vhat);

// --- global space --------------------------------------------------------

/// Velocity DOFs: one per (edge, endpoint), numbered contiguously per mesh
/// vertex so that the lumped mass is block diagonal. Pressure DOFs: one per
/// cell.
struct DofMap {
  std::vector<Index> block_offsets;           // size V + 1
  std::vector<std::array<Index, 2>> edge_dofs;  // dof of edge at v[0], v[1]
  std::vector<Index> dof_edge;
  std::vector<Index> dof_vertex;
  std::vector<char> constrained;              // NeumannU edges
  std::size_t num_pressure = 0;

  std::size_t num_velocity() const { return dof_edge.size(); }
  std::size_t num_blocks() const { return block_offsets.size() - 1; }
  Index block_begin(Index v) const { return block_offsets[v]; }
  Index block_size(Index v) const { return block_offsets[v + 1] - block_offsets[v]; }
};

/// Physical shape function j on a cell: phi_j = lambda_{vertex[j]} * w[j],
/// normalized so that phi_j(a) . n_E = 1 with the global edge normal n_E.
struct Bdm1Element {
  std::array<Index, 6> dof;
  std::array<int, 6> vertex;
  std::array<Vec2, 6> w;
  std::array<Vec2, 3> grad_lambda;
  double area;

  Vec2 eval(const Barycentric& lambda, std::span<const double> coeffs) const;
  double divergence(int j) const { return dot(grad_lambda[vertex[j]], w[j]); }
};

class Bdm1Space {
 public:
  /// Keeps a reference to `mesh`, which must outlive the space.
  explicit Bdm1Space(const TriMesh& mesh);

  const TriMesh& mesh() const { return *mesh_; }
  const DofMap& dofs() const { return dofs_; }
  const Bdm1Element& element(Index cell) const { return elements_[cell]; }
  std::size_t num_velocity() const { return dofs_.num_velocity(); }
  std::size_t num_pressure() const { return dofs_.num_pressure; }

 private:
  const TriMesh* mesh_;
  DofMap dofs_;
  std::vector<Bdm1Element> elements_;
};

/// Piecewise linear, discontinuous: values at the three corners of each cell.
struct P1Field {
  std::vector<std::array<double, 3>> values;

  double cell_mean(Index cell) const {
    const auto& v = values[cell];
    return (v[0] + v[1] + v[2]) / 3.0;
  }
};

/// Standard BDM1 interpolant: on each edge the normal trace is the L2(e)
/// projection of u . n_E onto P1(e), stored by endpoint values.
std::vector<double> interpolate_bdm1(const Bdm1Space& space, const VectorFunction& u);

/// Cell averages with the degree-6 rule.
std::vector<double> project_p0(const TriMesh& mesh, const ScalarFunction& p);

/// Point evaluation inside `cell`; throws if the point lies outside it by
/// more than 1e-12 in barycentric coordinates.
Vec2 eval_velocity(const Bdm1Space& space, std::span<const double> coeffs, Index cell, Vec2 x);
double eval_p0(const TriMesh& mesh, std::span<const double> coeffs, Index cell, Vec2 x);
double eval_p1(const TriMesh& mesh, const P1Field& field, Index cell, Vec2 x);

/// Per-cell divergence (constant) of a velocity field.
std::vector<double> cell_divergence(const Bdm1Space& space, std::span<const double> coeffs);

}  // namespace mixedwave
