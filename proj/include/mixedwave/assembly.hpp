#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mixedwave/fem.hpp"
#include "mixedwave/linalg.hpp"

namespace mixedwave {

/// Boundary pressure data p(x, t).
using BoundaryData = std::function<double(Vec2, double)>;

/// Vertex-rule velocity mass, one dense block per mesh vertex, factorized.
/// With apply_constraints, rows and columns of NeumannU DOFs are replaced
/// by identity.
BlockDiagMatrix assemble_lumped_mass(const Bdm1Space& space, bool apply_constraints = true);

/// Consistent velocity mass (exact for products of linears). No constraints.
CsrMatrix assemble_exact_mass(const Bdm1Space& space);

/// B(K, j) = integral over K of div phi_j.
CsrMatrix assemble_div(const Bdm1Space& space);

/// Diagonal of the P0 mass matrix, i.e. cell areas.
std::vector<double> pressure_mass(const TriMesh& mesh);

/// l_j = -integral over DirichletP edges of p(., t) (n . phi_j), with the
/// outward normal n; zero on constrained DOFs.
std::vector<double> assemble_boundary_load(const Bdm1Space& space, const BoundaryData& p, double t);

/// Copy of a square velocity matrix with constrained rows and columns
/// replaced by identity.
CsrMatrix constrain_velocity_matrix(const CsrMatrix& m, const DofMap& dofs);

/// Copy of B with the columns of constrained DOFs removed (zero).
CsrMatrix drop_constrained_columns(const CsrMatrix& b, const DofMap& dofs);

/// Zeroes constrained DOFs in place.
void apply_normal_bc(const DofMap& dofs, std::span<double> field);

namespace serial {

/// Element loop with scatter-add; reference for the parallel assemblers.
BlockDiagMatrix assemble_lumped_mass(const Bdm1Space& space, bool apply_constraints = true);
CsrMatrix assemble_exact_mass(const Bdm1Space& space);
CsrMatrix assemble_div(const Bdm1Space& space);

}  // namespace serial

}  // namespace mixedwave
