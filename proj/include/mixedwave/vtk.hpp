#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mixedwave/fem.hpp"

namespace mixedwave {

/// A field on a mesh written with duplicated per-cell corner points.
struct VtkField {
  enum class Kind { cell_scalar, point_scalar, point_vector };
  std::string name;
  Kind kind;
  /// cell_scalar: C values; point_scalar: 3C; point_vector: 3C (x, y) pairs.
  std::vector<double> data;
};

VtkField vtk_p0(const std::string& name, std::span<const double> coeffs);
VtkField vtk_p1(const std::string& name, const P1Field& field);
/// BDM1 field sampled at the corners of each cell.
VtkField vtk_bdm1(const std::string& name, const Bdm1Space& space, std::span<const double> coeffs);

/// Legacy ASCII VTK 3.0 unstructured grid, triangles (cell type 5), 3C points.
void write_vtk(std::ostream& out, const TriMesh& mesh, std::span<const VtkField> fields,
               const std::string& title = "mixedwave");
void write_vtk_file(const std::string& path, const TriMesh& mesh, std::span<const VtkField> fields,
                    const std::string& title = "mixedwave");

}  // namespace mixedwave
