#include "mixedwave/vtk.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

namespace mixedwave {

VtkField vtk_p0(const std::string& name, std::span<const double> coeffs) {
  return {name, VtkField::Kind::cell_scalar, {coeffs.begin(), coeffs.end()}};
}

VtkField vtk_p1(const std::string& name, const P1Field& field) {
  VtkField f{name, VtkField::Kind::point_scalar, {}};
  for (const auto& v : field.values) f.data.insert(f.data.end(), v.begin(), v.end());
  return f;
}

VtkField vtk_bdm1(const std::string& name, const Bdm1Space& space, std::span<const double> coeffs) {
  VtkField f{name, VtkField::Kind::point_vector, {}};
  for (std::size_t c = 0; c < space.num_pressure(); ++c)
    for (int a = 0; a < 3; ++a) {
      Barycentric l{0, 0, 0};
      l[a] = 1.0;
      const Vec2 u = space.element(static_cast<Index>(c)).eval(l, coeffs);
      f.data.push_back(u.x);
      f.data.push_back(u.y);
    }
  return f;
}

void write_vtk(std::ostream& out, const TriMesh& mesh, std::span<const VtkField> fields, const std::string& title) {
  const std::size_t nc = mesh.num_cells(), np = 3 * nc;
  for (const auto& f : fields) {
    const std::size_t expected =
        f.kind == VtkField::Kind::cell_scalar ? nc : (f.kind == VtkField::Kind::point_scalar ? np : 2 * np);
    if (f.data.size() != expected) throw std::invalid_argument("vtk field '" + f.name + "' has the wrong size");
    if (f.name.empty() || f.name.find_first_of(" \t\n") != std::string::npos)
      throw std::invalid_argument("vtk field names must be nonempty without whitespace");
  }
  const auto old_precision = out.precision(12);
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << np << " double\n";
  for (std::size_t c = 0; c < nc; ++c)
    for (const Vec2& x : mesh.corners(static_cast<Index>(c))) out << x.x << " " << x.y << " 0\n";
  out << "CELLS " << nc << " " << 4 * nc << "\n";
  for (std::size_t c = 0; c < nc; ++c) out << "3 " << 3 * c << " " << 3 * c + 1 << " " << 3 * c + 2 << "\n";
  out << "CELL_TYPES " << nc << "\n";
  for (std::size_t c = 0; c < nc; ++c) out << "5\n";

  bool cell_header = false, point_header = false;
  for (const auto& f : fields) {
    if (f.kind != VtkField::Kind::cell_scalar) continue;
    if (!cell_header) out << "CELL_DATA " << nc << "\n";
    cell_header = true;
    out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : f.data) out << v << "\n";
  }
  for (const auto& f : fields) {
    if (f.kind == VtkField::Kind::cell_scalar) continue;
    if (!point_header) out << "POINT_DATA " << np << "\n";
    point_header = true;
    if (f.kind == VtkField::Kind::point_scalar) {
      out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : f.data) out << v << "\n";
    } else {
      out << "VECTORS " << f.name << " double\n";
      for (std::size_t i = 0; i < np; ++i) out << f.data[2 * i] << " " << f.data[2 * i + 1] << " 0\n";
    }
  }
  out.precision(old_precision);
}

void write_vtk_file(const std::string& path, const TriMesh& mesh, std::span<const VtkField> fields,
                    const std::string& title) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_vtk(out, mesh, fields, title);
  if (!out) throw std::runtime_error("error writing " + path);
}

}  // namespace mixedwave
