#include <fstream>
#include <iomanip>
#include <sstream>

#include "mixedwave/mesh.hpp"

namespace mixedwave {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-empty, non-comment line.
  std::istringstream next(const char* what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++number_;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") != std::string::npos) return std::istringstream(line);
    }
    fail(std::string("unexpected end of file, expected ") + what);
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw MeshError("mesh line " + std::to_string(number_) + ": " + msg);
  }

  template <typename... T>
  void parse(const char* what, T&... out) {
    auto ss = next(what);
    if (!(ss >> ... >> out)) fail(std::string("malformed ") + what);
    std::string rest;
    if (ss >> rest) fail(std::string("trailing text after ") + what);
  }

  std::size_t count(const char* keyword) {
    auto ss = next(keyword);
    std::string word;
    long n = -1;
    if (!(ss >> word >> n) || word != keyword || n < 0) fail(std::string("expected '") + keyword + " N'");
    return static_cast<std::size_t>(n);
  }

 private:
  std::istream& in_;
  int number_ = 0;
};

}  // namespace

TriMesh read_mesh(std::istream& in) {
  LineReader r(in);
  {
    auto ss = r.next("header");
    std::string magic;
    int version = 0;
    if (!(ss >> magic >> version) || magic != "trimesh" || version != 1) r.fail("expected header 'trimesh 1'");
  }
  std::vector<Vec2> vertices(r.count("vertices"));
  for (auto& v : vertices) r.parse("vertex", v.x, v.y);
  std::vector<std::array<Index, 3>> cells(r.count("cells"));
  for (auto& c : cells) r.parse("cell", c[0], c[1], c[2]);
  std::vector<BoundarySegment> boundary(r.count("boundary"));
  for (auto& seg : boundary) {
    std::string tag;
    r.parse("boundary segment", seg.a, seg.b, tag);
    const auto parsed = parse_boundary_tag(tag);
    if (!parsed) r.fail("unknown boundary tag '" + tag + "'");
    seg.tag = *parsed;
  }
  auto mesh = TriMesh::build(std::move(vertices), std::move(cells), boundary);
  validate(mesh);
  return mesh;
}

TriMesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file " + path);
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const TriMesh& mesh) {
  out << "trimesh 1\n";
  out << "vertices " << mesh.num_vertices() << "\n" << std::setprecision(17);
  for (const auto& v : mesh.vertices()) out << v.x << " " << v.y << "\n";
  out << "cells " << mesh.num_cells() << "\n";
  for (const auto& c : mesh.cells()) out << c[0] << " " << c[1] << " " << c[2] << "\n";
  const auto boundary = mesh.boundary_edges();
  out << "boundary " << boundary.size() << "\n";
  for (Index e : boundary) {
    const auto& edge = mesh.edges()[e];
    out << edge.v[0] << " " << edge.v[1] << " " << to_string(*mesh.boundary_tag(e)) << "\n";
  }
}

}  // namespace mixedwave
