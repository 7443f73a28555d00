#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "helpers.hpp"
#include "mixedwave/mesh.hpp"
#include "mixedwave/scenarios.hpp"

using namespace mixedwave;

TEST_CASE("rectangle mesh counts") {
  const auto m1 = generate_rect_mesh({-1, -1, 1, 1}, 1);
  CHECK(m1.num_vertices() == 9);
  CHECK(m1.num_cells() == 8);
  CHECK(m1.num_edges() == 16);
  const auto m8 = generate_rect_mesh({-1, -1, 1, 1}, 8);
  CHECK(m8.num_vertices() == 289);
  CHECK(m8.num_cells() == 512);
  CHECK(m8.num_edges() == 800);
  const auto report = validate(m8, 0.2);
  CHECK(report.euler_characteristic == 1);
  CHECK(report.boundary_loops == 1);
  CHECK(report.min_signed_area > 0.0);
  CHECK(m8.h_max() == doctest::Approx(std::sqrt(2.0) / 8));
}

TEST_CASE("edge orientation and cell signs") {
  const auto mesh = test::skewed_square(4);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto x = mesh.corners(static_cast<Index>(c));
    CHECK(signed_area2(x[0], x[1], x[2]) > 0.0);
    const auto& ce = mesh.cell_edges()[c];
    for (int i = 0; i < 3; ++i) {
      const auto& e = mesh.edges()[ce.edge[i]];
      CHECK(e.v[0] < e.v[1]);
      const Vec2 mid = 0.5 * (x[(i + 1) % 3] + x[(i + 2) % 3]);
      const Vec2 outward = mid - x[i];
      CHECK((dot(outward, e.normal) > 0.0 ? 1 : -1) == ce.sign[i]);
    }
  }
}

TEST_CASE("interior edges have two cells with opposite signs") {
  const auto mesh = test::unit_square(3);
  std::vector<int> sum(mesh.num_edges(), 0);
  for (const auto& ce : mesh.cell_edges())
    for (int i = 0; i < 3; ++i) sum[ce.edge[i]] += ce.sign[i];
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.is_boundary(static_cast<Index>(e)))
      CHECK(std::abs(sum[e]) == 1);
    else
      CHECK(sum[e] == 0);
  }
}

TEST_CASE("lshape mesh") {
  const auto mesh = generate_lshape_mesh(2);
  CHECK(mesh.num_cells() == 24);
  double area = 0.0;
  for (double a : mesh.areas()) area += a;
  CHECK(area == doctest::Approx(3.0));
  CHECK(validate(mesh).euler_characteristic == 1);
}

TEST_CASE("mesh file round trip") {
  const auto mesh = test::skewed_square(2);
  std::stringstream ss;
  write_mesh(ss, mesh);
  const auto back = read_mesh(ss);
  CHECK(back.num_vertices() == mesh.num_vertices());
  CHECK(back.num_cells() == mesh.num_cells());
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    CHECK(back.vertices()[v].x == mesh.vertices()[v].x);
    CHECK(back.vertices()[v].y == mesh.vertices()[v].y);
  }
}

namespace {

std::string read_error(const std::string& text) {
  std::istringstream in(text);
  try {
    read_mesh(in);
  } catch (const MeshError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("mesh reader errors") {
  CHECK(read_error("trimesh 2\n").find("line 1") != std::string::npos);
  CHECK(read_error("trimesh 1\nvertices 3\n0 0\n1 0\n").find("unexpected end") != std::string::npos);
  const std::string tri = "trimesh 1\nvertices 3\n0 0\n1 0\n0 1\ncells 1\n0 1 2\nboundary 3\n";
  CHECK(read_error(tri + "0 1 dirichlet_p\n1 2 dirichlet_p\n0 2 bogus\n").find("line 11") != std::string::npos);
  CHECK(read_error(tri + "0 1 dirichlet_p\n1 2 dirichlet_p\n").find("unexpected end") != std::string::npos);
  CHECK(read_error(tri + "0 1 dirichlet_p\n1 2 dirichlet_p\n0 2 neumann_u\n").empty());
  CHECK_FALSE(read_error("trimesh 1\nvertices 3\n0 0\n1 0\n2 0\ncells 1\n0 1 2\nboundary 0\n").empty());
}

TEST_CASE("regular refinement") {
  const auto mesh = test::skewed_square(2);
  const auto r = refine_regular(mesh);
  CHECK(r.mesh.num_cells() == 4 * mesh.num_cells());
  CHECK(r.mesh.num_vertices() == mesh.num_vertices() + mesh.num_edges());
  CHECK(r.map.coarse_cells == mesh.num_cells());
  for (std::size_t c = 0; c < r.mesh.num_cells(); ++c) {
    const Index parent = r.map.parent_cell[c];
    const auto pc = mesh.corners(parent);
    const auto fc = r.mesh.corners(static_cast<Index>(c));
    CHECK(r.mesh.area(static_cast<Index>(c)) == doctest::Approx(mesh.area(parent) / 4));
    const auto& in_parent = child_corners_in_parent(r.map.child_index[c]);
    for (int k = 0; k < 3; ++k) {
      const Vec2 x = from_barycentric(pc, in_parent[k]);
      CHECK(x.x == doctest::Approx(fc[k].x));
      CHECK(x.y == doctest::Approx(fc[k].y));
    }
    const Barycentric l{0.2, 0.3, 0.5};
    const Vec2 a = from_barycentric(fc, l), b = from_barycentric(pc, child_to_parent(r.map.child_index[c], l));
    CHECK(a.x == doctest::Approx(b.x));
    CHECK(a.y == doctest::Approx(b.y));
  }
  const std::vector<double> coarse{1, 2, 3, 4, 5, 6, 7, 8};
  const auto fine = prolong_p0(coarse, r.map);
  for (std::size_t c = 0; c < fine.size(); ++c) CHECK(fine[c] == coarse[r.map.parent_cell[c]]);
}

TEST_CASE("scattering asset and snapped refinement") {
  const auto sc = scattering_scenario();
  const auto coarse = read_mesh_file(sc.mesh_file);
  const auto report = validate(coarse, 0.1);
  CHECK(report.euler_characteristic == 1);
  int scatterer = 0, dirichlet = 0;
  for (Index e : coarse.boundary_edges()) {
    const auto tag = *coarse.boundary_tag(e);
    if (tag == BoundaryTag::Scatterer) {
      ++scatterer;
      for (Index v : coarse.edges()[e].v) CHECK(norm(coarse.vertex(v) - sc.obstacle_center) == doctest::Approx(sc.obstacle_radius));
    }
    if (tag == BoundaryTag::DirichletP) ++dirichlet;
  }
  CHECK(scatterer > 0);
  CHECK(dirichlet > 0);

  const auto r = refine_regular(coarse, circle_projector(sc.obstacle_center, sc.obstacle_radius));
  CHECK(r.map.boundary_snap.size() == static_cast<std::size_t>(scatterer));
  for (const auto& s : r.map.boundary_snap) {
    CHECK(norm(s.snapped - sc.obstacle_center) == doctest::Approx(sc.obstacle_radius).epsilon(1e-14));
    CHECK(norm(s.unsnapped - sc.obstacle_center) < sc.obstacle_radius);
  }
  validate(r.mesh, 0.1);

  const auto levels = build_levels(sc, {3, 4});
  REQUIRE(levels.size() == 2);
  CHECK(levels[1].from_coarser.has_value());
  CHECK(levels[1].mesh.num_cells() == 4 * levels[0].mesh.num_cells());
}

TEST_CASE("perturbation keeps the boundary") {
  const auto base = test::unit_square(4);
  const auto mesh = perturb_interior_vertices(base, 0.05, 3);
  for (std::size_t v = 0; v < base.num_vertices(); ++v) {
    const Vec2 a = base.vertices()[v], b = mesh.vertices()[v];
    const bool boundary = a.x == 0.0 || a.x == 1.0 || a.y == 0.0 || a.y == 1.0;
    if (boundary) {
      CHECK(a.x == b.x);
      CHECK(a.y == b.y);
    }
    CHECK(norm(a - b) <= 0.05 + 1e-15);
  }
  CHECK_THROWS_AS(perturb_interior_vertices(base, 10.0, 3), MeshError);
}
