#include <doctest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "mixedwave/analysis.hpp"
#include "mixedwave/kernels.hpp"

using namespace mixedwave;

TEST_CASE("eoc of exact power laws") {
  const std::vector<double> h{0.5, 0.25, 0.125};
  const std::vector<double> e{3.0 * 0.25, 3.0 * 0.0625, 3.0 * 0.015625};
  const auto r = eoc(h, e);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(eoc(std::vector<double>{1.0}, std::vector<double>{1.0}).empty());
}

TEST_CASE("l2 errors vanish for representable fields") {
  const auto mesh = test::skewed_square(3);
  const Bdm1Space space(mesh);
  const auto u = [](Vec2 x) { return Vec2{x.x - 2.0 * x.y, 1.0 + x.x}; };
  CHECK(error_l2(space, interpolate_bdm1(space, u), u) < 1e-13);
  const auto p = [](Vec2) { return 2.5; };
  CHECK(error_l2_p0(mesh, project_p0(mesh, p), p) < 1e-13);
  P1Field f;
  for (Index c = 0; c < static_cast<Index>(mesh.num_cells()); ++c) {
    const auto x = mesh.corners(c);
    f.values.push_back({x[0].x, x[1].x, x[2].x});
  }
  CHECK(error_l2_p1(mesh, f, [](Vec2 x) { return x.x; }) < 1e-13);
  CHECK(error_l2_p1(mesh, f, [](Vec2 x) { return x.x + 1.0; }) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p0_norm(mesh.areas(), std::vector<double>(mesh.num_cells(), 2.0)) == doctest::Approx(2.0));
}

TEST_CASE("inexact elliptic projection of constants") {
  const auto mesh = test::skewed_square(4);
  const Bdm1Space space(mesh);
  const InexactEllipticProjector projector(space);
  const Vec2 w{0.4, -1.1};
  const auto res = projector.project([&](Vec2) { return w; }, [](Vec2) { return 0.0; });
  const auto expected = interpolate_bdm1(space, [&](Vec2) { return w; });
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(std::abs(res.w[i] - expected[i]) < 1e-10);
  for (double r : res.r) CHECK(std::abs(r) < 1e-10);
}

TEST_CASE("inexact elliptic projection satisfies the divergence constraint") {
  const auto mesh = test::skewed_square(4);
  const Bdm1Space space(mesh);
  const InexactEllipticProjector projector(space);
  const auto w = [](Vec2 x) { return Vec2{std::sin(3.0 * x.x) * x.y, std::exp(x.x * x.y)}; };
  const auto r = [](Vec2 x) { return std::cos(2.0 * x.x + x.y); };
  const auto res = projector.project(w, r);
  const auto g = projector.divergence_rhs(w);
  const auto bw = assemble_div(space).multiply(res.w);
  for (std::size_t c = 0; c < g.size(); ++c) CHECK(std::abs(bw[c] - g[c]) < 1e-9);
  const auto f = projector.velocity_rhs(w, r);
  const auto lumped = assemble_lumped_mass(space, false);
  std::vector<double> mw(res.w.size());
  lumped.multiply(res.w, mw);
  const auto btr = assemble_div(space).transpose().multiply(res.r);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(mw[i] - btr[i] - f[i]) < 1e-8);
}

TEST_CASE("error report csv") {
  ErrorReport rep;
  rep.norms = {"a", "b"};
  rep.rows.push_back({0.5, 0.125, {1.0, 2.0}});
  rep.rows.push_back({0.25, 0.0625, {0.25, 1.0}});
  CHECK(rep.norm_index("b") == 1);
  CHECK_THROWS(rep.norm_index("c"));
  CHECK(rep.eoc_of("a")[0] == doctest::Approx(2.0));
  std::ostringstream out;
  rep.write_csv(out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "h,tau,a,eoc_a,b,eoc_b");
  std::getline(in, line);
  CHECK(line == "0.5,0.125,1,,2,");
  std::getline(in, line);
  CHECK(line == "0.25,0.0625,0.25,2,1,1");
  std::ostringstream digits;
  ErrorReport one;
  one.norms = {"x"};
  one.rows.push_back({1.0 / 3.0, 1.0, {2.0 / 3.0}});
  one.write_csv(digits);
  CHECK(digits.str().find("0.333333333333,") != std::string::npos);
  CHECK(digits.str().find("0.666666666667") != std::string::npos);
}

TEST_CASE("self convergence of identical fields is zero") {
  const auto coarse_mesh = test::unit_square(2);
  const auto r = refine_regular(coarse_mesh);
  const Bdm1Space coarse(coarse_mesh), fine(r.mesh);
  const auto u = [](Vec2 x) { return Vec2{x.y, 2.0 * x.x - 1.0}; };
  const auto p = [](Vec2 x) { return 1.0 + x.x - 3.0 * x.y; };
  const auto p1 = [&](const TriMesh& m) {
    P1Field f;
    for (Index c = 0; c < static_cast<Index>(m.num_cells()); ++c) {
      const auto x = m.corners(c);
      f.values.push_back({p(x[0]), p(x[1]), p(x[2])});
    }
    return f;
  };
  const auto n = self_convergence(fine, interpolate_bdm1(fine, u), p1(r.mesh), coarse, interpolate_bdm1(coarse, u),
                                  p1(coarse_mesh), r.map);
  CHECK(n.velocity < 1e-13);
  CHECK(n.pressure < 1e-13);
  const auto shifted = [&] {
    auto f = p1(r.mesh);
    for (auto& v : f.values)
      for (auto& x : v) x += 1.0;
    return f;
  }();
  const auto m = self_convergence(fine, interpolate_bdm1(fine, u), shifted, coarse, interpolate_bdm1(coarse, u),
                                  p1(coarse_mesh), r.map);
  CHECK(m.pressure == doctest::Approx(1.0).epsilon(1e-12));
}
