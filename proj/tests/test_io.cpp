#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "mixedwave/config.hpp"
#include "mixedwave/vtk.hpp"

using namespace mixedwave;

namespace {

std::string config_error(const std::string& text) {
  std::istringstream in(text);
  try {
    make_app_config(Config::parse(in, "test.cfg"));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

AppConfig app(const std::string& text) {
  std::istringstream in(text);
  return make_app_config(Config::parse(in, "test.cfg"));
}

}  // namespace

TEST_CASE("config values") {
  const auto a = app(R"(# comment
[scenario]
name = plane_wave   # trailing comment
levels = 2 3
final_time = 1.5
wave_vector = 3 4
[boundary]
bottom = neumann_u
[study]
velocity_space = constrained
[energy]
steps = 10
)");
  CHECK(a.scenario.levels == std::vector<int>{2, 3});
  CHECK(a.scenario.final_time == 1.5);
  CHECK(a.scenario.wave.k.x == doctest::Approx(0.6));
  CHECK(a.scenario.sides[2] == BoundaryTag::NeumannU);
  CHECK(a.study.velocity_postprocess.constrained);
  CHECK_FALSE(app("[scenario]\nname = cavity\n").study.velocity_postprocess.constrained);
  CHECK(a.energy.steps == 10);
  CHECK(a.run_level == 2);
}

TEST_CASE("config errors carry line numbers") {
  CHECK(config_error("[scenario]\nname = plane_wave\nlevels = 3 x\n") ==
        "test.cfg:3: scenario.levels: expected a list of integers, got 'x'");
  CHECK(config_error("name = plane_wave\n") == "test.cfg:1: key 'name' appears before any [section]");
  CHECK(config_error("[scenario]\n\nbogus = 1\n") == "test.cfg:3: scenario.bogus: unknown key");
  CHECK(config_error("[boundary]\nleft = open\n").find("test.cfg:2: boundary.left: unknown boundary tag 'open'") == 0);
  CHECK(config_error("[scenario]\nrate = 1\nrate = 2\n").find("test.cfg:3: duplicate key") == 0);
  CHECK(config_error("[scenario\n").find("test.cfg:1: malformed section header") == 0);
  CHECK(config_error("[scenario]\nname =\n").find("test.cfg:2: missing value") == 0);
  CHECK(config_error("[scenario]\nname = moon\n").find("test.cfg:2: scenario.name: unknown scenario") == 0);
  CHECK(config_error("[study]\nvelocity_space = half\n").find("test.cfg:2:") == 0);
  CHECK(config_error("[scenario]\nname = scattering\n[boundary]\ntop = neumann_u\n").find("test.cfg:4:") == 0);
  CHECK_THROWS_AS(Config::load("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("legacy vtk output") {
  const auto mesh = test::unit_square(1);
  const Bdm1Space space(mesh);
  std::vector<double> p{1.0, 2.0};
  const auto u = interpolate_bdm1(space, [](Vec2) { return Vec2{1.0, 0.0}; });
  P1Field pt{{{0.0, 0.5, 1.0}, {1.0, 2.0, 3.0}}};
  const std::vector<VtkField> fields{vtk_p0("p", p), vtk_p1("p_tilde", pt), vtk_bdm1("u", space, u)};
  std::ostringstream out;
  write_vtk(out, mesh, fields, "title");
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "# vtk DataFile Version 3.0");
  std::getline(in, line);
  CHECK(line == "title");
  std::getline(in, line);
  CHECK(line == "ASCII");
  std::getline(in, line);
  CHECK(line == "DATASET UNSTRUCTURED_GRID");
  std::getline(in, line);
  CHECK(line == "POINTS 6 double");
  const auto text = out.str();
  CHECK(text.find("CELLS 2 8\n3 0 1 2\n3 3 4 5\n") != std::string::npos);
  CHECK(text.find("CELL_TYPES 2\n5\n5\n") != std::string::npos);
  CHECK(text.find("CELL_DATA 2\nSCALARS p double 1\nLOOKUP_TABLE default\n1\n2\n") != std::string::npos);
  CHECK(text.find("POINT_DATA 6\n") != std::string::npos);
  CHECK(text.find("SCALARS p_tilde double 1\nLOOKUP_TABLE default\n0\n0.5\n1\n1\n2\n3\n") != std::string::npos);
  CHECK(text.find("VECTORS u double\n") != std::string::npos);
  const std::vector<VtkField> bad{vtk_p0("p", std::vector<double>{1.0})};
  CHECK_THROWS_AS(write_vtk(out, mesh, bad), std::invalid_argument);
}
