#include "mixedwave/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mixedwave {

double GaussianProfile::value(double s) const {
  const double z = s + shift;
  return amplitude * std::exp(-rate * z * z);
}

double GaussianProfile::derivative(double s) const { return -2.0 * rate * (s + shift) * value(s); }

double GaussianProfile::antiderivative(double s) const {
  return amplitude * 0.5 * std::sqrt(std::numbers::pi / rate) * std::erf(std::sqrt(rate) * (s + shift));
}

double PlaneWave::pressure_integral(Vec2 x, double t) const {
  const double phi = dot(k, x);
  return g.antiderivative(phi) - g.antiderivative(phi - t);
}

void Scenario::check() const {
  if (std::abs(norm(wave.k) - 1.0) > 1e-14) throw std::invalid_argument("wave vector must have unit length");
  if (!(final_time >= 0.0)) throw std::invalid_argument("final time must be nonnegative");
  if (!(tau_value > 0.0)) throw std::invalid_argument("time step parameter must be positive");
  if (!(wave.g.rate > 0.0)) throw std::invalid_argument("profile rate must be positive");
  if (domain == DomainKind::scattering && mesh_file.empty())
    throw std::invalid_argument("scattering domain needs a mesh file");
  if (!(rect.x1 > rect.x0 && rect.y1 > rect.y0)) throw std::invalid_argument("empty rectangle");
  if (!(jitter >= 0.0 && jitter < 0.5)) throw std::invalid_argument("jitter must lie in [0, 0.5)");
}

Scenario plane_wave_scenario() {
  Scenario s;
  s.name = "plane_wave";
  s.wave.k = Vec2{2.0, 1.0} / std::sqrt(5.0);
  s.wave.g = {1.0, 2.0, 5.0};
  s.final_time = 5.0;
  s.levels = {3, 4, 5, 6};
  s.tau_rule = TauRule::fraction_of_h;
  s.tau_value = 0.25;
  return s;
}

Scenario scattering_scenario() {
  Scenario s;
  s.name = "scattering";
  s.domain = DomainKind::scattering;
  s.mesh_file = std::string(MIXEDWAVE_DATA_DIR) + "/scattering_coarse.mesh";
  s.wave.k = {1.0, 0.0};
  s.wave.g = {2.0, 10.0, 3.0};
  s.has_exact = false;
  s.final_time = 2.0;
  s.levels = {3, 4, 5, 6};
  s.tau_rule = TauRule::fixed;
  s.tau_value = 1e-3;
  return s;
}

Scenario lshape_scenario() {
  Scenario s = plane_wave_scenario();
  s.name = "lshape";
  s.domain = DomainKind::lshape;
  return s;
}

Scenario cavity_scenario() {
  Scenario s;
  s.name = "cavity";
  s.sides.fill(BoundaryTag::NeumannU);
  s.has_exact = false;
  s.boundary_data = false;
  s.final_time = 1.0;
  s.levels = {3};
  return s;
}

Scenario scenario_by_name(const std::string& name) {
  if (name == "plane_wave") return plane_wave_scenario();
  if (name == "scattering") return scattering_scenario();
  if (name == "lshape") return lshape_scenario();
  if (name == "cavity") return cavity_scenario();
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

TriMesh apply_side_tags(const TriMesh& mesh, const Scenario& s) {
  const double tol = 1e-9 * (s.rect.x1 - s.rect.x0);
  std::vector<BoundarySegment> segments;
  for (Index e : mesh.boundary_edges()) {
    const auto& edge = mesh.edges()[e];
    const Vec2 m = 0.5 * (mesh.vertex(edge.v[0]) + mesh.vertex(edge.v[1]));
    BoundaryTag tag = *mesh.boundary_tag(e);
    if (std::abs(m.x - s.rect.x0) < tol)
      tag = s.sides[0];
    else if (std::abs(m.x - s.rect.x1) < tol)
      tag = s.sides[1];
    else if (std::abs(m.y - s.rect.y0) < tol)
      tag = s.sides[2];
    else if (std::abs(m.y - s.rect.y1) < tol)
      tag = s.sides[3];
    segments.push_back({edge.v[0], edge.v[1], tag});
  }
  return TriMesh::build(mesh.vertices(), mesh.cells(), segments);
}

namespace {

bool uniform_sides(const Scenario& s) {
  for (auto t : s.sides)
    if (t != s.sides[0]) return false;
  return true;
}

}  // namespace

TriMesh build_mesh(const Scenario& s, int level) {
  if (level < 0 || level > 12) throw std::invalid_argument("mesh level out of range: " + std::to_string(level));
  const int n = 1 << level;
  if (s.domain != DomainKind::scattering) {
    auto mesh = s.domain == DomainKind::rectangle ? generate_rect_mesh(s.rect, n, s.sides[0])
                                                  : generate_lshape_mesh(n, s.sides[0]);
    if (!uniform_sides(s)) mesh = apply_side_tags(mesh, s);
    if (s.jitter > 0.0) mesh = perturb_interior_vertices(mesh, s.jitter / n, s.mesh_seed + level);
    return mesh;
  }
  if (level < s.coarse_level) throw std::invalid_argument("level is coarser than the scattering asset");
  auto mesh = read_mesh_file(s.mesh_file);
  const auto snap = circle_projector(s.obstacle_center, s.obstacle_radius);
  for (int k = s.coarse_level; k < level; ++k) mesh = refine_regular(mesh, snap).mesh;
  return mesh;
}

std::vector<MeshLevel> build_levels(const Scenario& s, const std::vector<int>& levels) {
  std::vector<MeshLevel> out;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (i > 0 && levels[i] <= levels[i - 1]) throw std::invalid_argument("mesh levels must increase");
    const double h = std::ldexp(1.0, -levels[i]);
    if (s.domain != DomainKind::scattering) {
      out.push_back({levels[i], h, build_mesh(s, levels[i]), std::nullopt});
      continue;
    }
    if (i == 0) {
      out.push_back({levels[i], h, build_mesh(s, levels[i]), std::nullopt});
      continue;
    }
    if (levels[i] != levels[i - 1] + 1) throw std::invalid_argument("scattering levels must be consecutive");
    auto r = refine_regular(out.back().mesh, circle_projector(s.obstacle_center, s.obstacle_radius));
    out.push_back({levels[i], h, std::move(r.mesh), std::move(r.map)});
  }
  return out;
}

}  // namespace mixedwave
