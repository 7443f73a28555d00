#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mixedwave/mesh.hpp"

namespace mixedwave {

/// s -> amplitude * exp(-rate (s + shift)^2)
struct GaussianProfile {
  double amplitude = 1.0;
  double rate = 1.0;
  double shift = 0.0;

  double value(double s) const;
  double derivative(double s) const;
  /// Closed-form antiderivative via erf, zero at s = -shift.
  double antiderivative(double s) const;
};

/// p = g(k.x - t), u = k g(k.x - t); solves dt u + grad p = 0,
/// dt p + div u = 0 when |k| = 1.
struct PlaneWave {
  Vec2 k{1.0, 0.0};
  GaussianProfile g;

  double phase(Vec2 x, double t) const { return dot(k, x) - t; }
  double pressure(Vec2 x, double t) const { return g.value(phase(x, t)); }
  Vec2 velocity(Vec2 x, double t) const { return g.value(phase(x, t)) * k; }
  /// Integral of the pressure over [0, t].
  double pressure_integral(Vec2 x, double t) const;
  double divergence(Vec2 x, double t) const { return dot(k, k) * g.derivative(phase(x, t)); }
};

enum class DomainKind { rectangle, lshape, scattering };
enum class TauRule { fraction_of_h, fixed };

struct Scenario {
  std::string name;
  DomainKind domain = DomainKind::rectangle;
  Rect rect{-1.0, -1.0, 1.0, 1.0};
  /// Side tags of rectangle/lshape domains: left, right, bottom, top.
  std::array<BoundaryTag, 4> sides{BoundaryTag::DirichletP, BoundaryTag::DirichletP, BoundaryTag::DirichletP,
                                   BoundaryTag::DirichletP};
  std::string mesh_file;  // scattering coarse mesh
  Vec2 obstacle_center{0.0, -1.0};
  double obstacle_radius = 0.2;
  /// Nominal mesh size of the coarse asset, 2^-coarse_level.
  int coarse_level = 3;
  /// Interior vertices of generated meshes are moved by up to jitter * h.
  double jitter = 0.0;
  std::uint64_t mesh_seed = 1;

  PlaneWave wave;
  /// Whether wave.pressure / wave.velocity solve the boundary value problem.
  bool has_exact = true;
  /// False for homogeneous boundary data.
  bool boundary_data = true;
  double final_time = 1.0;
  std::vector<int> levels;  // h = 2^-k
  TauRule tau_rule = TauRule::fraction_of_h;
  double tau_value = 0.25;  // tau = tau_value * h, or tau = tau_value

  double tau_for(double h) const { return tau_rule == TauRule::fixed ? tau_value : tau_value * h; }
  /// Throws std::invalid_argument on inconsistent parameters.
  void check() const;
};

Scenario plane_wave_scenario();
Scenario scattering_scenario();
Scenario lshape_scenario();
/// Closed box with NeumannU walls and no data; used for energy tests.
Scenario cavity_scenario();

/// Builds a scenario by name: plane_wave, scattering, lshape, cavity.
Scenario scenario_by_name(const std::string& name);

struct MeshLevel {
  int level;
  double h;  // nominal, 2^-level
  TriMesh mesh;
  /// Map from the previous (coarser) entry; only for nested hierarchies.
  std::optional<RefinementMap> from_coarser;
};

/// Meshes for the requested levels. Rectangle and L-shape meshes are
/// generated per level, scattering meshes by refining the coarse asset
/// with the boundary snapped to the obstacle circle.
std::vector<MeshLevel> build_levels(const Scenario& scenario, const std::vector<int>& levels);

/// Mesh for one level.
TriMesh build_mesh(const Scenario& scenario, int level);

/// Rebuilds `mesh` with the boundary tags of `scenario.sides`.
TriMesh apply_side_tags(const TriMesh& mesh, const Scenario& scenario);

}  // namespace mixedwave
