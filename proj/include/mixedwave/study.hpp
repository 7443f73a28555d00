#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mixedwave/analysis.hpp"
#include "mixedwave/integrator.hpp"
#include "mixedwave/postprocess.hpp"

namespace mixedwave {

enum class InitialVelocity { elliptic_projection, interpolant };

/// Fields available at a snapshot time.
struct Snapshot {
  double t;
  int n;
  const Bdm1Space* space;
  std::vector<double> p;        // P0
  P1Field p_tilde;
  std::vector<double> u_hat;    // BDM1
  std::vector<double> u_tilde;  // BDM1
};

struct StudyOptions {
  /// Time between observations of the expensive norms (post-processed
  /// velocity, velocity superconvergence, self-convergence); 0 means every
  /// step. Cheap norms are taken every step.
  double observe_interval = 0.0;
  bool postprocess = true;
  VelocityPostprocessOptions velocity_postprocess;
  bool superconvergence = true;
  InitialVelocity initial_velocity = InitialVelocity::elliptic_projection;
  bool allow_cfl_violation = false;
  /// Overrides the scenario's final time when >= 0.
  double final_time = -1.0;
  std::vector<double> snapshot_times;
  std::function<void(const Snapshot&)> on_snapshot;
  std::function<void(const std::string&)> log;
};

struct LevelResult {
  int level = 0;
  double h = 0.0;
  double tau = 0.0;
  int steps = 0;
  CflEstimate cfl;
  std::size_t cells = 0;
  std::size_t velocity_dofs = 0;
  std::vector<std::string> names;
  std::vector<double> values;
  double seconds = 0.0;

  double value(const std::string& name) const;
};

/// Post-processed fields kept at observation times for self-convergence.
struct ObservedFields {
  std::vector<int> steps;
  std::vector<std::vector<double>> u_tilde;
  std::vector<P1Field> p_tilde;
};

/// Runs one level. Norm names for scenarios with an exact solution:
/// u_hat_error, p_error, p_super and, if enabled, u_hat_super,
/// u_tilde_error, p_tilde_error; each is the maximum over observed levels.
/// When `keep` is given the post-processed fields at observation times are
/// stored in it.
LevelResult run_level(const Scenario& scenario, const MeshLevel& level, const StudyOptions& options,
                      ObservedFields* keep = nullptr);

/// Number of steps N = T / tau; throws when T is not a multiple of tau.
int step_count(double final_time, double tau);

/// All levels of the scenario. Exact-solution scenarios report the norms of
/// run_level; others report the self-convergence norms u_tilde_self and
/// p_tilde_self between consecutive levels (row h is the coarser one).
ErrorReport convergence_study(const Scenario& scenario, const StudyOptions& options);

struct EnergyOptions {
  int level = 3;
  int steps = 1000;
  /// tau = cfl_fraction * tau_max unless tau > 0.
  double cfl_fraction = 0.9;
  double tau = 0.0;
  std::uint64_t seed = 1;
  /// Random initial data; zero otherwise.
  bool random_data = true;
  bool allow_cfl_violation = false;
  /// Stop once the discrete norm exceeds this multiple of its initial value.
  double growth_limit = 1e3;
};

struct EnergyTrace {
  double tau = 0.0;
  CflEstimate cfl;
  std::vector<double> energy;  // E^n, n = 0..
  std::vector<double> norm_sq;  // ||u_hat||_h^2 + ||p||^2
  double max_relative_drift = 0.0;
  double max_growth = 0.0;      // max norm_sq / norm_sq[0]
  bool unstable = false;        // growth limit exceeded or nonfinite values

  void write_csv(std::ostream& out) const;
};

/// Homogeneous run on the scenario's mesh; records E^n every step.
EnergyTrace energy_run(const Scenario& scenario, const EnergyOptions& options);

}  // namespace mixedwave
