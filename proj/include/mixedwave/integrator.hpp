#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mixedwave/assembly.hpp"

namespace mixedwave {

/// Thrown when a step produces nonfinite values, the usual symptom of a
/// CFL violation.
class InstabilityError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// Operators of the fully discrete scheme on one mesh.
struct WaveOperators {
  explicit WaveOperators(const Bdm1Space& space);

  const Bdm1Space* space;
  BlockDiagMatrix mass;    // lumped, NeumannU rows replaced by identity, factorized
  CsrMatrix div;           // P0 x BDM1
  CsrMatrix div_t;
  std::vector<double> pressure_mass;  // cell areas
};

struct CflEstimate {
  double lambda_max = 0.0;  // of M^-1 B^T D^-1 B
  double c = 0.0;           // h sqrt(lambda_max)
  double tau_max = 0.0;     // h / c
  int iterations = 0;
};

/// Power iteration on M^-1 B^T D^-1 B (Rayleigh quotient in the M inner
/// product). Throws SolverError without convergence.
CflEstimate cfl_estimate(const WaveOperators& ops, double h, double tolerance = 1e-8, int max_iterations = 100000);

/// u0 - (tau/2) M^-1 (B^T p0 + load0). An empty load means zero.
std::vector<double> init_half_step(const WaveOperators& ops, std::span<const double> u0, std::span<const double> p0,
                                   std::span<const double> load0, double tau);

struct LeapfrogState {
  std::vector<double> u_minus;  // t^{n-1/2}
  std::vector<double> u_plus;   // t^{n+1/2}, valid after advance_velocity
  std::vector<double> p;        // t^n
  int n = 0;
  double tau = 0.0;

  double time() const { return n * tau; }
};

LeapfrogState make_state(const WaveOperators& ops, std::vector<double> u_minus, std::vector<double> p, double tau);

/// u_plus = u_minus + tau M^-1 (B^T p + load). An empty load means zero.
void advance_velocity(LeapfrogState& s, const WaveOperators& ops, std::span<const double> load);

/// p <- p - tau D^-1 B u_plus, u_minus <- u_plus, n <- n + 1. Throws
/// InstabilityError on nonfinite values.
void advance_pressure(LeapfrogState& s, const WaveOperators& ops);

/// Both halves of one step.
void step(LeapfrogState& s, const WaveOperators& ops, std::span<const double> load);

/// (u^{n+1/2}, u^{n-1/2})_h + ||p^n||^2, which equals
/// ||u_hat||_h^2 + ||p||^2 - (tau^2/4) ||d_tau u||_h^2.
double discrete_energy(const WaveOperators& ops, std::span<const double> u_minus, std::span<const double> u_plus,
                       std::span<const double> p);

/// ||u_hat||_h^2 + ||p||^2.
double discrete_norm_sq(const WaveOperators& ops, std::span<const double> u_minus, std::span<const double> u_plus,
                        std::span<const double> p);

/// Data seen by an observer at integer level n.
struct Observation {
  int n;
  double t;
  double tau;
  std::span<const double> u_minus;
  std::span<const double> u_plus;
  std::span<const double> p;

  std::vector<double> u_hat() const;  // (u_plus + u_minus) / 2
  std::vector<double> dtu() const;    // (u_plus - u_minus) / tau
};

/// Fills `load` with the boundary load at time t.
using LoadCallback = std::function<void(double t, std::span<double> load)>;
using Observer = std::function<void(const Observation&)>;

/// Advances `steps` steps, calling `observer` at n = 0..steps once u^{n+1/2}
/// is known. An empty `load` means homogeneous boundary data.
void integrate(LeapfrogState& s, const WaveOperators& ops, int steps, const LoadCallback& load, const Observer& observer);

}  // namespace mixedwave
