#include "mixedwave/integrator.hpp"

#include <cmath>
#include <random>
#include <string>

#include "mixedwave/kernels.hpp"

namespace mixedwave {

WaveOperators::WaveOperators(const Bdm1Space& s)
    : space(&s),
      mass(assemble_lumped_mass(s, true)),
      div(assemble_div(s)),
      div_t(div.transpose()),
      pressure_mass(mixedwave::pressure_mass(s.mesh())) {}

namespace {

void zero_constrained(const WaveOperators& ops, std::span<double> u) { apply_normal_bc(ops.space->dofs(), u); }

// y = M^-1 B^T D^-1 B x on the unconstrained DOFs
void wave_operator(const WaveOperators& ops, std::span<const double> x, std::span<double> y, std::vector<double>& q,
                   std::vector<double>& tmp) {
  ops.div.multiply(x, q);
  for (std::size_t c = 0; c < q.size(); ++c) q[c] /= ops.pressure_mass[c];
  ops.div_t.multiply(q, tmp);
  zero_constrained(ops, tmp);
  ops.mass.solve(tmp, y);
}

}  // namespace

CflEstimate cfl_estimate(const WaveOperators& ops, double h, double tolerance, int max_iterations) {
  const std::size_t n = ops.space->num_velocity();
  std::vector<double> x(n), y(n), mx(n), q(ops.pressure_mass.size()), tmp(n);
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (auto& v : x) v = dist(rng);
  zero_constrained(ops, x);
  CflEstimate out;
  double lambda = 0.0;
  for (int it = 1; it <= max_iterations; ++it) {
    const double norm_m = std::sqrt(ops.mass.quadratic_form(x));
    if (!(norm_m > 0.0)) throw SolverError("cfl_estimate: no free velocity DOFs");
    for (auto& v : x) v /= norm_m;
    wave_operator(ops, x, y, q, tmp);
    ops.mass.multiply(y, mx);
    const double next = kernels::dot(x, mx);
    out.iterations = it;
    if (it > 1 && std::abs(next - lambda) <= tolerance * std::abs(next)) {
      lambda = next;
      out.lambda_max = lambda;
      out.c = h * std::sqrt(lambda);
      out.tau_max = 1.0 / std::sqrt(lambda);
      return out;
    }
    lambda = next;
    x.swap(y);
  }
  throw SolverError("cfl_estimate: power iteration did not converge in " + std::to_string(max_iterations) +
                    " iterations");
}

std::vector<double> init_half_step(const WaveOperators& ops, std::span<const double> u0, std::span<const double> p0,
                                   std::span<const double> load0, double tau) {
  const std::size_t n = ops.space->num_velocity();
  std::vector<double> rhs(n), inc(n), out(u0.begin(), u0.end());
  ops.div_t.multiply(p0, rhs);
  if (!load0.empty())
    for (std::size_t i = 0; i < n; ++i) rhs[i] += load0[i];
  zero_constrained(ops, rhs);
  ops.mass.solve(rhs, inc);
  kernels::axpy(-0.5 * tau, inc, out);
  zero_constrained(ops, out);
  return out;
}

LeapfrogState make_state(const WaveOperators& ops, std::vector<double> u_minus, std::vector<double> p, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("time step must be positive");
  if (u_minus.size() != ops.space->num_velocity() || p.size() != ops.space->num_pressure())
    throw std::invalid_argument("initial data does not match the discrete spaces");
  LeapfrogState s;
  s.u_minus = std::move(u_minus);
  s.p = std::move(p);
  s.u_plus.assign(s.u_minus.size(), 0.0);
  s.tau = tau;
  zero_constrained(ops, s.u_minus);
  return s;
}

void advance_velocity(LeapfrogState& s, const WaveOperators& ops, std::span<const double> load) {
  const std::size_t n = s.u_minus.size();
  std::vector<double> rhs(n);
  ops.div_t.multiply(s.p, rhs);
  if (!load.empty())
    for (std::size_t i = 0; i < n; ++i) rhs[i] += load[i];
  zero_constrained(ops, rhs);
  ops.mass.solve(rhs, s.u_plus);
  kernels::xpby(s.u_minus, s.tau, s.u_plus);
  zero_constrained(ops, s.u_plus);
}

void advance_pressure(LeapfrogState& s, const WaveOperators& ops) {
  std::vector<double> q(s.p.size());
  ops.div.multiply(s.u_plus, q);
  bool finite = true;
  for (std::size_t c = 0; c < q.size(); ++c) {
    s.p[c] -= s.tau * q[c] / ops.pressure_mass[c];
    finite = finite && std::isfinite(s.p[c]);
  }
  for (double v : s.u_plus) finite = finite && std::isfinite(v);
  if (!finite) throw InstabilityError("nonfinite values at step " + std::to_string(s.n + 1) + " (CFL violated?)");
  s.u_minus.swap(s.u_plus);
  ++s.n;
}

void step(LeapfrogState& s, const WaveOperators& ops, std::span<const double> load) {
  advance_velocity(s, ops, load);
  advance_pressure(s, ops);
}

double discrete_energy(const WaveOperators& ops, std::span<const double> u_minus, std::span<const double> u_plus,
                       std::span<const double> p) {
  std::vector<double> mu(u_plus.size());
  ops.mass.multiply(u_plus, mu);
  double e = kernels::dot(u_minus, mu);
  for (std::size_t c = 0; c < p.size(); ++c) e += ops.pressure_mass[c] * p[c] * p[c];
  return e;
}

double discrete_norm_sq(const WaveOperators& ops, std::span<const double> u_minus, std::span<const double> u_plus,
                        std::span<const double> p) {
  std::vector<double> u_hat(u_plus.begin(), u_plus.end());
  kernels::axpy(1.0, u_minus, u_hat);
  double e = 0.25 * ops.mass.quadratic_form(u_hat);
  for (std::size_t c = 0; c < p.size(); ++c) e += ops.pressure_mass[c] * p[c] * p[c];
  return e;
}

std::vector<double> Observation::u_hat() const {
  std::vector<double> out(u_plus.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (u_plus[i] + u_minus[i]);
  return out;
}

std::vector<double> Observation::dtu() const {
  std::vector<double> out(u_plus.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (u_plus[i] - u_minus[i]) / tau;
  return out;
}

void integrate(LeapfrogState& s, const WaveOperators& ops, int steps, const LoadCallback& load,
               const Observer& observer) {
  if (steps < 0) throw std::invalid_argument("negative number of steps");
  std::vector<double> l;
  if (load) l.assign(s.u_minus.size(), 0.0);
  const int last = s.n + steps;
  while (true) {
    if (load) load(s.time(), l);
    advance_velocity(s, ops, l);
    if (observer) observer(Observation{s.n, s.time(), s.tau, s.u_minus, s.u_plus, s.p});
    if (s.n == last) break;
    advance_pressure(s, ops);
  }
}

}  // namespace mixedwave
