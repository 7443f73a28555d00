#include "mixedwave/study.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mixedwave/kernels.hpp"

namespace mixedwave {

double LevelResult::value(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return values[i];
  throw std::out_of_range("no norm named '" + name + "'");
}

int step_count(double final_time, double tau) {
  const double ratio = final_time / tau;
  const double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("final time is not a multiple of the time step");
  return static_cast<int>(n);
}

namespace {

void say(const StudyOptions& o, const std::string& msg) {
  if (o.log) o.log(msg);
}

// running maxima in insertion order
class NormTable {
 public:
  void update(const std::string& name, double v) {
    auto it = index_.find(name);
    if (it == index_.end()) {
      index_[name] = names_.size();
      names_.push_back(name);
      values_.push_back(v);
      return;
    }
    values_[it->second] = std::max(values_[it->second], v);
  }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::map<std::string, std::size_t> index_;
  std::vector<std::string> names_;
  std::vector<double> values_;
};

// Caches u_h^*(t) at the two most recent times.
class AuxiliaryCache {
 public:
  AuxiliaryCache(const InexactEllipticProjector& p, const PlaneWave& w) : projector_(p), wave_(w) {}

  const std::vector<double>& at(double t) {
    for (auto& e : entries_)
      if (e.first == t) return e.second;
    entries_[slot_] = {t, auxiliary_velocity(projector_, wave_, t)};
    const auto& out = entries_[slot_].second;
    slot_ ^= 1;
    return out;
  }

 private:
  const InexactEllipticProjector& projector_;
  const PlaneWave& wave_;
  std::array<std::pair<double, std::vector<double>>, 2> entries_{{{NAN, {}}, {NAN, {}}}};
  int slot_ = 0;
};

}  // namespace

LevelResult run_level(const Scenario& sc, const MeshLevel& level, const StudyOptions& opt, ObservedFields* keep) {
  sc.check();
  const auto start = std::chrono::steady_clock::now();
  const Bdm1Space space(level.mesh);
  const WaveOperators ops(space);
  const TriMesh& mesh = level.mesh;
  const PlaneWave& wave = sc.wave;

  LevelResult result;
  result.level = level.level;
  result.h = level.h;
  result.tau = sc.tau_for(level.h);
  result.cells = mesh.num_cells();
  result.velocity_dofs = space.num_velocity();
  const double final_time = opt.final_time >= 0.0 ? opt.final_time : sc.final_time;
  result.steps = step_count(final_time, result.tau);
  result.cfl = cfl_estimate(ops, level.h);
  if (result.tau > result.cfl.tau_max && !opt.allow_cfl_violation) {
    std::ostringstream msg;
    msg << "time step " << result.tau << " exceeds the CFL bound " << result.cfl.tau_max << " on level "
        << level.level;
    throw std::runtime_error(msg.str());
  }
  {
    std::ostringstream msg;
    msg << sc.name << " level " << level.level << ": " << mesh.num_cells() << " cells, " << space.num_velocity()
        << " velocity dofs, tau " << result.tau << " (tau_max " << result.cfl.tau_max << "), " << result.steps
        << " steps";
    say(opt, msg.str());
  }

  const bool exact = sc.has_exact;
  const bool use_wave = exact || sc.boundary_data;
  std::optional<InexactEllipticProjector> projector;
  if (use_wave && (opt.initial_velocity == InitialVelocity::elliptic_projection || (exact && opt.superconvergence)))
    projector.emplace(space);

  std::vector<double> u0(space.num_velocity(), 0.0), p0(space.num_pressure(), 0.0);
  if (use_wave) {
    if (opt.initial_velocity == InitialVelocity::elliptic_projection) {
      u0 = auxiliary_velocity(*projector, wave, 0.0);
    } else {
      u0 = interpolate_bdm1(space, [&](Vec2 x) { return wave.velocity(x, 0.0); });
      apply_normal_bc(space.dofs(), u0);
    }
    p0 = project_p0(mesh, [&](Vec2 x) { return wave.pressure(x, 0.0); });
  }

  LoadCallback load;
  if (sc.boundary_data) {
    load = [&](double t, std::span<double> out) {
      const auto l = assemble_boundary_load(space, [&](Vec2 x, double s) { return wave.pressure(x, s); }, t);
      std::copy(l.begin(), l.end(), out.begin());
    };
  }
  std::vector<double> load0;
  if (load) {
    load0.assign(space.num_velocity(), 0.0);
    load(0.0, load0);
  }
  auto u_minus = init_half_step(ops, u0, p0, load0, result.tau);
  auto state = make_state(ops, std::move(u_minus), std::move(p0), result.tau);

  std::optional<VelocityPostprocessSetup> pp;
  if (opt.postprocess || !opt.snapshot_times.empty()) pp.emplace(space, opt.velocity_postprocess);
  std::optional<CsrMatrix> exact_mass;
  if (exact && opt.superconvergence) exact_mass = pp ? pp->exact_mass : assemble_exact_mass(space);
  std::optional<AuxiliaryCache> aux;
  if (exact && opt.superconvergence) aux.emplace(*projector, wave);

  const int stride = opt.observe_interval > 0.0
                         ? std::max(1, static_cast<int>(std::lround(opt.observe_interval / result.tau)))
                         : 1;
  std::map<int, double> snapshots;
  for (double t : opt.snapshot_times) {
    if (t < 0.0 || t > final_time + 1e-12) throw std::invalid_argument("snapshot time outside [0, T]");
    snapshots[static_cast<int>(std::lround(t / result.tau))] = t;
  }

  NormTable norms;
  const auto& areas = mesh.areas();
  integrate(state, ops, result.steps, load, [&](const Observation& obs) {
    const bool expensive = obs.n % stride == 0 || obs.n == result.steps;
    const bool snapshot = snapshots.count(obs.n) > 0;
    const auto u_hat = obs.u_hat();
    const double t = obs.t;
    std::optional<P1Field> p_tilde;
    std::optional<std::vector<double>> u_tilde;
    if (opt.postprocess || snapshot) p_tilde = pp_pressure(space, obs.dtu(), obs.p);
    if ((opt.postprocess && expensive) || snapshot) u_tilde = pp->solver.apply(u_hat).u;

    if (exact) {
      const auto u_t = [&](Vec2 x) { return wave.velocity(x, t); };
      const auto p_t = [&](Vec2 x) { return wave.pressure(x, t); };
      norms.update("u_hat_error", error_l2(space, u_hat, u_t));
      norms.update("p_error", error_l2_p0(mesh, obs.p, p_t));
      auto diff = project_p0(mesh, p_t);
      for (std::size_t c = 0; c < diff.size(); ++c) diff[c] -= obs.p[c];
      norms.update("p_super", p0_norm(areas, diff));
      if (opt.superconvergence && expensive) {
        std::vector<double> d(u_hat);
        const auto& a_minus = aux->at(t - 0.5 * obs.tau);
        kernels::axpy(-0.5, a_minus, d);
        const auto& a_plus = aux->at(t + 0.5 * obs.tau);
        kernels::axpy(-0.5, a_plus, d);
        norms.update("u_hat_super", mass_norm(*exact_mass, d));
      }
      if (opt.postprocess) {
        if (u_tilde) norms.update("u_tilde_error", error_l2(space, *u_tilde, u_t));
        norms.update("p_tilde_error", error_l2_p1(mesh, *p_tilde, p_t));
      }
    }
    if (keep && opt.postprocess && expensive) {
      keep->steps.push_back(obs.n);
      keep->u_tilde.push_back(*u_tilde);
      keep->p_tilde.push_back(*p_tilde);
    }
    if (snapshot && opt.on_snapshot)
      opt.on_snapshot(Snapshot{t, obs.n, &space, std::vector<double>(obs.p.begin(), obs.p.end()), *p_tilde, u_hat,
                               *u_tilde});
  });

  result.names = norms.names();
  result.values = norms.values();
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  {
    std::ostringstream msg;
    msg << std::setprecision(6) << "  done in " << result.seconds << " s";
    for (std::size_t i = 0; i < result.names.size(); ++i) msg << "  " << result.names[i] << "=" << result.values[i];
    say(opt, msg.str());
  }
  return result;
}

ErrorReport convergence_study(const Scenario& sc, const StudyOptions& opt) {
  if (sc.levels.size() < 2) throw std::invalid_argument("a convergence study needs at least two levels (eoc undefined)");
  const auto levels = build_levels(sc, sc.levels);
  ErrorReport report;
  if (sc.has_exact) {
    for (const auto& lvl : levels) {
      const auto r = run_level(sc, lvl, opt);
      if (report.norms.empty()) report.norms = r.names;
      report.rows.push_back({r.h, r.tau, r.values});
    }
    return report;
  }
  if (!opt.postprocess) throw std::invalid_argument("self-convergence needs post-processing enabled");
  report.norms = {"u_tilde_self", "p_tilde_self"};
  std::optional<Bdm1Space> previous_space;
  ObservedFields previous;
  double previous_tau = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    ObservedFields current;
    const auto r = run_level(sc, levels[i], opt, &current);
    Bdm1Space space(levels[i].mesh);
    if (i > 0) {
      if (!levels[i].from_coarser) throw std::invalid_argument("self-convergence needs nested mesh levels");
      if (current.steps != previous.steps || r.tau != previous_tau)
        throw std::invalid_argument("self-convergence: levels have different output times");
      SelfConvergenceNorms worst;
      for (std::size_t k = 0; k < current.steps.size(); ++k) {
        const auto s = self_convergence(space, current.u_tilde[k], current.p_tilde[k], *previous_space,
                                        previous.u_tilde[k], previous.p_tilde[k], *levels[i].from_coarser);
        worst.velocity = std::max(worst.velocity, s.velocity);
        worst.pressure = std::max(worst.pressure, s.pressure);
      }
      report.rows.push_back({levels[i - 1].h, r.tau, {worst.velocity, worst.pressure}});
      if (opt.log) {
        std::ostringstream msg;
        msg << std::setprecision(6) << "  self-convergence h=" << levels[i - 1].h << ": velocity " << worst.velocity
            << ", pressure " << worst.pressure;
        opt.log(msg.str());
      }
    }
    previous_space.emplace(levels[i].mesh);
    previous = std::move(current);
    previous_tau = r.tau;
  }
  return report;
}

void EnergyTrace::write_csv(std::ostream& out) const {
  out << "n,t,energy,relative_drift,norm_sq,growth\n";
  const auto old_precision = out.precision(12);
  const double e0 = energy.empty() ? 0.0 : energy[0];
  const double w0 = norm_sq.empty() ? 0.0 : norm_sq[0];
  for (std::size_t n = 0; n < energy.size(); ++n) {
    const double drift = e0 != 0.0 ? std::abs(energy[n] - e0) / std::abs(e0) : std::abs(energy[n] - e0);
    const double growth = w0 != 0.0 ? norm_sq[n] / w0 : 0.0;
    out << n << "," << n * tau << "," << energy[n] << "," << drift << "," << norm_sq[n] << "," << growth << "\n";
  }
  out.precision(old_precision);
}

namespace {

struct StopRun {};

}  // namespace

EnergyTrace energy_run(const Scenario& sc, const EnergyOptions& opt) {
  if (opt.steps < 0) throw std::invalid_argument("negative number of steps");
  const TriMesh mesh = build_mesh(sc, opt.level);
  const Bdm1Space space(mesh);
  const WaveOperators ops(space);
  const double h = std::ldexp(1.0, -opt.level);
  EnergyTrace trace;
  trace.cfl = cfl_estimate(ops, h);
  trace.tau = opt.tau > 0.0 ? opt.tau : opt.cfl_fraction * trace.cfl.tau_max;
  if (trace.tau > trace.cfl.tau_max && !opt.allow_cfl_violation) {
    std::ostringstream msg;
    msg << "time step " << trace.tau << " exceeds the CFL bound " << trace.cfl.tau_max;
    throw std::runtime_error(msg.str());
  }

  std::vector<double> u0(space.num_velocity(), 0.0), p0(space.num_pressure(), 0.0);
  if (opt.random_data) {
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (auto& v : u0) v = dist(rng);
    for (auto& v : p0) v = dist(rng);
    apply_normal_bc(space.dofs(), u0);
  }
  auto u_minus = init_half_step(ops, u0, p0, {}, trace.tau);
  auto state = make_state(ops, std::move(u_minus), std::move(p0), trace.tau);
  try {
    integrate(state, ops, opt.steps, {}, [&](const Observation& obs) {
      const double e = discrete_energy(ops, obs.u_minus, obs.u_plus, obs.p);
      const double w = discrete_norm_sq(ops, obs.u_minus, obs.u_plus, obs.p);
      trace.energy.push_back(e);
      trace.norm_sq.push_back(w);
      const double e0 = trace.energy[0], w0 = trace.norm_sq[0];
      const double drift = e0 != 0.0 ? std::abs(e - e0) / std::abs(e0) : std::abs(e - e0);
      trace.max_relative_drift = std::max(trace.max_relative_drift, drift);
      if (w0 > 0.0) trace.max_growth = std::max(trace.max_growth, w / w0);
      if (!std::isfinite(e) || !std::isfinite(w) || (w0 > 0.0 && w > opt.growth_limit * w0)) {
        trace.unstable = true;
        throw StopRun{};
      }
    });
  } catch (const StopRun&) {
  } catch (const InstabilityError&) {
    trace.unstable = true;
  }
  return trace;
}

}  // namespace mixedwave
