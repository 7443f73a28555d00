#include <omp.h>

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "mixedwave/config.hpp"
#include "mixedwave/vtk.hpp"

using namespace mixedwave;

namespace {

struct Globals {
  std::string config_path;
  std::string out_dir = "out";
  int threads = 0;
  bool allow_cfl_violation = false;
};

AppConfig load(const Globals& g) {
  if (g.config_path.empty()) {
    std::istringstream empty;
    return make_app_config(Config::parse(empty, "<defaults>"));
  }
  return make_app_config(Config::load(g.config_path));
}

std::filesystem::path prepare_out(const Globals& g) {
  std::filesystem::create_directories(g.out_dir);
  return g.out_dir;
}

void log_line(const std::string& s) { std::cerr << s << std::endl; }

std::string time_tag(double t) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << t;
  return s.str();
}

int cmd_run(const Globals& g) {
  auto app = load(g);
  const auto out = prepare_out(g);
  app.study.allow_cfl_violation = g.allow_cfl_violation;
  app.study.log = log_line;
  const auto levels = build_levels(app.scenario, {app.run_level});
  app.study.on_snapshot = [&](const Snapshot& s) {
    for (const auto& f : app.fields) {
      VtkField field;
      if (f == "p")
        field = vtk_p0("p_h", s.p);
      else if (f == "p_tilde")
        field = vtk_p1("p_tilde", s.p_tilde);
      else if (f == "u_hat")
        field = vtk_bdm1("u_hat", *s.space, s.u_hat);
      else
        field = vtk_bdm1("u_tilde", *s.space, s.u_tilde);
      const auto path = out / (f + "_t" + time_tag(s.t) + ".vtk");
      write_vtk_file(path.string(), s.space->mesh(), std::span<const VtkField>(&field, 1),
                     app.scenario.name + " " + f + " t=" + time_tag(s.t));
      log_line("  wrote " + path.string());
    }
  };
  const auto r = run_level(app.scenario, levels[0], app.study);
  ErrorReport report;
  report.norms = r.names;
  report.rows.push_back({r.h, r.tau, r.values});
  std::ofstream csv(out / "norms.csv");
  report.write_csv(csv);
  report.write_csv(std::cout);
  return 0;
}

int cmd_convergence(const Globals& g) {
  auto app = load(g);
  const auto out = prepare_out(g);
  app.study.allow_cfl_violation = g.allow_cfl_violation;
  app.study.log = log_line;
  const auto report = convergence_study(app.scenario, app.study);
  std::ofstream csv(out / "convergence.csv");
  report.write_csv(csv);
  report.write_csv(std::cout);
  return 0;
}

int cmd_energy(const Globals& g) {
  auto app = load(g);
  const auto out = prepare_out(g);
  app.energy.allow_cfl_violation = g.allow_cfl_violation;
  const auto trace = energy_run(app.scenario, app.energy);
  std::ofstream csv(out / "energy.csv");
  trace.write_csv(csv);
  std::cout << std::setprecision(6) << "tau " << trace.tau << ", tau_max " << trace.cfl.tau_max << ", steps "
            << (trace.energy.empty() ? 0 : trace.energy.size() - 1) << ", max relative drift "
            << trace.max_relative_drift << "\n";
  if (trace.unstable)
    std::cout << "UNSTABLE: discrete norm grew by a factor " << trace.max_growth << " (limit " << app.energy.growth_limit
              << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed BDM1-P0 finite elements for the acoustic wave equation"};
  Globals g;
  app.add_option("--config", g.config_path, "Configuration file (key = value with [sections])")->check(CLI::ExistingFile);
  app.add_option("--out", g.out_dir, "Output directory")->capture_default_str();
  app.add_option("--threads", g.threads, "OpenMP threads (0 keeps the runtime default)")->check(CLI::NonNegativeNumber);
  app.add_flag("--allow-cfl-violation", g.allow_cfl_violation, "Run even if tau exceeds the estimated CFL bound");
  auto* run = app.add_subcommand("run", "Single level with VTK snapshots and a norms CSV");
  auto* conv = app.add_subcommand("convergence", "All levels, error table with eoc");
  auto* energy = app.add_subcommand("energy", "Homogeneous run recording the discrete energy");
  for (auto* sub : {run, conv, energy}) sub->fallthrough();
  app.require_subcommand(1);
  CLI11_PARSE(app, argc, argv);

  if (g.threads > 0) omp_set_num_threads(g.threads);
  try {
    if (run->parsed()) return cmd_run(g);
    if (conv->parsed()) return cmd_convergence(g);
    return cmd_energy(g);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
