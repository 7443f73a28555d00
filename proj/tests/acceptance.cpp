#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mixedwave/kernels.hpp"
#include "mixedwave/study.hpp"

using namespace mixedwave;

namespace {

struct Check {
  std::string what;
  bool ok;
  bool absolute = false;  // comparison against reference absolute values
};

struct Outcome {
  std::vector<Check> checks;
  std::string summary;

  void add(std::string what, bool ok, bool absolute = false) { checks.push_back({std::move(what), ok, absolute}); }
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
  }
  bool only_absolute_failures() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok || c.absolute; });
  }
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

bool in_range(double v, double lo, double hi) { return v >= lo && v <= hi; }

/// eoc values of the last `count` transitions.
std::vector<double> last(const std::vector<double>& v, std::size_t count) {
  return {v.end() - static_cast<std::ptrdiff_t>(std::min(count, v.size())), v.end()};
}

void check_eocs(Outcome& out, const std::string& name, const std::vector<double>& eocs, double lo, double hi) {
  std::string list;
  bool ok = !eocs.empty();
  for (double e : eocs) {
    list += (list.empty() ? "" : ", ") + fmt(e, 3);
    ok = ok && in_range(e, lo, hi);
  }
  out.add("eoc " + name + " = [" + list + "] in [" + fmt(lo) + ", " + fmt(hi) + "]", ok);
}

void check_factor(Outcome& out, const std::string& name, const std::vector<double>& ours,
                  const std::vector<double>& reference, double factor) {
  bool ok = ours.size() == reference.size();
  std::string worst;
  double worst_ratio = 1.0;
  for (std::size_t i = 0; ok && i < ours.size(); ++i) {
    const double ratio = ours[i] / reference[i];
    const double off = std::max(ratio, 1.0 / ratio);
    if (off > std::max(worst_ratio, 1.0 / worst_ratio)) worst_ratio = ratio;
    ok = ok && off <= factor;
  }
  worst = fmt(worst_ratio, 3);
  out.add(name + " within a factor " + fmt(factor) + " of the reference values (worst ratio " + worst + ")", ok, true);
}

std::vector<TriMesh> test_meshes() {
  std::vector<TriMesh> m;
  m.push_back(perturb_interior_vertices(generate_rect_mesh({-1, -1, 1, 1}, 4), 0.05, 1));
  m.push_back(generate_lshape_mesh(4));
  m.push_back(read_mesh_file(scattering_scenario().mesh_file));
  return m;
}

// --- criteria ----------------------------------------------------------------

Outcome norm_equivalence() {
  Outcome out;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  int samples = 0, violations = 0;
  double lo = 1e300, hi = 0.0;
  for (const auto& mesh : test_meshes()) {
    const Bdm1Space space(mesh);
    const auto lumped = assemble_lumped_mass(space, false);
    const auto exact = assemble_exact_mass(space);
    std::vector<double> v(space.num_velocity()), mv(space.num_velocity());
    for (int s = 0; s < 400; ++s) {
      for (auto& x : v) x = dist(rng);
      exact.multiply(v, mv);
      const double l2 = std::sqrt(kernels::dot(v, mv));
      const double h = std::sqrt(lumped.quadratic_form(v));
      if (!(0.5 * h <= l2 + 1e-12 && l2 <= h + 1e-12)) ++violations;
      lo = std::min(lo, l2 / h);
      hi = std::max(hi, l2 / h);
      ++samples;
    }
  }
  out.add(std::to_string(samples) + " random fields on 3 meshes, ratio L2/h-norm in [" + fmt(lo) + ", " + fmt(hi) + "]",
          violations == 0 && samples >= 1000);
  out.summary = std::to_string(violations) + " violations";
  return out;
}

Outcome lumped_structure() {
  Outcome out;
  const auto mesh = generate_rect_mesh({-1, -1, 1, 1}, 8);
  const Bdm1Space space(mesh);
  const auto& dofs = space.dofs();

  std::vector<Triplet> t;
  for (Index c = 0; c < static_cast<Index>(mesh.num_cells()); ++c) {
    const auto& el = space.element(c);
    for (int a = 0; a < 3; ++a)
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
          const double li = el.vertex[i] == a ? 1.0 : 0.0, lj = el.vertex[j] == a ? 1.0 : 0.0;
          t.push_back({el.dof[i], el.dof[j], el.area / 3.0 * li * lj * dot(el.w[i], el.w[j])});
        }
  }
  const auto full = CsrMatrix::from_triplets(space.num_velocity(), space.num_velocity(), std::move(t));
  std::size_t outside = 0;
  for (Index r = 0; r < static_cast<Index>(full.rows()); ++r)
    for (Index k = full.row_ptr()[r]; k < full.row_ptr()[r + 1]; ++k)
      if (dofs.dof_vertex[r] != dofs.dof_vertex[full.col_index()[k]] && full.values()[k] != 0.0) ++outside;
  out.add("vertex-rule element matrices have " + std::to_string(outside) + " entries coupling different vertices",
          outside == 0);

  const auto m = assemble_lumped_mass(space, false);
  const auto csr = m.to_csr();
  double diff = 0.0;
  for (Index r = 0; r < static_cast<Index>(full.rows()); ++r)
    for (Index k = full.row_ptr()[r]; k < full.row_ptr()[r + 1]; ++k)
      diff = std::max(diff, std::abs(full.values()[k] - csr.at(r, full.col_index()[k])));
  out.add("block matrix equals the element-loop matrix (max diff " + fmt(diff) + ")", diff < 1e-14);

  bool spd = true;
  try {
    BlockDiagMatrix copy = assemble_lumped_mass(space, false);
    copy.factorize();
  } catch (const SolverError&) {
    spd = false;
  }
  out.add("every vertex block is SPD (Cholesky succeeds)", spd);

  bool interior_six = true;
  std::size_t interior = 0;
  for (Index v = 0; v < static_cast<Index>(mesh.num_vertices()); ++v) {
    const Vec2 x = mesh.vertex(v);
    if (std::abs(x.x) == 1.0 || std::abs(x.y) == 1.0) continue;
    ++interior;
    interior_six = interior_six && m.block_size(static_cast<std::size_t>(v)) == 6;
  }
  out.add("all " + std::to_string(interior) + " interior vertices give 6x6 blocks", interior_six && interior > 0);
  return out;
}

Outcome commuting_diagram() {
  Outcome out;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double worst = 0.0;
  int polys = 0;
  for (const auto& mesh : test_meshes()) {
    const Bdm1Space space(mesh);
    for (int trial = 0; trial < 5; ++trial) {
      std::array<std::array<double, 10>, 2> a{};
      for (auto& comp : a)
        for (auto& c : comp) c = dist(rng);
      // monomials 1, x, y, x^2, xy, y^2, x^3, x^2 y, x y^2, y^3
      const auto eval = [](const std::array<double, 10>& c, Vec2 p) {
        const double x = p.x, y = p.y;
        return c[0] + c[1] * x + c[2] * y + c[3] * x * x + c[4] * x * y + c[5] * y * y + c[6] * x * x * x +
               c[7] * x * x * y + c[8] * x * y * y + c[9] * y * y * y;
      };
      const auto dx = [](const std::array<double, 10>& c, Vec2 p) {
        const double x = p.x, y = p.y;
        return c[1] + 2 * c[3] * x + c[4] * y + 3 * c[6] * x * x + 2 * c[7] * x * y + c[8] * y * y;
      };
      const auto dy = [](const std::array<double, 10>& c, Vec2 p) {
        const double x = p.x, y = p.y;
        return c[2] + c[4] * x + 2 * c[5] * y + c[7] * x * x + 2 * c[8] * x * y + 3 * c[9] * y * y;
      };
      const auto u = [&](Vec2 p) { return Vec2{eval(a[0], p), eval(a[1], p)}; };
      const auto div = [&](Vec2 p) { return dx(a[0], p) + dy(a[1], p); };
      const auto lhs = cell_divergence(space, interpolate_bdm1(space, u));
      const auto rhs = project_p0(mesh, div);
      for (std::size_t c = 0; c < lhs.size(); ++c) worst = std::max(worst, std::abs(lhs[c] - rhs[c]));
      ++polys;
    }
  }
  out.add(std::to_string(polys) + " cubic fields, max |div(rho u) - pi div u| = " + fmt(worst), worst <= 1e-11);
  return out;
}

Outcome energy_conservation() {
  Outcome out;
  const auto sc = cavity_scenario();
  EnergyOptions opt;
  opt.level = 3;
  opt.steps = 1000;
  opt.cfl_fraction = 0.9;
  const auto stable = energy_run(sc, opt);
  out.add("tau = 0.9 tau_max = " + fmt(stable.tau) + ", 1000 steps: relative drift " + fmt(stable.max_relative_drift),
          stable.energy.size() == 1001 && stable.max_relative_drift <= 1e-10 && !stable.unstable);

  opt.steps = 200;
  opt.tau = 4.0 * std::ldexp(1.0, -opt.level);
  opt.allow_cfl_violation = true;
  const auto blown = energy_run(sc, opt);
  out.add("tau = 4h = " + fmt(opt.tau) + ": growth " + fmt(blown.max_growth) + " after " +
              std::to_string(blown.norm_sq.size() - 1) + " steps",
          blown.unstable && blown.max_growth > 1e3 && blown.norm_sq.size() <= 201);
  return out;
}

struct PlaneWaveStudy {
  ErrorReport report;
  double seconds = 0.0;
};

const PlaneWaveStudy& plane_wave_study() {
  static const PlaneWaveStudy study = [] {
    PlaneWaveStudy s;
    const auto start = std::chrono::steady_clock::now();
    const auto sc = plane_wave_scenario();
    StudyOptions opt;
    opt.observe_interval = 0.0625;
    opt.log = [](const std::string& m) { std::cerr << m << "\n"; };
    s.report = convergence_study(sc, opt);
    s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return s;
  }();
  return study;
}

const std::vector<double> kRawVelocity{0.053047, 0.020622, 0.009977, 0.004883};
const std::vector<double> kRawPressure{0.069893, 0.033095, 0.016408, 0.008114};
const std::vector<double> kVelocitySuper{0.051699, 0.013408, 0.003353, 0.000830};
const std::vector<double> kPostVelocity{0.051792, 0.013486, 0.003375, 0.000836};
const std::vector<double> kPostPressure{0.055946, 0.013180, 0.003220, 0.000791};

Outcome raw_errors() {
  Outcome out;
  const auto& s = plane_wave_study();
  const auto& r = s.report;
  check_eocs(out, "u - u_hat_h", last(r.eoc_of("u_hat_error"), 2), 0.9, 1.4);
  check_eocs(out, "p - p_h", last(r.eoc_of("p_error"), 2), 0.9, 1.4);
  check_eocs(out, "u_hat_h - u_hat_h^*", last(r.eoc_of("u_hat_super"), 2), 1.85, 2.15);
  check_factor(out, "u - u_hat_h", r.column("u_hat_error"), kRawVelocity, 3.0);
  check_factor(out, "p - p_h", r.column("p_error"), kRawPressure, 3.0);
  check_factor(out, "u_hat_h - u_hat_h^*", r.column("u_hat_super"), kVelocitySuper, 3.0);
  out.summary = "study time " + fmt(s.seconds, 3) + " s";
  return out;
}

Outcome pressure_superconvergence() {
  Outcome out;
  check_eocs(out, "pi p - p_h", last(plane_wave_study().report.eoc_of("p_super"), 2), 1.85, 2.15);
  return out;
}

Outcome postprocessed_errors() {
  Outcome out;
  const auto& r = plane_wave_study().report;
  check_eocs(out, "u - u_tilde_h", last(r.eoc_of("u_tilde_error"), 2), 1.85, 2.15);
  check_eocs(out, "p - p_tilde_h", last(r.eoc_of("p_tilde_error"), 2), 1.85, 2.15);
  check_factor(out, "u - u_tilde_h", r.column("u_tilde_error"), kPostVelocity, 3.0);
  check_factor(out, "p - p_tilde_h", r.column("p_tilde_error"), kPostPressure, 3.0);
  return out;
}

Outcome elliptic_projection() {
  Outcome out;
  const auto w = [](Vec2 x) {
    return Vec2{std::sin(2.0 * x.x) * std::cos(x.y) + x.y * x.y, std::exp(x.x - x.y) - 0.5 * x.x};
  };
  const auto r = [](Vec2 x) { return std::cos(3.0 * x.x + x.y) + x.x * x.y; };
  std::vector<double> hs, ew, er;
  for (int n : {8, 16, 32, 64}) {
    const auto mesh = generate_rect_mesh({0, 0, 1, 1}, n);
    const Bdm1Space space(mesh);
    const InexactEllipticProjector projector(space);
    const auto res = projector.project(w, r);
    const auto pr = project_p0(mesh, r);
    std::vector<double> diff(pr.size());
    for (std::size_t c = 0; c < pr.size(); ++c) diff[c] = pr[c] - res.r[c];
    hs.push_back(1.0 / n);
    ew.push_back(error_l2(space, res.w, w));
    er.push_back(p0_norm(mesh.areas(), diff));
  }
  check_eocs(out, "w - w_h", last(eoc(hs, ew), 2), 0.9, 1.1);
  check_eocs(out, "pi r - r_h", last(eoc(hs, er), 2), 1.85, 2.15);
  return out;
}

Outcome scattering() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  const auto sc = scattering_scenario();
  StudyOptions opt;
  opt.observe_interval = 0.05;
  opt.log = [](const std::string& m) { std::cerr << m << "\n"; };
  const auto report = convergence_study(sc, opt);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.add(std::to_string(sc.levels.size()) + " levels, tau = " + fmt(sc.tau_value), sc.levels.size() == 4);
  check_eocs(out, "u_tilde self-convergence", report.eoc_of("u_tilde_self"), 1.8, 2.2);
  check_eocs(out, "p_tilde self-convergence", report.eoc_of("p_tilde_self"), 1.8, 2.2);
  std::string values;
  for (double v : report.column("u_tilde_self")) values += fmt(v) + " ";
  out.summary = "velocity " + values + "; study time " + fmt(seconds, 3) + " s";
  return out;
}

Outcome postprocess_exactness() {
  Outcome out;
  const auto mesh = perturb_interior_vertices(generate_rect_mesh({-1, -1, 1, 1}, 8), 0.03, 5);
  const Bdm1Space space(mesh);

  const Vec2 grad{0.7, -1.9};
  const auto p = [&](Vec2 x) { return -0.4 + dot(grad, x); };
  const auto rec = pp_pressure(space, interpolate_bdm1(space, [&](Vec2) { return -grad; }), project_p0(mesh, p));
  double linear = 0.0;
  for (Index c = 0; c < static_cast<Index>(mesh.num_cells()); ++c) {
    const auto x = mesh.corners(c);
    for (int k = 0; k < 3; ++k) linear = std::max(linear, std::abs(rec.values[c][k] - p(x[k])));
  }
  out.add("pp_pressure reproduces a linear pressure, max error " + fmt(linear), linear <= 1e-11);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> dtu(space.num_velocity()), p0(space.num_pressure()), u_hat(space.num_velocity());
  for (auto& v : dtu) v = dist(rng);
  for (auto& v : p0) v = dist(rng);
  for (auto& v : u_hat) v = dist(rng);
  const auto rnd = pp_pressure(space, dtu, p0);
  double mean = 0.0;
  for (Index c = 0; c < static_cast<Index>(p0.size()); ++c) mean = std::max(mean, std::abs(rnd.cell_mean(c) - p0[c]));
  out.add("pp_pressure keeps cell means, max deviation " + fmt(mean), mean <= 1e-12);

  const VelocityPostprocessSetup setup(space);
  const auto res = setup.solver.apply(u_hat);
  const auto d0 = cell_divergence(space, u_hat), d1 = cell_divergence(space, res.u);
  double div = 0.0;
  for (std::size_t c = 0; c < d0.size(); ++c) div = std::max(div, std::abs(d0[c] - d1[c]));
  out.add("pp_velocity keeps the divergence, max deviation " + fmt(div), div <= 1e-9);

  const Vec2 k{-0.3, 1.2};
  const auto u_const = interpolate_bdm1(space, [&](Vec2) { return k; });
  const auto cres = setup.solver.apply(u_const);
  double cst = 0.0;
  for (std::size_t i = 0; i < u_const.size(); ++i) cst = std::max(cst, std::abs(cres.u[i] - u_const[i]));
  out.add("pp_velocity reproduces a constant field, max deviation " + fmt(cst), cst <= 1e-10);
  return out;
}

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks; prints one PASS/FAIL line per criterion."};
  std::string only, known;
  app.add_option("--only", only, "Comma-separated criteria to run (default: all)");
  app.add_option("--known-absolute", known,
                 "Criteria whose comparisons against reference absolute values may fail without affecting the exit "
                 "code; their rate checks still count");
  CLI11_PARSE(app, argc, argv);

  const std::map<int, std::pair<std::string, std::function<Outcome()>>> criteria{
      {1, {"norm equivalence", norm_equivalence}},
      {2, {"lumped mass structure", lumped_structure}},
      {3, {"commuting interpolant", commuting_diagram}},
      {4, {"energy conservation", energy_conservation}},
      {5, {"plane wave raw errors", raw_errors}},
      {6, {"pressure superconvergence", pressure_superconvergence}},
      {7, {"plane wave post-processed errors", postprocessed_errors}},
      {8, {"inexact elliptic projection", elliptic_projection}},
      {9, {"scattering self-convergence", scattering}},
      {10, {"post-processing exactness", postprocess_exactness}},
  };
  const auto selected = only.empty() ? std::set<int>{} : parse_list(only);
  const auto tolerated = parse_list(known);

  int failed = 0;
  std::vector<int> tolerated_failures;
  for (const auto& [id, entry] : criteria) {
    if (!selected.empty() && !selected.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = entry.second();
    } catch (const std::exception& e) {
      outcome.add(std::string("exception: ") + e.what(), false);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& c : outcome.checks) std::cout << "    " << (c.ok ? "ok   " : "FAIL ") << c.what << "\n";
    const bool pass = outcome.passed();
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << id << ": " << entry.first << " (" << fmt(seconds, 3)
              << " s" << (outcome.summary.empty() ? "" : "; " + outcome.summary) << ")" << std::endl;
    if (pass) continue;
    if (tolerated.count(id) && outcome.only_absolute_failures())
      tolerated_failures.push_back(id);
    else
      ++failed;
  }
  for (int id : tolerated_failures)
    std::cout << "note: criterion " << id << " fails only on reference absolute values (tolerated for the exit code)\n";
  return failed == 0 ? 0 : 1;
}
