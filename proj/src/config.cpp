#include "mixedwave/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mixedwave {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

// Splits on commas and whitespace.
std::vector<std::string> split_list(const std::string& s) {
  std::string t = s;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream in(t);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
  Config cfg;
  cfg.source_ = source;
  std::string section, raw;
  int number = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw ConfigError(source + ":" + std::to_string(number) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++number;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_name(section)) fail("invalid section name '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_name(key)) fail("invalid key '" + key + "'");
    if (section.empty()) fail("key '" + key + "' appears before any [section]");
    if (value.empty()) fail("missing value for '" + key + "'");
    const std::string full = section + "." + key;
    if (cfg.entries_.count(full))
      fail("duplicate key '" + key + "' (first set on line " + std::to_string(cfg.entries_[full].line) + ")");
    cfg.entries_[full] = {value, number};
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse(in, path);
}

int Config::line(const std::string& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? 0 : it->second.line;
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, e] : entries_) out.push_back(k);
  return out;
}

void Config::fail(const std::string& key, const std::string& message) const {
  throw ConfigError(source_ + ":" + std::to_string(line(key)) + ": " + key + ": " + message);
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second.value;
}

double Config::get_double(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  const auto& v = entries_.at(key).value;
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    fail(key, "expected a number, got '" + v + "'");
  }
  if (used != v.size()) fail(key, "expected a number, got '" + v + "'");
  return out;
}

int Config::get_int(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  const auto& v = entries_.at(key).value;
  std::size_t used = 0;
  int out = 0;
  try {
    out = std::stoi(v, &used);
  } catch (const std::exception&) {
    fail(key, "expected an integer, got '" + v + "'");
  }
  if (used != v.size()) fail(key, "expected an integer, got '" + v + "'");
  return out;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto& v = entries_.at(key).value;
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  fail(key, "expected true or false, got '" + v + "'");
}

std::vector<double> Config::get_doubles(const std::string& key, const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  for (const auto& w : split_list(entries_.at(key).value)) {
    std::size_t used = 0;
    try {
      out.push_back(std::stod(w, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != w.size() || used == 0) fail(key, "expected a list of numbers, got '" + w + "'");
  }
  return out;
}

std::vector<int> Config::get_ints(const std::string& key, const std::vector<int>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<int> out;
  for (const auto& w : split_list(entries_.at(key).value)) {
    std::size_t used = 0;
    try {
      out.push_back(std::stoi(w, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != w.size() || used == 0) fail(key, "expected a list of integers, got '" + w + "'");
  }
  return out;
}

std::vector<std::string> Config::get_words(const std::string& key, const std::vector<std::string>& fallback) const {
  return has(key) ? split_list(entries_.at(key).value) : fallback;
}

BoundaryTag Config::get_tag(const std::string& key, BoundaryTag fallback) const {
  if (!has(key)) return fallback;
  const auto& v = entries_.at(key).value;
  const auto tag = parse_boundary_tag(v);
  if (!tag) fail(key, "unknown boundary tag '" + v + "' (expected dirichlet_p, neumann_u or scatterer)");
  return *tag;
}

void Config::check_keys(const std::set<std::string>& allowed) const {
  for (const auto& [k, e] : entries_)
    if (!allowed.count(k)) fail(k, "unknown key");
}

AppConfig make_app_config(const Config& c) {
  c.check_keys({
      "scenario.name", "scenario.final_time", "scenario.levels", "scenario.tau_rule", "scenario.tau",
      "scenario.mesh_file", "scenario.coarse_level", "scenario.wave_vector", "scenario.amplitude", "scenario.rate",
      "scenario.shift", "scenario.rect", "scenario.jitter", "scenario.mesh_seed", "boundary.left", "boundary.right", "boundary.bottom", "boundary.top",
      "study.observe_interval", "study.postprocess", "study.superconvergence", "study.initial_velocity",
      "study.velocity_space",
      "run.level", "run.snapshot_times", "run.fields", "energy.level", "energy.steps", "energy.cfl_fraction",
      "energy.tau", "energy.seed", "energy.random_data", "energy.growth_limit",
  });
  AppConfig app;
  const std::string name = c.get_string("scenario.name", "plane_wave");
  try {
    app.scenario = scenario_by_name(name);
  } catch (const std::invalid_argument&) {
    c.fail("scenario.name", "unknown scenario '" + name +
                                "' (expected plane_wave, scattering, lshape or cavity)");
  }
  auto& s = app.scenario;
  s.final_time = c.get_double("scenario.final_time", s.final_time);
  if (s.final_time < 0.0) c.fail("scenario.final_time", "must be nonnegative");
  s.levels = c.get_ints("scenario.levels", s.levels);
  for (int l : s.levels)
    if (l < 0 || l > 12) c.fail("scenario.levels", "levels must lie in 0..12");
  const std::string rule = c.get_string("scenario.tau_rule", s.tau_rule == TauRule::fixed ? "fixed" : "fraction_of_h");
  if (rule == "fixed")
    s.tau_rule = TauRule::fixed;
  else if (rule == "fraction_of_h")
    s.tau_rule = TauRule::fraction_of_h;
  else
    c.fail("scenario.tau_rule", "expected fixed or fraction_of_h, got '" + rule + "'");
  s.tau_value = c.get_double("scenario.tau", s.tau_value);
  if (!(s.tau_value > 0.0)) c.fail("scenario.tau", "must be positive");
  s.mesh_file = c.get_string("scenario.mesh_file", s.mesh_file);
  s.coarse_level = c.get_int("scenario.coarse_level", s.coarse_level);
  if (c.has("scenario.wave_vector")) {
    const auto k = c.get_doubles("scenario.wave_vector", {});
    if (k.size() != 2) c.fail("scenario.wave_vector", "expected two numbers");
    const double len = std::hypot(k[0], k[1]);
    if (!(len > 0.0)) c.fail("scenario.wave_vector", "must be nonzero");
    s.wave.k = Vec2{k[0], k[1]} / len;
  }
  s.wave.g.amplitude = c.get_double("scenario.amplitude", s.wave.g.amplitude);
  s.wave.g.rate = c.get_double("scenario.rate", s.wave.g.rate);
  if (!(s.wave.g.rate > 0.0)) c.fail("scenario.rate", "must be positive");
  s.wave.g.shift = c.get_double("scenario.shift", s.wave.g.shift);
  if (c.has("scenario.rect")) {
    const auto r = c.get_doubles("scenario.rect", {});
    if (r.size() != 4 || !(r[2] > r[0] && r[3] > r[1])) c.fail("scenario.rect", "expected x0 y0 x1 y1 with x1 > x0, y1 > y0");
    s.rect = {r[0], r[1], r[2], r[3]};
  }
  s.jitter = c.get_double("scenario.jitter", s.jitter);
  if (!(s.jitter >= 0.0 && s.jitter < 0.5)) c.fail("scenario.jitter", "must lie in [0, 0.5)");
  if (s.jitter > 0.0 && s.domain == DomainKind::scattering) c.fail("scenario.jitter", "not available for the scattering mesh");
  s.mesh_seed = static_cast<std::uint64_t>(c.get_int("scenario.mesh_seed", static_cast<int>(s.mesh_seed)));
  const char* sides[4] = {"boundary.left", "boundary.right", "boundary.bottom", "boundary.top"};
  for (int i = 0; i < 4; ++i) {
    if (!c.has(sides[i])) continue;
    if (s.domain == DomainKind::scattering) c.fail(sides[i], "the scattering mesh carries its own tags");
    s.sides[i] = c.get_tag(sides[i], s.sides[i]);
  }
  bool any_dirichlet = false;
  for (auto t : s.sides) any_dirichlet = any_dirichlet || t == BoundaryTag::DirichletP;
  if (s.domain != DomainKind::scattering && !any_dirichlet) s.boundary_data = false;

  auto& st = app.study;
  st.observe_interval = c.get_double("study.observe_interval", s.name == "scattering" ? 0.05 : 0.0625);
  if (st.observe_interval < 0.0) c.fail("study.observe_interval", "must be nonnegative");
  st.postprocess = c.get_bool("study.postprocess", true);
  st.superconvergence = c.get_bool("study.superconvergence", true);
  const std::string init = c.get_string("study.initial_velocity", "elliptic_projection");
  if (init == "elliptic_projection")
    st.initial_velocity = InitialVelocity::elliptic_projection;
  else if (init == "interpolant")
    st.initial_velocity = InitialVelocity::interpolant;
  else
    c.fail("study.initial_velocity", "expected elliptic_projection or interpolant, got '" + init + "'");

  const std::string vspace = c.get_string("study.velocity_space", "full");
  if (vspace == "constrained")
    st.velocity_postprocess.constrained = true;
  else if (vspace == "full")
    st.velocity_postprocess.constrained = false;
  else
    c.fail("study.velocity_space", "expected constrained or full, got '" + vspace + "'");

  app.run_level = c.get_int("run.level", s.levels.empty() ? 3 : s.levels.front());
  st.snapshot_times = c.get_doubles("run.snapshot_times", {});
  for (double t : st.snapshot_times)
    if (t < 0.0 || t > s.final_time + 1e-12) c.fail("run.snapshot_times", "times must lie in [0, final_time]");
  app.fields = c.get_words("run.fields", app.fields);
  for (const auto& f : app.fields)
    if (f != "p" && f != "p_tilde" && f != "u_hat" && f != "u_tilde")
      c.fail("run.fields", "unknown field '" + f + "' (expected p, p_tilde, u_hat, u_tilde)");

  auto& e = app.energy;
  e.level = c.get_int("energy.level", e.level);
  e.steps = c.get_int("energy.steps", e.steps);
  if (e.steps < 0) c.fail("energy.steps", "must be nonnegative");
  e.cfl_fraction = c.get_double("energy.cfl_fraction", e.cfl_fraction);
  if (!(e.cfl_fraction > 0.0)) c.fail("energy.cfl_fraction", "must be positive");
  e.tau = c.get_double("energy.tau", e.tau);
  if (e.tau < 0.0) c.fail("energy.tau", "must be nonnegative");
  e.seed = static_cast<std::uint64_t>(c.get_int("energy.seed", static_cast<int>(e.seed)));
  e.random_data = c.get_bool("energy.random_data", e.random_data);
  e.growth_limit = c.get_double("energy.growth_limit", e.growth_limit);

  try {
    s.check();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string("invalid scenario: ") + ex.what());
  }
  return app;
}

}  // namespace mixedwave
