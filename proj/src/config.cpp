#include "wkg/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace wkg {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d) || std::abs(d) > 1e9) throw ConfigError("config: '" + key + "' expects an integer");
  return static_cast<int>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw ConfigError("config: '" + key + "' expects a boolean");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  return out;
}

FormCoeffs to_coeffs(const std::string& key, const std::string& v) {
  const auto l = to_list(key, v);
  if (l.size() != 4) throw ConfigError("config: '" + key + "' expects four coefficients c0,c01,c02,c12");
  return {l[0], l[1], l[2], l[3]};
}

std::vector<BootstrapBound> to_bounds(const std::string& key, const std::string& v) {
  std::vector<BootstrapBound> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    bool found = false;
    for (auto b : all_bootstrap_bounds())
      if (item == name(b)) {
        out.push_back(b);
        found = true;
      }
    if (!found) throw ConfigError("config: '" + key + "' has unknown bound '" + item + "'");
  }
  return out;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "grid.n", "grid.half_width", "grid.cfl", "grid.dt", "grid.stencil_order",
      "evolution.scheme", "evolution.horizon", "evolution.truncation_T0", "evolution.snapshot_stride",
      "evolution.n1", "evolution.n2",
      "data.shape", "data.amplitude", "data.center", "data.width", "data.radius", "data.weights",
      "diagnostics.energy", "diagnostics.regions", "diagnostics.bootstrap", "diagnostics.evf",
      "diagnostics.h_eff", "diagnostics.n_max", "diagnostics.evf_cap", "diagnostics.ghost_S",
      "diagnostics.region_T", "diagnostics.fit_t0",
      "energy.normalization", "bootstrap.C", "bootstrap.delta", "bootstrap.bounds",
      "blowup.factor", "blowup.b_integral_cap", "output.dir", "sweep.eps"};
  return keys;
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config: line " + std::to_string(lineno) + " lacks '='");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config: line " + std::to_string(lineno) + " has an empty key");
    if (kv.contains(key)) throw ConfigError("config: duplicate key '" + key + "'");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

RunConfig parse_config(const std::string& text) {
  const auto kv = parse_key_values(text);
  const auto& known = config_keys();
  for (const auto& [k, v] : kv)
    if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError("config: unknown key '" + k + "'");
  auto get = [&](const std::string& k) -> const std::string* {
    const auto it = kv.find(k);
    return it == kv.end() ? nullptr : &it->second;
  };

  RunConfig c;
  if (auto v = get("grid.n")) c.grid.n = to_int("grid.n", *v);
  if (auto v = get("grid.half_width")) c.grid.half_width = to_double("grid.half_width", *v);
  if (auto v = get("grid.stencil_order")) c.grid.stencil_order = to_int("grid.stencil_order", *v);
  if (auto v = get("grid.cfl")) c.cfl = to_double("grid.cfl", *v);
  c.grid.dt = c.cfl * c.grid.dx();
  if (auto v = get("grid.dt")) {
    if (get("grid.cfl")) throw ConfigError("config: give grid.cfl or grid.dt, not both");
    c.grid.dt = to_double("grid.dt", *v);
    c.cfl = c.grid.dt / c.grid.dx();
  }

  if (auto v = get("evolution.scheme")) {
    if (*v == "leapfrog") c.evolution.scheme = Scheme::leapfrog;
    else if (*v == "rk4") c.evolution.scheme = Scheme::rk4;
    else throw ConfigError("config: evolution.scheme must be leapfrog or rk4");
  }
  if (auto v = get("evolution.horizon")) c.evolution.horizon = to_double("evolution.horizon", *v);
  if (auto v = get("evolution.truncation_T0")) c.evolution.truncation_T0 = to_double("evolution.truncation_T0", *v);
  if (auto v = get("evolution.snapshot_stride")) c.evolution.snapshot_stride = to_int("evolution.snapshot_stride", *v);
  if (auto v = get("evolution.n1")) c.evolution.spec.n1 = to_coeffs("evolution.n1", *v);
  if (auto v = get("evolution.n2")) c.evolution.spec.n2 = to_coeffs("evolution.n2", *v);
  if (auto v = get("blowup.factor")) c.evolution.blowup_factor = to_double("blowup.factor", *v);
  if (auto v = get("blowup.b_integral_cap")) c.evolution.b_integral_cap = to_double("blowup.b_integral_cap", *v);
  c.evolution.keep_snapshots = false;

  if (auto v = get("data.shape")) {
    try {
      c.data.shape = parse_shape(*v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (auto v = get("data.amplitude")) c.data.amplitude = to_double("data.amplitude", *v);
  if (auto v = get("data.center")) {
    const auto l = to_list("data.center", *v);
    if (l.size() != 2) throw ConfigError("config: data.center expects x1,x2");
    c.data.center_x1 = l[0];
    c.data.center_x2 = l[1];
  }
  if (auto v = get("data.width")) c.data.width = to_double("data.width", *v);
  if (auto v = get("data.radius")) c.data.radius = to_double("data.radius", *v);
  if (auto v = get("data.weights")) {
    const auto l = to_list("data.weights", *v);
    if (l.size() != 4) throw ConfigError("config: data.weights expects u0,u1,v0,v1");
    c.data.w_u0 = l[0];
    c.data.w_u1 = l[1];
    c.data.w_v0 = l[2];
    c.data.w_v1 = l[3];
  }

  if (auto v = get("diagnostics.energy")) c.diagnostics.energy = to_bool("diagnostics.energy", *v);
  if (auto v = get("diagnostics.regions")) c.diagnostics.regions = to_bool("diagnostics.regions", *v);
  if (auto v = get("diagnostics.bootstrap")) c.diagnostics.bootstrap = to_bool("diagnostics.bootstrap", *v);
  if (auto v = get("diagnostics.evf")) c.diagnostics.evf = to_bool("diagnostics.evf", *v);
  if (auto v = get("diagnostics.h_eff")) c.energy.h = to_int("diagnostics.h_eff", *v);
  if (auto v = get("diagnostics.n_max")) c.energy.n_max = to_int("diagnostics.n_max", *v);
  if (auto v = get("diagnostics.evf_cap")) c.energy.evf_cap = to_int("diagnostics.evf_cap", *v);
  if (auto v = get("diagnostics.ghost_S")) c.energy.ghost_S = to_list("diagnostics.ghost_S", *v);
  if (auto v = get("diagnostics.region_T")) c.region_T = to_list("diagnostics.region_T", *v);
  if (auto v = get("diagnostics.fit_t0")) c.fit_t0 = to_double("diagnostics.fit_t0", *v);
  c.energy.with_evf = c.diagnostics.evf;
  if (auto v = get("energy.normalization")) {
    if (*v == "full") c.energy.normalization = Normalization::full;
    else if (*v == "half") c.energy.normalization = Normalization::half;
    else throw ConfigError("config: energy.normalization must be full or half");
  }
  if (auto v = get("bootstrap.C")) c.bootstrap.C = to_double("bootstrap.C", *v);
  if (auto v = get("bootstrap.delta")) c.bootstrap.delta = to_double("bootstrap.delta", *v);
  if (auto v = get("bootstrap.bounds")) c.bootstrap.which = to_bounds("bootstrap.bounds", *v);

  if (auto v = get("output.dir")) c.output_dir = *v;
  if (auto v = get("sweep.eps")) c.eps_list = to_list("sweep.eps", *v);
  c.validate();
  return c;
}

void RunConfig::validate() const {
  try {
    grid.validate();
    evolution.validate();
    data.validate();
    bootstrap.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!(cfl > 0.0)) throw ConfigError("config: CFL number must be > 0");
  if (!(data.support_radius() + evolution.horizon < grid.half_width))
    throw ConfigError("config: data support plus horizon reaches the periodic boundary");
  for (double e : eps_list)
    if (!(e >= 0.0)) throw ConfigError("config: sweep.eps entries must be >= 0");
  for (double T : region_T)
    if (!(T >= 1.0)) throw ConfigError("config: diagnostics.region_T entries must be >= 1");
  if (energy.h < 0 || energy.n_max < 0 || energy.evf_cap < 0) throw ConfigError("config: negative energy order");
  if (!(fit_t0 > 0.0)) throw ConfigError("config: diagnostics.fit_t0 must be > 0");
  if (output_dir.empty()) throw ConfigError("config: output.dir must not be empty");
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace wkg
