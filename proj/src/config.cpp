#include "besselfd/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <vector>

namespace besselfd {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

const std::set<std::string>& command_keys(const std::string& command) {
  static const std::set<std::string> solve = {
      "omega",         "x0",          "y0",
      "x1",            "y1",          "model",
      "c0",            "raster_path", "synthetic_raster",
      "grid",          "inv_h",       "nodes_per_wavelength",
      "n_interior",    "n_boundary",  "bc",
      "policy",        "ratio_p",     "boundary_data",
      "plane_theta",   "src_x",       "src_y",
      "source_amplitude", "sigma_over_h", "field_out",
      "dump_system"};
  static const std::set<std::string> truncation = {
      "k",      "nodes_per_wavelength", "hex_nodes_per_wavelength",
      "sizes",  "itmdi_rounds",         "ratio_p"};
  static const std::set<std::string> pollution = {
      "k_over_2pi", "nodes_per_wavelength", "grid",
      "n_interior", "n_boundary",           "ratio_p"};
  static const std::set<std::string> convergence = {
      "k_over_2pi", "nodes_per_wavelength", "n_interior", "n_boundary", "ratio_p"};
  static const std::set<std::string> planewave = {
      "k",        "kh",         "thetas",     "k_sweep",
      "sweep_ks", "n_interior", "n_boundary", "ratio_p"};
  static const std::set<std::string> green = {
      "k_over_2pi", "inv_h",      "sigma_mul", "bc_order",
      "src_x",      "src_y",      "amplitude", "n_interior",
      "n_boundary", "ratio_p",    "dump_field"};
  static const std::set<std::string> heterogeneous = {
      "omega_over_2pi", "model",      "raster_path", "synthetic_raster",
      "nodes_per_wavelength", "n_interior", "n_boundary", "src_x", "src_y"};
  if (command == "solve") return solve;
  if (command == "truncation") return truncation;
  if (command == "pollution") return pollution;
  if (command == "convergence") return convergence;
  if (command == "planewave") return planewave;
  if (command == "green") return green;
  if (command == "heterogeneous") return heterogeneous;
  fail("unknown command '" + command + "'");
}

double get_num(const json& j, const char* key, double dflt) {
  if (!j.contains(key)) return dflt;
  const json& v = j.at(key);
  if (!v.is_number()) fail(std::string("field '") + key + "': expected a number");
  return v.get<double>();
}

int get_int(const json& j, const char* key, int dflt) {
  if (!j.contains(key)) return dflt;
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(std::string("field '") + key + "': expected an integer");
  return v.get<int>();
}

bool get_bool(const json& j, const char* key, bool dflt) {
  if (!j.contains(key)) return dflt;
  const json& v = j.at(key);
  if (!v.is_boolean()) fail(std::string("field '") + key + "': expected a boolean");
  return v.get<bool>();
}

std::string get_str(const json& j, const char* key, const std::string& dflt) {
  if (!j.contains(key)) return dflt;
  const json& v = j.at(key);
  if (!v.is_string()) fail(std::string("field '") + key + "': expected a string");
  return v.get<std::string>();
}

std::vector<double> get_num_list(const json& j, const char* key,
                                 const std::vector<double>& dflt) {
  if (!j.contains(key)) return dflt;
  const json& v = j.at(key);
  if (!v.is_array() || v.empty())
    fail(std::string("field '") + key + "': expected a non-empty array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number())
      fail(std::string("field '") + key + "': expected a non-empty array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<int> get_int_list(const json& j, const char* key,
                              const std::vector<int>& dflt) {
  if (!j.contains(key)) return dflt;
  const json& v = j.at(key);
  if (!v.is_array() || v.empty())
    fail(std::string("field '") + key + "': expected a non-empty array of integers");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer())
      fail(std::string("field '") + key + "': expected a non-empty array of integers");
    out.push_back(e.get<int>());
  }
  return out;
}

void require_positive(double v, const char* key) {
  if (!(v > 0)) fail(std::string("field '") + key + "': must be positive");
}

void require_npw(double v, const char* key) {
  if (!(v >= 4)) fail(std::string("field '") + key + "': must be at least 4");
}

void require_stencil(int v, const char* key) {
  if (v < 5 || v > 200)
    fail(std::string("field '") + key + "': stencil size must be in [5, 200]");
}

void require_choice(const std::string& v, const char* key,
                    std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (v == a) return;
  std::string msg = std::string("field '") + key + "': must be one of {";
  bool first = true;
  for (const char* a : allowed) {
    if (!first) msg += ", ";
    msg += a;
    first = false;
  }
  fail(msg + "}");
}

void require_file(const std::string& path, const char* key) {
  if (path.empty()) fail(std::string("field '") + key + "': required here but empty");
  if (!std::filesystem::exists(path))
    fail(std::string("field '") + key + "': no such file: " + path);
}

}  // namespace

RunConfig parse_config(const json& j) {
  if (!j.is_object()) fail("config root must be a JSON object");

  RunConfig c;
  c.command = get_str(j, "command", c.command);
  const std::set<std::string>& keys = command_keys(c.command);  // validates command

  std::string unknown;
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    if (key == "command" || key == "out" || key == "seed" || key == "quiet") continue;
    if (!keys.count(key)) unknown += (unknown.empty() ? "" : ", ") + key;
  }
  if (!unknown.empty()) fail("unknown config keys for '" + c.command + "': " + unknown);

  c.out_dir = get_str(j, "out", c.out_dir);
  long long seed = get_int(j, "seed", (int)c.seed);
  if (seed < 0) fail("field 'seed': must be non-negative");
  c.seed = (std::uint32_t)seed;
  c.quiet = get_bool(j, "quiet", c.quiet);

  if (c.command == "solve") {
    SolveConfig& s = c.solve;
    s.omega = get_num(j, "omega", s.omega);
    require_positive(s.omega, "omega");
    s.x0 = get_num(j, "x0", s.x0);
    s.y0 = get_num(j, "y0", s.y0);
    s.x1 = get_num(j, "x1", s.x1);
    s.y1 = get_num(j, "y1", s.y1);
    if (!(s.x1 > s.x0) || !(s.y1 > s.y0))
      fail("field 'x1': domain must satisfy x1 > x0 and y1 > y0");
    s.model = get_str(j, "model", s.model);
    require_choice(s.model, "model", {"constant", "gaussian_lens", "sinusoidal", "raster"});
    s.c0 = get_num(j, "c0", s.c0);
    require_positive(s.c0, "c0");
    s.raster_path = get_str(j, "raster_path", s.raster_path);
    s.synthetic_raster = get_bool(j, "synthetic_raster", s.synthetic_raster);
    if (s.model == "raster" && !s.synthetic_raster)
      require_file(s.raster_path, "raster_path");
    s.grid = get_str(j, "grid", s.grid);
    require_choice(s.grid, "grid", {"square", "hex", "adaptive"});
    s.inv_h = get_num(j, "inv_h", s.inv_h);
    if (s.inv_h < 0) fail("field 'inv_h': must be non-negative");
    s.nodes_per_wavelength = get_num(j, "nodes_per_wavelength", s.nodes_per_wavelength);
    require_npw(s.nodes_per_wavelength, "nodes_per_wavelength");
    s.n_interior = get_int(j, "n_interior", s.n_interior);
    require_stencil(s.n_interior, "n_interior");
    s.n_boundary = get_int(j, "n_boundary", s.n_boundary);
    require_stencil(s.n_boundary, "n_boundary");
    s.bc = get_str(j, "bc", s.bc);
    require_choice(s.bc, "bc", {"impedance", "abc2", "abc3"});
    s.policy = get_str(j, "policy", s.policy);
    require_choice(s.policy, "policy", {"ratio", "target_kappa", "rough_media"});
    s.ratio_p = get_num(j, "ratio_p", s.ratio_p);
    require_positive(s.ratio_p, "ratio_p");
    s.boundary_data = get_str(j, "boundary_data", s.boundary_data);
    require_choice(s.boundary_data, "boundary_data", {"u1", "u2", "plane", "none"});
    s.plane_theta = get_num(j, "plane_theta", s.plane_theta);
    s.src_x = get_num(j, "src_x", s.src_x);
    s.src_y = get_num(j, "src_y", s.src_y);
    s.source_amplitude = get_num(j, "source_amplitude", s.source_amplitude);
    s.sigma_over_h = get_num(j, "sigma_over_h", s.sigma_over_h);
    require_positive(s.sigma_over_h, "sigma_over_h");
    s.field_out = get_str(j, "field_out", s.field_out);
    s.dump_system = get_bool(j, "dump_system", s.dump_system);
  } else if (c.command == "truncation") {
    TruncationParams& p = c.truncation;
    p.k = get_num(j, "k", p.k);
    require_positive(p.k, "k");
    p.nodes_per_wavelength = get_num(j, "nodes_per_wavelength", p.nodes_per_wavelength);
    require_npw(p.nodes_per_wavelength, "nodes_per_wavelength");
    p.hex_nodes_per_wavelength =
        get_num(j, "hex_nodes_per_wavelength", p.hex_nodes_per_wavelength);
    require_npw(p.hex_nodes_per_wavelength, "hex_nodes_per_wavelength");
    p.sizes = get_int_list(j, "sizes", p.sizes);
    for (int s : p.sizes) require_stencil(s, "sizes");
    p.itmdi_rounds = get_int(j, "itmdi_rounds", p.itmdi_rounds);
    if (p.itmdi_rounds < 0) fail("field 'itmdi_rounds': must be non-negative");
    p.ratio_p = get_num(j, "ratio_p", p.ratio_p);
    require_positive(p.ratio_p, "ratio_p");
  } else if (c.command == "pollution") {
    PollutionParams& p = c.pollution;
    p.k_over_2pi = get_num_list(j, "k_over_2pi", p.k_over_2pi);
    for (double v : p.k_over_2pi) require_positive(v, "k_over_2pi");
    p.nodes_per_wavelength = get_num(j, "nodes_per_wavelength", p.nodes_per_wavelength);
    require_npw(p.nodes_per_wavelength, "nodes_per_wavelength");
    p.grid = get_str(j, "grid", p.grid);
    require_choice(p.grid, "grid", {"square", "hex"});
    p.n_interior = get_int(j, "n_interior", p.n_interior);
    require_stencil(p.n_interior, "n_interior");
    p.n_boundary = get_int(j, "n_boundary", p.n_boundary);
    require_stencil(p.n_boundary, "n_boundary");
    p.ratio_p = get_num(j, "ratio_p", p.ratio_p);
    require_positive(p.ratio_p, "ratio_p");
  } else if (c.command == "convergence") {
    ConvergenceParams& p = c.convergence;
    p.k_over_2pi = get_num(j, "k_over_2pi", p.k_over_2pi);
    require_positive(p.k_over_2pi, "k_over_2pi");
    p.nodes_per_wavelength =
        get_num_list(j, "nodes_per_wavelength", p.nodes_per_wavelength);
    for (double v : p.nodes_per_wavelength) require_npw(v, "nodes_per_wavelength");
    p.n_interior = get_int(j, "n_interior", p.n_interior);
    require_stencil(p.n_interior, "n_interior");
    p.n_boundary = get_int(j, "n_boundary", p.n_boundary);
    require_stencil(p.n_boundary, "n_boundary");
    p.ratio_p = get_num(j, "ratio_p", p.ratio_p);
    require_positive(p.ratio_p, "ratio_p");
  } else if (c.command == "planewave") {
    PlanewaveParams& p = c.planewave;
    p.k = get_num(j, "k", p.k);
    require_positive(p.k, "k");
    p.kh = get_num(j, "kh", p.kh);
    require_positive(p.kh, "kh");
    p.thetas = get_num_list(j, "thetas", p.thetas);
    p.k_sweep = get_bool(j, "k_sweep", p.k_sweep);
    p.sweep_ks = get_num_list(j, "sweep_ks", p.sweep_ks);
    for (double v : p.sweep_ks) require_positive(v, "sweep_ks");
    p.n_interior = get_int(j, "n_interior", p.n_interior);
    require_stencil(p.n_interior, "n_interior");
    p.n_boundary = get_int(j, "n_boundary", p.n_boundary);
    require_stencil(p.n_boundary, "n_boundary");
    p.ratio_p = get_num(j, "ratio_p", p.ratio_p);
    require_positive(p.ratio_p, "ratio_p");
  } else if (c.command == "green") {
    GreenParams& p = c.green;
    p.k_over_2pi = get_num(j, "k_over_2pi", p.k_over_2pi);
    require_positive(p.k_over_2pi, "k_over_2pi");
    p.inv_h = get_num(j, "inv_h", p.inv_h);
    require_positive(p.inv_h, "inv_h");
    p.sigma_mul = get_num(j, "sigma_mul", p.sigma_mul);
    require_positive(p.sigma_mul, "sigma_mul");
    p.bc_order = get_int(j, "bc_order", p.bc_order);
    if (p.bc_order != 2 && p.bc_order != 3) fail("field 'bc_order': must be 2 or 3");
    p.src_x = get_num(j, "src_x", p.src_x);
    p.src_y = get_num(j, "src_y", p.src_y);
    p.amplitude = get_num(j, "amplitude", p.amplitude);
    p.n_interior = get_int(j, "n_interior", p.n_interior);
    require_stencil(p.n_interior, "n_interior");
    p.n_boundary = get_int(j, "n_boundary", p.n_boundary);
    require_stencil(p.n_boundary, "n_boundary");
    p.ratio_p = get_num(j, "ratio_p", p.ratio_p);
    require_positive(p.ratio_p, "ratio_p");
    p.dump_field = get_bool(j, "dump_field", p.dump_field);
  } else if (c.command == "heterogeneous") {
    HeterogeneousParams& p = c.heterogeneous;
    p.omega_over_2pi = get_num_list(j, "omega_over_2pi", p.omega_over_2pi);
    for (double v : p.omega_over_2pi) require_positive(v, "omega_over_2pi");
    p.model = get_str(j, "model", p.model);
    require_choice(p.model, "model", {"gaussian_lens", "sinusoidal", "raster"});
    p.raster_path = get_str(j, "raster_path", p.raster_path);
    p.synthetic_raster = get_bool(j, "synthetic_raster", p.synthetic_raster);
    if (p.model == "raster" && !p.synthetic_raster)
      require_file(p.raster_path, "raster_path");
    p.nodes_per_wavelength = get_num(j, "nodes_per_wavelength", p.nodes_per_wavelength);
    require_npw(p.nodes_per_wavelength, "nodes_per_wavelength");
    p.n_interior = get_int(j, "n_interior", p.n_interior);
    require_stencil(p.n_interior, "n_interior");
    p.n_boundary = get_int(j, "n_boundary", p.n_boundary);
    require_stencil(p.n_boundary, "n_boundary");
    p.src_x = get_num(j, "src_x", p.src_x);
    p.src_y = get_num(j, "src_y", p.src_y);
  }
  return c;
}

json serialize_config(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["out"] = c.out_dir;
  j["seed"] = c.seed;
  j["quiet"] = c.quiet;

  if (c.command == "solve") {
    const SolveConfig& s = c.solve;
    j["omega"] = s.omega;
    j["x0"] = s.x0;
    j["y0"] = s.y0;
    j["x1"] = s.x1;
    j["y1"] = s.y1;
    j["model"] = s.model;
    j["c0"] = s.c0;
    j["raster_path"] = s.raster_path;
    j["synthetic_raster"] = s.synthetic_raster;
    j["grid"] = s.grid;
    j["inv_h"] = s.inv_h;
    j["nodes_per_wavelength"] = s.nodes_per_wavelength;
    j["n_interior"] = s.n_interior;
    j["n_boundary"] = s.n_boundary;
    j["bc"] = s.bc;
    j["policy"] = s.policy;
    j["ratio_p"] = s.ratio_p;
    j["boundary_data"] = s.boundary_data;
    j["plane_theta"] = s.plane_theta;
    j["src_x"] = s.src_x;
    j["src_y"] = s.src_y;
    j["source_amplitude"] = s.source_amplitude;
    j["sigma_over_h"] = s.sigma_over_h;
    j["field_out"] = s.field_out;
    j["dump_system"] = s.dump_system;
  } else if (c.command == "truncation") {
    const TruncationParams& p = c.truncation;
    j["k"] = p.k;
    j["nodes_per_wavelength"] = p.nodes_per_wavelength;
    j["hex_nodes_per_wavelength"] = p.hex_nodes_per_wavelength;
    j["sizes"] = p.sizes;
    j["itmdi_rounds"] = p.itmdi_rounds;
    j["ratio_p"] = p.ratio_p;
  } else if (c.command == "pollution") {
    const PollutionParams& p = c.pollution;
    j["k_over_2pi"] = p.k_over_2pi;
    j["nodes_per_wavelength"] = p.nodes_per_wavelength;
    j["grid"] = p.grid;
    j["n_interior"] = p.n_interior;
    j["n_boundary"] = p.n_boundary;
    j["ratio_p"] = p.ratio_p;
  } else if (c.command == "convergence") {
    const ConvergenceParams& p = c.convergence;
    j["k_over_2pi"] = p.k_over_2pi;
    j["nodes_per_wavelength"] = p.nodes_per_wavelength;
    j["n_interior"] = p.n_interior;
    j["n_boundary"] = p.n_boundary;
    j["ratio_p"] = p.ratio_p;
  } else if (c.command == "planewave") {
    const PlanewaveParams& p = c.planewave;
    j["k"] = p.k;
    j["kh"] = p.kh;
    j["thetas"] = p.thetas;
    j["k_sweep"] = p.k_sweep;
    j["sweep_ks"] = p.sweep_ks;
    j["n_interior"] = p.n_interior;
    j["n_boundary"] = p.n_boundary;
    j["ratio_p"] = p.ratio_p;
  } else if (c.command == "green") {
    const GreenParams& p = c.green;
    j["k_over_2pi"] = p.k_over_2pi;
    j["inv_h"] = p.inv_h;
    j["sigma_mul"] = p.sigma_mul;
    j["bc_order"] = p.bc_order;
    j["src_x"] = p.src_x;
    j["src_y"] = p.src_y;
    j["amplitude"] = p.amplitude;
    j["n_interior"] = p.n_interior;
    j["n_boundary"] = p.n_boundary;
    j["ratio_p"] = p.ratio_p;
    j["dump_field"] = p.dump_field;
  } else if (c.command == "heterogeneous") {
    const HeterogeneousParams& p = c.heterogeneous;
    j["omega_over_2pi"] = p.omega_over_2pi;
    j["model"] = p.model;
    j["raster_path"] = p.raster_path;
    j["synthetic_raster"] = p.synthetic_raster;
    j["nodes_per_wavelength"] = p.nodes_per_wavelength;
    j["n_interior"] = p.n_interior;
    j["n_boundary"] = p.n_boundary;
    j["src_x"] = p.src_x;
    j["src_y"] = p.src_y;
  }
  return j;
}

json load_config_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail("config parse error in " + path + ": " + e.what());
  }
  return j;
}

RunConfig load_config_file(const std::string& path) {
  return parse_config(load_config_json(path));
}

void apply_override(json& j, const std::string& keyval) {
  auto eq = keyval.find('=');
  if (eq == std::string::npos || eq == 0)
    fail("override must look like key=value: " + keyval);
  std::string key = keyval.substr(0, eq);
  std::string val = keyval.substr(eq + 1);
  json parsed;
  try {
    parsed = json::parse(val);
  } catch (const json::parse_error&) {
    parsed = val;  // bare word: keep as string
  }
  j[key] = parsed;
}

}  // namespace besselfd
