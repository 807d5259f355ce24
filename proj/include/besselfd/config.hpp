// Structured run configuration: a flat JSON object validated against the
// key set of the selected command, with defaults applied and every value
// range-checked.  Serialization emits the fully resolved config (all legal
// keys, defaults filled), so parse -> serialize -> parse is the identity.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "besselfd/harness.hpp"

namespace besselfd {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// one-off solve setup (the non-experiment command)
struct SolveConfig {
  double omega = 2 * M_PI * 10;
  double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
  std::string model = "constant";  // constant | gaussian_lens | sinusoidal | raster
  double c0 = 1.0;
  std::string raster_path;
  bool synthetic_raster = false;
  std::string grid = "square";  // square | hex | adaptive
  double inv_h = 0;             // 0: derived from nodes_per_wavelength
  double nodes_per_wavelength = 6;
  int n_interior = 13, n_boundary = 15;
  std::string bc = "impedance";  // impedance | abc2 | abc3
  std::string policy = "ratio";  // ratio | target_kappa | rough_media
  double ratio_p = 6;
  // boundary data manufactured from a reference field; "none" leaves the
  // walls homogeneous (absorbing runs)
  std::string boundary_data = "u1";  // u1 | u2 | plane | none
  double plane_theta = M_PI / 4;
  double src_x = 0, src_y = 0;  // Gaussian source; amplitude 0 disables it
  double source_amplitude = 0;
  double sigma_over_h = 2.0;
  std::string field_out = "field.dat";
  bool dump_system = false;
};

struct RunConfig {
  std::string command = "solve";
  std::string out_dir = ".";
  std::uint32_t seed = 1234;
  bool quiet = false;

  SolveConfig solve;
  TruncationParams truncation;
  PollutionParams pollution;
  ConvergenceParams convergence;
  PlanewaveParams planewave;
  GreenParams green;
  HeterogeneousParams heterogeneous;
};

// Throws ConfigError on unknown keys (listing them), type mismatches, or
// out-of-range values (naming the field).
RunConfig parse_config(const nlohmann::json& j);

// Fully resolved flat object for the config's command.
nlohmann::json serialize_config(const RunConfig& c);

// Raw object from disk (no validation); feed through parse_config after any
// overrides.
nlohmann::json load_config_json(const std::string& path);

RunConfig load_config_file(const std::string& path);

// "key=value" override on the raw object; the value is parsed as a JSON
// literal when it scans as one, and kept as a string otherwise.
void apply_override(nlohmann::json& j, const std::string& keyval);

}  // namespace besselfd
