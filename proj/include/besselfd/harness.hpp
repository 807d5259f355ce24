// Experiment drivers.  Each runner writes <name>.csv (pure numerics, stable
// across runs) plus <name>.json (config echo and wall times) into the output
// directory, and returns its rows so tests can assert on them directly.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "besselfd/system.hpp"

namespace besselfd {

struct RunContext {
  std::string out_dir = ".";
  bool quiet = false;
  std::uint32_t seed = 1234;
};

// --- local truncation error of the dx weight row on an oscillatory field --
struct TruncationParams {
  double k = 100;
  double nodes_per_wavelength = 8;      // square lattice: h = 2pi / (Ng k)
  double hex_nodes_per_wavelength = 6;  // spacing of the 7-node hex row
  std::vector<int> sizes = {9, 13, 25, 49, 81};
  int itmdi_rounds = 15;
  double ratio_p = 6;
};
struct TruncationRow {
  std::string lattice;  // "square" or "hex"
  std::string path;     // "direct", "mdi", "itmdi"
  int n = 0;
  double kappa_j = 0;    // spectrum of the raw kernel matrix (hp sweep)
  double beta = 0;
  double kappa_reg = 0;  // (l1 + beta) / (ln + beta)
  double err_abs = 0;    // |w u - dx u| at the center
  double err_rel = 0;    // err_abs / |dx u|
};
std::vector<TruncationRow> run_truncation(const TruncationParams&, const RunContext&);

// --- fixed nodes-per-wavelength error growth across frequencies ----------
struct PollutionParams {
  std::vector<double> k_over_2pi = {10, 20};
  double nodes_per_wavelength = 6;
  std::string grid = "square";  // square | hex
  int n_interior = 13, n_boundary = 15;
  double ratio_p = 6;
};
struct PollutionRow {
  double k_over_2pi = 0;
  double inv_h = 0;
  int n_nodes = 0;
  double err_u1 = 0, err_u2 = 0;  // relative sup-norm over all nodes
  double cond_est = 0;
  double beta_mean = 0;
  double residual = 0;
};
std::vector<PollutionRow> run_pollution(const PollutionParams&, const RunContext&);

// --- h-refinement at fixed frequency -------------------------------------
struct ConvergenceParams {
  double k_over_2pi = 20;
  std::vector<double> nodes_per_wavelength = {6.0, 60.0 / 7.0, 60.0 / 4.9};
  int n_interior = 9, n_boundary = 15;
  double ratio_p = 4;
};
struct ConvergenceRow {
  double nodes_per_wavelength = 0;
  double inv_h = 0;
  int n_nodes = 0;
  double h = 0;
  double err = 0;
  double cond_est = 0;
};
struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  double slope = 0;  // least-squares d log(err) / d log(h)
};
ConvergenceResult run_convergence(const ConvergenceParams&, const RunContext&);

// --- plane-wave transmission across incidence angles (and a k sweep) -----
struct PlanewaveParams {
  double k = 100;
  double kh = 1.0;
  std::vector<double> thetas = {0.0, M_PI / 8, M_PI / 4, 3 * M_PI / 8, M_PI / 2};
  bool k_sweep = false;                          // theta = pi/4, kh fixed
  std::vector<double> sweep_ks = {25, 50, 100, 200};
  int n_interior = 13, n_boundary = 25;
  double ratio_p = 4;
};
struct PlanewaveRow {
  double theta = 0;
  double k = 0;
  int n_nodes = 0;
  double err = 0;
  double residual = 0;
};
std::vector<PlanewaveRow> run_planewave(const PlanewaveParams&, const RunContext&);

// --- mollified point source against the free-space response --------------
struct GreenParams {
  double k_over_2pi = 20;
  double inv_h = 120;
  double sigma_mul = 1.5;  // source width in units of h
  int bc_order = 3;        // 2 or 3
  double src_x = 0.5, src_y = 0.5;
  double amplitude = 1.0;
  int n_interior = 9, n_boundary = 19;
  double ratio_p = 6;
  bool dump_field = false;
};
struct GreenResult {
  int n_nodes = 0;
  double err_far = 0;    // sup-norm outside 5h of the source, relative
  double zc_err = 0;     // zero-crossing spacing error on the bottom trace
  double residual = 0;
};
GreenResult run_green(const GreenParams&, const RunContext&);

// --- graded media: node budget and conditioning across frequencies -------
struct HeterogeneousParams {
  std::vector<double> omega_over_2pi = {2.5, 5};
  std::string model = "gaussian_lens";  // gaussian_lens | sinusoidal | raster
  std::string raster_path;              // used when model == raster
  bool synthetic_raster = false;        // generate layered raster from seed
  double nodes_per_wavelength = 12.6;
  int n_interior = 13, n_boundary = 15;
  double src_x = -0.2, src_y = -0.3;
};
struct HeterogeneousRow {
  double omega_over_2pi = 0;
  int n_nodes = 0;
  double cond_est = 0;
  double residual = 0;
  double beta_mean = 0;
  // mean zero-crossing spacing on the source scanline, fast half over slow
  // half; > 1 when the local wavelength tracks c(x)
  double lambda_ratio = 0;
};
std::vector<HeterogeneousRow> run_heterogeneous(const HeterogeneousParams&, const RunContext&);

}  // namespace besselfd
