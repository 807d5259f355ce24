// Command-line front end.  Thin dispatch: flags and JSON config merge into
// one validated RunConfig, then control passes to the library runners.
// Exit codes: 0 success, 2 config error, 3 numerical failure.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "besselfd/analytic.hpp"
#include "besselfd/config.hpp"
#include "besselfd/harness.hpp"

namespace {

using besselfd::RunConfig;
using besselfd::RunContext;

std::string path_join(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  if (dir.back() == '/') return dir + name;
  return dir + "/" + name;
}

int run_solve(const RunConfig& cfg, const RunContext& ctx) {
  using namespace besselfd;
  const SolveConfig& s = cfg.solve;
  Rect box{s.x0, s.y0, s.x1, s.y1};

  SpeedModel speed = SpeedModel::constant(s.c0);
  if (s.model == "gaussian_lens") {
    speed = SpeedModel::gaussian_lens();
  } else if (s.model == "sinusoidal") {
    speed = SpeedModel::sinusoidal();
  } else if (s.model == "raster") {
    Raster r = s.synthetic_raster ? synthetic_layer_raster(box, 128, 128, ctx.seed)
                                  : load_raster(s.raster_path);
    speed = SpeedModel::from_raster(std::move(r));
  }

  NodeSet ns;
  if (s.grid == "adaptive") {
    ns = generate_adaptive(box, s.omega, s.nodes_per_wavelength, speed, ctx.seed);
  } else {
    double inv_h = s.inv_h;
    if (inv_h <= 0) inv_h = s.nodes_per_wavelength * s.omega / (2 * M_PI * s.c0);
    ns = s.grid == "hex" ? generate_hex_grid(box, inv_h)
                         : generate_square_grid(box, inv_h);
  }
  std::vector<Stencil> st = build_stencils(ns, s.n_interior, s.n_boundary);

  ProblemSpec prob;
  prob.omega = s.omega;
  prob.speed = speed;
  prob.bc = s.bc == "abc3"   ? BcKind::abc3
            : s.bc == "abc2" ? BcKind::abc2
                             : BcKind::impedance;
  prob.policy.kind = s.policy == "target_kappa" ? BetaPolicy::Kind::target_kappa_formula
                     : s.policy == "rough_media" ? BetaPolicy::Kind::rough_media
                                                 : BetaPolicy::Kind::ratio;
  prob.policy.p = s.ratio_p;

  if (s.boundary_data != "none") {
    double k_ref = s.omega / s.c0;  // manufactured data assumes uniform speed
    ReferenceField f = s.boundary_data == "u2" ? ReferenceField::test_u2(k_ref)
                       : s.boundary_data == "plane"
                           ? ReferenceField::plane_wave(k_ref, s.plane_theta)
                           : ReferenceField::test_u1(k_ref);
    prob.boundary_g = [f](double x, double y, double nx, double ny) {
      return f.impedance_data(x, y, nx, ny);
    };
  }
  if (s.source_amplitude != 0) {
    GaussianSource src;
    src.x = s.src_x;
    src.y = s.src_y;
    src.sigma = s.sigma_over_h * ns.h;
    src.amplitude = s.source_amplitude;
    prob.sources.push_back(src);
  }

  auto t0 = std::chrono::steady_clock::now();
  SparseSystem sys = assemble(ns, st, prob);
  for (int i = 0; i < sys.n; ++i) sys.rhs[i] *= sys.gamma[i];
  auto t1 = std::chrono::steady_clock::now();
  double residual = 0;
  std::vector<cplx> u = solve_sparse(sys, &residual);
  auto t2 = std::chrono::steady_clock::now();

  dump_field(ns, u, path_join(ctx.out_dir, s.field_out));
  if (s.dump_system) dump_system(sys, path_join(ctx.out_dir, "system.dat"));

  nlohmann::json meta;
  meta["experiment"] = "solve";
  meta["config"] = serialize_config(cfg);
  meta["n_nodes"] = (int)ns.size();
  meta["residual"] = residual;
  meta["beta_mean"] = sys.beta_mean;
  meta["timings"] = {
      {"assemble_s", std::chrono::duration<double>(t1 - t0).count()},
      {"solve_s", std::chrono::duration<double>(t2 - t1).count()}};
  std::ofstream out(path_join(ctx.out_dir, "solve.json"));
  out << meta.dump(2) << "\n";

  std::printf("solve: N=%zu residual=%.3g field=%s\n", ns.size(), residual,
              path_join(ctx.out_dir, s.field_out).c_str());
  return 0;
}

int dispatch(const RunConfig& cfg) {
  RunContext ctx;
  ctx.out_dir = cfg.out_dir;
  ctx.quiet = cfg.quiet;
  ctx.seed = cfg.seed;

  if (cfg.command == "solve") return run_solve(cfg, ctx);
  if (cfg.command == "truncation") {
    auto rows = besselfd::run_truncation(cfg.truncation, ctx);
    std::printf("truncation: %zu rows -> %s\n", rows.size(),
                path_join(cfg.out_dir, "truncation.csv").c_str());
  } else if (cfg.command == "pollution") {
    auto rows = besselfd::run_pollution(cfg.pollution, ctx);
    std::printf("pollution: %zu rows -> %s\n", rows.size(),
                path_join(cfg.out_dir, "pollution.csv").c_str());
  } else if (cfg.command == "convergence") {
    auto result = besselfd::run_convergence(cfg.convergence, ctx);
    std::printf("convergence: %zu rows, slope %.3f -> %s\n", result.rows.size(),
                result.slope, path_join(cfg.out_dir, "convergence.csv").c_str());
  } else if (cfg.command == "planewave") {
    auto rows = besselfd::run_planewave(cfg.planewave, ctx);
    std::printf("planewave: %zu rows -> %s\n", rows.size(),
                path_join(cfg.out_dir, "planewave.csv").c_str());
  } else if (cfg.command == "green") {
    auto result = besselfd::run_green(cfg.green, ctx);
    std::printf("green: N=%d err_far=%.3g zc_err=%.3g -> %s\n", result.n_nodes,
                result.err_far, result.zc_err,
                path_join(cfg.out_dir, "green.csv").c_str());
  } else if (cfg.command == "heterogeneous") {
    auto rows = besselfd::run_heterogeneous(cfg.heterogeneous, ctx);
    std::printf("heterogeneous: %zu rows -> %s\n", rows.size(),
                path_join(cfg.out_dir, "heterogeneous.csv").c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"meshless Helmholtz solver with oscillatory kernels"};
  app.require_subcommand(0, 1);

  std::string config_path, out_dir;
  long long seed = -1;
  bool quiet = false;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_dir, "output directory (created if missing)");
  app.add_option("--seed", seed, "RNG seed for node sampling");
  app.add_flag("--quiet", quiet, "suppress progress lines on stderr");
  app.add_option("--set", sets, "override a config key, key=value (repeatable)");

  const char* commands[] = {"solve",     "truncation", "pollution", "convergence",
                            "planewave", "green",      "heterogeneous"};
  const char* blurbs[] = {
      "assemble and solve one problem, dump the field",
      "local derivative error across stencil sizes and solver paths",
      "error growth across a frequency sweep at fixed nodes per wavelength",
      "error against spacing at fixed frequency, with regression slope",
      "plane-wave transmission across incidence angles",
      "mollified point source against the free-space response",
      "graded media on adaptive nodes across a frequency sweep"};
  for (std::size_t i = 0; i < std::size(commands); ++i)
    app.add_subcommand(commands[i], blurbs[i])->fallthrough();

  CLI11_PARSE(app, argc, argv);

  RunConfig cfg;
  try {
    nlohmann::json raw = nlohmann::json::object();
    if (!config_path.empty()) raw = besselfd::load_config_json(config_path);
    for (const std::string& kv : sets) besselfd::apply_override(raw, kv);
    for (const char* c : commands)
      if (app.got_subcommand(c)) raw["command"] = c;
    if (!out_dir.empty()) raw["out"] = out_dir;
    if (seed >= 0) raw["seed"] = seed;
    if (quiet) raw["quiet"] = true;
    cfg = besselfd::parse_config(raw);
  } catch (const besselfd::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }

  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  {
    std::string probe = path_join(cfg.out_dir, ".write_probe");
    std::ofstream p(probe);
    if (!p) {
      std::fprintf(stderr, "config error: output directory not writable: %s\n",
                   cfg.out_dir.c_str());
      return 2;
    }
    p.close();
    std::filesystem::remove(probe, ec);
  }

  try {
    return dispatch(cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
