// Global assembly and sparse solution.  Each node contributes one row:
// interior nodes the closed-form Helmholtz row, boundary nodes the chosen
// absorbing/impedance operator.  The wavenumber is local, k = omega / c(x).
#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "besselfd/geometry.hpp"
#include "besselfd/localreg.hpp"
#include "besselfd/media.hpp"
#include "besselfd/operators.hpp"

namespace besselfd {

using cplx = std::complex<double>;

struct GaussianSource {
  double x = 0, y = 0;
  cplx amplitude = 1.0;
  double sigma = 0;  // mollification width
};

struct ProblemSpec {
  double omega = 0;  // k(x) = omega / c(x)
  SpeedModel speed = SpeedModel::constant(1.0);
  BcKind bc = BcKind::impedance;
  // boundary data g(x, y, nx, ny); empty means homogeneous (absorbing runs)
  std::function<cplx(double, double, double, double)> boundary_g;
  std::vector<GaussianSource> sources;
  BetaPolicy policy;
  int itmdi_rounds = -1;
};

// mollified right-hand side: sum of normalized Gaussians
cplx eval_sources(const std::vector<GaussianSource>& sources, double x, double y);

struct SparseSystem {
  int n = 0;
  std::vector<int> row_ptr;   // CSR, size n+1
  std::vector<int> col_idx;   // sorted within each row
  std::vector<cplx> values;
  std::vector<cplx> rhs;
  // per-row source-coupling factor of the interior operator (1 on boundary
  // rows); multiply into an interior forcing term to get calibrated data
  std::vector<double> gamma;
  // assembly diagnostics
  double beta_min = 0, beta_max = 0, beta_mean = 0;
  int guarded_rows = 0;
};

SparseSystem assemble(const NodeSet& ns, const std::vector<Stencil>& stencils,
                      const ProblemSpec& prob);

// Sparse LU (column-ordered) with one refinement pass; the relative
// max-norm residual comes back through *residual if requested.
std::vector<cplx> solve_sparse(const SparseSystem& sys, double* residual = nullptr);

// Power-style 1-norm condition estimate ||H||_1 * est(||H^-1||_1) via
// repeated solves with H and its adjoint.
double estimate_condition(const SparseSystem& sys);

// "i j re im" per nonzero, 0-based indices
void dump_system(const SparseSystem& sys, const std::string& path);
// "x y re im" per node
void dump_field(const NodeSet& ns, const std::vector<cplx>& u, const std::string& path);

}  // namespace besselfd
