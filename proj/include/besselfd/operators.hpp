// Differential and boundary operators discretized as stencil weight rows:
// apply the operator analytically to the kernel phi_j(x) = J0(k |x - x_j|)
// at the stencil center, then solve against the (regularized) interpolation
// matrix.  The interior Helmholtz row collapses algebraically to
// -k^2 beta e1^T (J + beta I)^-1, since the kernel solves the homogeneous
// equation exactly; the row therefore needs beta > 0 to be nontrivial.
#pragma once

#include <complex>
#include <vector>

#include "besselfd/localreg.hpp"

namespace besselfd {

// Stencil coordinates gathered in stencil order; entry 0 is the center.
struct StencilGeom {
  std::vector<double> x, y;
  int n() const { return (int)x.size(); }
};

enum class OpKind {
  identity,
  partial_x,
  partial_y,
  laplacian,
  normal_deriv,
  tangential2,   // second derivative along the tangent
  mixed_nt2,     // d/dn of the second tangential derivative
};

enum class BcKind {
  impedance,  // d/dn + i k
  abc2,       // d/dn - i k - (i / 2k) d2/dtau2
  abc3,       // d/dn - i k - (3i / 4k) d2/dtau2 + (1 / 4k^2) d3/dn dtau2
};

// L phi_j evaluated at the center; direction vectors are only read by the
// normal/tangential kinds.  Radial factors switch to their Maclaurin forms
// below k r = 1e-6 (and to exact limits at r = 0).
double kernel_apply(OpKind op, double cx, double cy, double px, double py,
                    double k, double nx, double ny, double tx, double ty);

// Weight row for a primitive operator: w = (L Phi)^T (J + beta I)^-1 via
// one factorization; itmdi_rounds >= 0 switches the solve to the iterated
// diagonal-increment correction.
struct SolveOpts {
  double beta = 0;
  int itmdi_rounds = -1;  // -1: direct solve
  bool refine = true;     // false: bare factorization (conditioning studies)
};

std::vector<double> operator_weights(OpKind op, const StencilGeom& g, double k,
                                     double nx, double ny, const SolveOpts& opts);

// Interior Helmholtz row -W_lap - k^2 e1 in its closed form.  Throws
// "degenerate interior row" when beta == 0.
std::vector<double> interior_row(const std::vector<double>& j_matrix, int n,
                                 double k, double beta);

// Complex boundary row assembled from the primitive weight rows (exact
// linear combination, so linearity against the primitives is bitwise).
// The tangent is the normal rotated +90 degrees.
std::vector<std::complex<double>> boundary_row(BcKind bc, const StencilGeom& g,
                                               double k, double nx, double ny,
                                               const SolveOpts& opts);

// Source-coupling factor of an interior row: the row annihilates
// homogeneous solutions, and its response to -Lap - k^2 acting on a smooth
// field carries this scale.  Calibrated on the k-shell of the row symbol:
// gamma = -(1 / 2k) sum_j w_j r_j J1(k r_j).
double shell_coupling(const std::vector<double>& row, const StencilGeom& g, double k);

}  // namespace besselfd
