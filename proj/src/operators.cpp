#include "besselfd/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "besselfd/specfun.hpp"

namespace besselfd {

namespace {

// Radial factors of the kernel derivatives.  z = k r.
//   g1 = f'(r)/r, f'' = d2f/dr2,
//   A = f''' - 3 f''/r + 3 f'/r^2   (pure third-order radial part)
//   B = f''/r - f'/r^2              (trace part of the third derivative)
// Below z = 1e-6 the direct forms cancel catastrophically, so Maclaurin
// expansions (three terms, error O(z^6)) take over.
struct RadialFactors {
  double g1, fpp, a3, b3;
};

RadialFactors radial_factors(double r, double k) {
  double z = k * r;
  RadialFactors f;
  if (z < 1e-6) {
    double z2 = z * z, z4 = z2 * z2;
    f.g1 = -k * k * (0.5 - z2 / 16.0 + z4 / 384.0);
    f.fpp = -k * k * (0.5 - 3.0 * z2 / 16.0 + 5.0 * z4 / 384.0);
    f.b3 = k * k * k * k * r * (0.125 - z2 / 96.0 + z4 / 3072.0);
    f.a3 = -std::pow(k, 6) * r * r * r / 48.0 * (1.0 - z2 / 16.0);
    return f;
  }
  double j0v = specfun::j0(z), j1v = specfun::j1(z);
  double fp = -k * j1v;
  f.g1 = fp / r;
  f.fpp = -k * k * j0v + k * j1v / r;
  double fppp = k * k * k * j1v + k * k * j0v / r - 2.0 * k * j1v / r / r;
  f.b3 = f.fpp / r - fp / (r * r);
  f.a3 = fppp - 3.0 * f.fpp / r + 3.0 * fp / (r * r);
  return f;
}

}  // namespace

double kernel_apply(OpKind op, double cx, double cy, double px, double py,
                    double k, double nx, double ny, double tx, double ty) {
  if (!(k > 0)) throw std::invalid_argument("kernel_apply: k must be positive");
  double dx = cx - px, dy = cy - py;  // gradient direction: center minus node
  double r = std::hypot(dx, dy);
  double z = k * r;

  switch (op) {
    case OpKind::identity:
      return specfun::j0(z);
    case OpKind::laplacian:
      return -k * k * specfun::j0(z);
    case OpKind::partial_x:
      return radial_factors(r, k).g1 * dx;
    case OpKind::partial_y:
      return radial_factors(r, k).g1 * dy;
    case OpKind::normal_deriv:
      return radial_factors(r, k).g1 * (dx * nx + dy * ny);
    case OpKind::tangential2: {
      if (r == 0.0) return -0.5 * k * k;
      RadialFactors f = radial_factors(r, k);
      double ct = (dx * tx + dy * ty) / r;
      return f.fpp * ct * ct + f.g1 * (1.0 - ct * ct);
    }
    case OpKind::mixed_nt2: {
      if (r == 0.0) return 0.0;
      RadialFactors f = radial_factors(r, k);
      double cn = (dx * nx + dy * ny) / r;
      double ct = (dx * tx + dy * ty) / r;
      return (f.a3 * ct * ct + f.b3) * cn;
    }
  }
  throw std::invalid_argument("kernel_apply: unknown operator");
}

std::vector<double> operator_weights(OpKind op, const StencilGeom& g, double k,
                                     double nx, double ny, const SolveOpts& opts) {
  const int n = g.n();
  if (n < 1 || (int)g.y.size() != n)
    throw std::invalid_argument("operator_weights: malformed stencil");
  double tx = -ny, ty = nx;
  std::vector<double> lphi(n);
  for (int j = 0; j < n; ++j)
    lphi[j] = kernel_apply(op, g.x[0], g.y[0], g.x[j], g.y[j], k, nx, ny, tx, ty);
  std::vector<double> jm = build_kernel_matrix(g.x, g.y, k);
  if (opts.itmdi_rounds >= 0)
    return solve_iterated(jm, n, opts.beta, lphi, opts.itmdi_rounds, opts.refine);
  return solve_shifted(jm, n, opts.beta, lphi, opts.refine);
}

std::vector<double> interior_row(const std::vector<double>& j_matrix, int n,
                                 double k, double beta) {
  if (!(beta > 0)) throw std::runtime_error("interior_row: degenerate interior row (beta = 0)");
  std::vector<double> e1(n, 0.0);
  e1[0] = 1.0;
  std::vector<double> w = solve_shifted(j_matrix, n, beta, e1);
  double s = -k * k * beta;
  for (auto& v : w) v *= s;
  return w;
}

std::vector<std::complex<double>> boundary_row(BcKind bc, const StencilGeom& g,
                                               double k, double nx, double ny,
                                               const SolveOpts& opts) {
  const int n = g.n();
  if (n < 1 || (int)g.y.size() != n)
    throw std::invalid_argument("boundary_row: malformed stencil");
  double tx = -ny, ty = nx;
  std::vector<double> jm = build_kernel_matrix(g.x, g.y, k);
  auto row_of = [&](OpKind op) {
    std::vector<double> lphi(n);
    for (int j = 0; j < n; ++j)
      lphi[j] = kernel_apply(op, g.x[0], g.y[0], g.x[j], g.y[j], k, nx, ny, tx, ty);
    if (opts.itmdi_rounds >= 0)
      return solve_iterated(jm, n, opts.beta, lphi, opts.itmdi_rounds, opts.refine);
    return solve_shifted(jm, n, opts.beta, lphi, opts.refine);
  };

  std::vector<double> w_dn = row_of(OpKind::normal_deriv);
  std::vector<double> w_id = row_of(OpKind::identity);
  std::vector<std::complex<double>> row(n);
  const std::complex<double> I(0.0, 1.0);
  switch (bc) {
    case BcKind::impedance:
      for (int j = 0; j < n; ++j) row[j] = w_dn[j] + I * k * w_id[j];
      break;
    case BcKind::abc2: {
      std::vector<double> w_t2 = row_of(OpKind::tangential2);
      for (int j = 0; j < n; ++j)
        row[j] = w_dn[j] - I * k * w_id[j] - I / (2.0 * k) * w_t2[j];
      break;
    }
    case BcKind::abc3: {
      std::vector<double> w_t2 = row_of(OpKind::tangential2);
      std::vector<double> w_m3 = row_of(OpKind::mixed_nt2);
      for (int j = 0; j < n; ++j)
        row[j] = w_dn[j] - I * k * w_id[j] - 3.0 * I / (4.0 * k) * w_t2[j] +
                 1.0 / (4.0 * k * k) * w_m3[j];
      break;
    }
  }
  return row;
}

double shell_coupling(const std::vector<double>& row, const StencilGeom& g, double k) {
  const int n = g.n();
  if ((int)row.size() != n) throw std::invalid_argument("shell_coupling: size mismatch");
  double s = 0;
  for (int j = 0; j < n; ++j) {
    double r = std::hypot(g.x[j] - g.x[0], g.y[j] - g.y[0]);
    s += row[j] * r * specfun::j1(k * r);
  }
  return -s / (2.0 * k);
}

}  // namespace besselfd
