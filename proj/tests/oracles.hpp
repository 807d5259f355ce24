// Reference implementations used only by the test suite.  Everything here is
// deliberately independent of the library under test: quad-precision Bessel
// series, a plain Gaussian-elimination solver, finite-difference derivative
// probes, and a constructor for symmetric matrices with a prescribed spectrum.
// Keep this file free of includes from include/ -- the point is to have a
// second opinion, not a mirror.
#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

// Quad-precision Bessel values, rounded to double on return.
// Maclaurin / log series below x=30, Hankel-type asymptotic expansion above,
// all accumulated in __float128 with Neumaier compensation.  Absolute error
// is far below 1e-20 on [0, 1e4]; treat the returned double as exact.
double j0(double x);
double j1(double x);
double y0(double x);  // requires x > 0
double y1(double x);  // requires x > 0

// Dense complex linear algebra via textbook LU with partial pivoting.
// Throws std::runtime_error on a (numerically) singular pivot.
using cplx = std::complex<double>;
using cmat = std::vector<std::vector<cplx>>;  // row-major, square

std::vector<cplx> lu_solve(cmat a, std::vector<cplx> b);
cmat lu_inverse(const cmat& a);

// Real symmetric matrix with prescribed eigenvalues: A = Q diag(lam) Q^T,
// Q from modified Gram-Schmidt on a seeded Gaussian matrix.  Exact spectrum
// up to roundoff of the similarity transform.
std::vector<std::vector<double>> matrix_with_spectrum(
    const std::vector<double>& lam, unsigned seed);

// Central finite differences on a scalar field f(x, y).  `scale` sets the
// step: h = 0.01 / scale, so pass the wavenumber when probing oscillatory
// fields.  Fourth-order stencils for first/second derivatives; the mixed
// third derivative d/dn (d2/dtau2) nests second-order stencils.
struct fd_probe {
  std::function<cplx(double, double)> f;
  double scale = 1.0;

  cplx dx(double x, double y) const;
  cplx dy(double x, double y) const;
  cplx laplacian(double x, double y) const;
  // directional: first derivative along unit vector (ux, uy)
  cplx dir1(double x, double y, double ux, double uy) const;
  // second derivative along unit vector
  cplx dir2(double x, double y, double ux, double uy) const;
  // d/dn of the second tangential derivative
  cplx dn_dtau2(double x, double y, double nx, double ny,
                double tx, double ty) const;
};

}  // namespace oracle
