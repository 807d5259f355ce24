// Closed-form Helmholtz fields used to manufacture boundary data and to
// measure solution error: outgoing cylindrical waves from point sources,
// plane waves, and the free-space Green's function.
#pragma once

#include <array>
#include <complex>
#include <vector>

namespace besselfd {

using cplx = std::complex<double>;

class ReferenceField {
 public:
  // amplitude * sqrt(k) * H0^(1)(k |x - x0|)
  static ReferenceField hankel_source(double k, double x0, double y0, cplx amplitude);
  // single source at (2, 2), unit amplitude
  static ReferenceField test_u1(double k);
  // four sources at the far corners: (-20,-20, 1), (20,20, 2),
  // (-20,20, 0.5), (20,-20, -1)
  static ReferenceField test_u2(double k);
  // exp(i k (x cos th + y sin th))
  static ReferenceField plane_wave(double k, double theta);
  // (i/4) H0^(1)(k |x - x0|), the outgoing free-space response
  static ReferenceField green(double k, double x0, double y0);

  cplx value(double x, double y) const;
  std::array<cplx, 2> gradient(double x, double y) const;
  // g = grad(u) . n + i k u -- impedance data on a wall with outward normal n
  cplx impedance_data(double x, double y, double nx, double ny) const;

  double k() const { return k_; }

 private:
  struct Source {
    double x, y;
    cplx amp;  // includes any sqrt(k) or i/4 prefactor
  };
  std::vector<Source> sources_;
  double k_ = 0;
  bool plane_ = false;
  double theta_ = 0;
};

}  // namespace besselfd
