#include "besselfd/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "besselfd/specfun.hpp"

namespace besselfd {

ReferenceField ReferenceField::hankel_source(double k, double x0, double y0,
                                             cplx amplitude) {
  if (!(k > 0)) throw std::invalid_argument("ReferenceField: k must be positive");
  ReferenceField f;
  f.k_ = k;
  f.sources_.push_back({x0, y0, amplitude * std::sqrt(k)});
  return f;
}

ReferenceField ReferenceField::test_u1(double k) {
  return hankel_source(k, 2.0, 2.0, 1.0);
}

ReferenceField ReferenceField::test_u2(double k) {
  if (!(k > 0)) throw std::invalid_argument("ReferenceField: k must be positive");
  ReferenceField f;
  f.k_ = k;
  double sk = std::sqrt(k);
  f.sources_.push_back({-20.0, -20.0, sk * 1.0});
  f.sources_.push_back({20.0, 20.0, sk * 2.0});
  f.sources_.push_back({-20.0, 20.0, sk * 0.5});
  f.sources_.push_back({20.0, -20.0, sk * -1.0});
  return f;
}

ReferenceField ReferenceField::plane_wave(double k, double theta) {
  if (!(k > 0)) throw std::invalid_argument("ReferenceField: k must be positive");
  ReferenceField f;
  f.k_ = k;
  f.plane_ = true;
  f.theta_ = theta;
  return f;
}

ReferenceField ReferenceField::green(double k, double x0, double y0) {
  if (!(k > 0)) throw std::invalid_argument("ReferenceField: k must be positive");
  ReferenceField f;
  f.k_ = k;
  f.sources_.push_back({x0, y0, cplx(0.0, 0.25)});
  return f;
}

cplx ReferenceField::value(double x, double y) const {
  if (plane_) {
    double ph = k_ * (x * std::cos(theta_) + y * std::sin(theta_));
    return {std::cos(ph), std::sin(ph)};
  }
  cplx v = 0;
  for (const auto& s : sources_) {
    double r = std::hypot(x - s.x, y - s.y);
    if (r == 0.0) throw std::domain_error("ReferenceField: evaluation at a source point");
    v += s.amp * specfun::hankel1_0(k_ * r);
  }
  return v;
}

std::array<cplx, 2> ReferenceField::gradient(double x, double y) const {
  if (plane_) {
    cplx u = value(x, y);
    cplx ik(0.0, k_);
    return {ik * std::cos(theta_) * u, ik * std::sin(theta_) * u};
  }
  std::array<cplx, 2> g{cplx(0), cplx(0)};
  for (const auto& s : sources_) {
    double dx = x - s.x, dy = y - s.y;
    double r = std::hypot(dx, dy);
    if (r == 0.0) throw std::domain_error("ReferenceField: evaluation at a source point");
    // d/dr H0 = -H1
    cplx h1(specfun::j1(k_ * r), specfun::y1(k_ * r));
    cplx radial = -s.amp * k_ * h1 / r;
    g[0] += radial * dx;
    g[1] += radial * dy;
  }
  return g;
}

cplx ReferenceField::impedance_data(double x, double y, double nx, double ny) const {
  auto g = gradient(x, y);
  return g[0] * nx + g[1] * ny + cplx(0.0, k_) * value(x, y);
}

}  // namespace besselfd
