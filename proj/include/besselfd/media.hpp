// Wave-speed fields c(x, y).  Built-in analytic profiles used by the
// experiment drivers plus a raster form (regular grid, bilinear sampling)
// for externally supplied velocity models.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "besselfd/geometry.hpp"

namespace besselfd {

struct Raster {
  int nx = 0, ny = 0;
  double x0 = 0, y0 = 0, dx = 1, dy = 1;
  std::vector<double> v;  // row per y line, x fastest: v[iy * nx + ix]

  double sample(double x, double y) const;  // bilinear, clamped at the rim
};

// File form: one header line "nx ny x0 y0 dx dy", then nx*ny values in
// storage order, whitespace separated.
void save_raster(const Raster& r, const std::string& path);
Raster load_raster(const std::string& path);

// Smoothed random velocity layers on the given rectangle; a stand-in for
// survey-style velocity models when exercising the raster path.
Raster synthetic_layer_raster(const Rect& r, int nx, int ny, std::uint32_t seed);

class SpeedModel {
 public:
  enum class Kind { constant, gaussian_lens, sinusoidal, raster };

  static SpeedModel constant(double c0 = 1.0);
  // 3 - 2.5 exp(-((x+0.125)^2 + (y-0.1)^2) / 0.8^2): a slow lens off-center
  static SpeedModel gaussian_lens();
  // 1 + 0.5 sin(2 pi x): smooth lateral variation
  static SpeedModel sinusoidal();
  static SpeedModel from_raster(Raster r);

  double c(double x, double y) const;
  Kind kind() const { return kind_; }
  bool uniform() const { return kind_ == Kind::constant; }
  double constant_value() const { return c0_; }

 private:
  Kind kind_ = Kind::constant;
  double c0_ = 1.0;
  Raster raster_;
};

}  // namespace besselfd
