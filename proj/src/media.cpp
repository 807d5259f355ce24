#include "besselfd/media.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace besselfd {

double Raster::sample(double x, double y) const {
  if (nx < 2 || ny < 2 || (int)v.size() != nx * ny)
    throw std::runtime_error("Raster::sample: malformed raster");
  double fx = (x - x0) / dx, fy = (y - y0) / dy;
  fx = std::clamp(fx, 0.0, (double)(nx - 1));
  fy = std::clamp(fy, 0.0, (double)(ny - 1));
  int ix = std::min((int)fx, nx - 2), iy = std::min((int)fy, ny - 2);
  double tx = fx - ix, ty = fy - iy;
  double a = v[(std::size_t)iy * nx + ix], b = v[(std::size_t)iy * nx + ix + 1];
  double c = v[(std::size_t)(iy + 1) * nx + ix], d = v[(std::size_t)(iy + 1) * nx + ix + 1];
  return (1 - ty) * ((1 - tx) * a + tx * b) + ty * ((1 - tx) * c + tx * d);
}

void save_raster(const Raster& r, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("save_raster: cannot open " + path);
  std::fprintf(f, "%d %d %.17g %.17g %.17g %.17g\n", r.nx, r.ny, r.x0, r.y0, r.dx, r.dy);
  for (int iy = 0; iy < r.ny; ++iy) {
    for (int ix = 0; ix < r.nx; ++ix)
      std::fprintf(f, "%.17g%c", r.v[(std::size_t)iy * r.nx + ix], ix + 1 == r.nx ? '\n' : ' ');
  }
  std::fclose(f);
}

Raster load_raster(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_raster: cannot open " + path);
  Raster r;
  if (!(in >> r.nx >> r.ny >> r.x0 >> r.y0 >> r.dx >> r.dy))
    throw std::runtime_error("load_raster: malformed header in " + path);
  if (r.nx < 2 || r.ny < 2 || !(r.dx > 0) || !(r.dy > 0))
    throw std::runtime_error("load_raster: invalid grid in " + path);
  r.v.resize((std::size_t)r.nx * r.ny);
  for (auto& val : r.v)
    if (!(in >> val)) throw std::runtime_error("load_raster: short value block in " + path);
  return r;
}

Raster synthetic_layer_raster(const Rect& rect, int nx, int ny, std::uint32_t seed) {
  if (nx < 8 || ny < 8) throw std::invalid_argument("synthetic_layer_raster: grid too small");
  std::mt19937 rng(seed);
  auto unit = [&rng]() { return (rng() + 0.5) * (1.0 / 4294967296.0); };

  // a handful of horizontal layers with random speeds, mildly undulating
  // interfaces, then a separable box smoothing pass
  const int layers = 6;
  std::vector<double> speed(layers), depth(layers + 1);
  for (int l = 0; l < layers; ++l) speed[l] = 1.5 + 3.0 * unit();
  depth[0] = 0;
  for (int l = 1; l < layers; ++l) depth[l] = depth[l - 1] + 0.5 + unit();
  depth[layers] = depth[layers - 1] + 1;
  for (int l = 1; l <= layers; ++l) depth[l] /= depth[layers];  // normalize to [0,1]
  std::vector<double> wob_amp(layers), wob_ph(layers);
  for (int l = 0; l < layers; ++l) {
    wob_amp[l] = 0.04 * unit();
    wob_ph[l] = 2.0 * M_PI * unit();
  }

  Raster r;
  r.nx = nx;
  r.ny = ny;
  r.x0 = rect.x0;
  r.y0 = rect.y0;
  r.dx = rect.width() / (nx - 1);
  r.dy = rect.height() / (ny - 1);
  r.v.resize((std::size_t)nx * ny);
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      double u = (double)ix / (nx - 1);      // 0..1 across
      double w = 1.0 - (double)iy / (ny - 1);  // depth measured downward
      double val = speed[layers - 1];
      for (int l = 0; l < layers; ++l) {
        double lower = depth[l + 1] + wob_amp[l] * std::sin(2.0 * M_PI * 2.0 * u + wob_ph[l]);
        if (w <= lower) { val = speed[l]; break; }
      }
      r.v[(std::size_t)iy * nx + ix] = val;
    }
  // two box-blur passes per axis soften the discontinuities
  auto blur = [&](bool along_x) {
    std::vector<double> tmp = r.v;
    int span = 2;
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix) {
        double s = 0;
        int cnt = 0;
        for (int o = -span; o <= span; ++o) {
          int jx = ix + (along_x ? o : 0), jy = iy + (along_x ? 0 : o);
          if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
          s += tmp[(std::size_t)jy * nx + jx];
          ++cnt;
        }
        r.v[(std::size_t)iy * nx + ix] = s / cnt;
      }
  };
  blur(true);
  blur(false);
  blur(true);
  blur(false);
  return r;
}

SpeedModel SpeedModel::constant(double c0) {
  if (!(c0 > 0)) throw std::invalid_argument("SpeedModel: speed must be positive");
  SpeedModel m;
  m.kind_ = Kind::constant;
  m.c0_ = c0;
  return m;
}

SpeedModel SpeedModel::gaussian_lens() {
  SpeedModel m;
  m.kind_ = Kind::gaussian_lens;
  return m;
}

SpeedModel SpeedModel::sinusoidal() {
  SpeedModel m;
  m.kind_ = Kind::sinusoidal;
  return m;
}

SpeedModel SpeedModel::from_raster(Raster r) {
  if (r.nx < 2 || r.ny < 2 || (int)r.v.size() != r.nx * r.ny)
    throw std::invalid_argument("SpeedModel::from_raster: malformed raster");
  for (double val : r.v)
    if (!(val > 0)) throw std::invalid_argument("SpeedModel::from_raster: non-positive speed");
  SpeedModel m;
  m.kind_ = Kind::raster;
  m.raster_ = std::move(r);
  return m;
}

double SpeedModel::c(double x, double y) const {
  switch (kind_) {
    case Kind::constant:
      return c0_;
    case Kind::gaussian_lens: {
      double ddx = x + 0.125, ddy = y - 0.1;
      return 3.0 - 2.5 * std::exp(-(ddx * ddx + ddy * ddy) / (0.8 * 0.8));
    }
    case Kind::sinusoidal:
      return 1.0 + 0.5 * std::sin(2.0 * M_PI * x);
    case Kind::raster:
      return raster_.sample(x, y);
  }
  return c0_;
}

}  // namespace besselfd
