#include "besselfd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "besselfd/media.hpp"

namespace besselfd {

namespace {

// Uniform in (0,1) with an explicit bit mapping so node sets are
// reproducible across standard libraries.
double unit_double(std::mt19937& g) {
  return (g() + 0.5) * (1.0 / 4294967296.0);
}

void set_corner_normal(Node& n, double nx1, double ny1, double nx2, double ny2) {
  double sx = nx1 + nx2, sy = ny1 + ny2;
  double len = std::hypot(sx, sy);
  n.nx = sx / len;
  n.ny = sy / len;
}

int lattice_count(double side, double inv_h, const char* who) {
  if (!(inv_h > 0) || !(side > 0))
    throw std::invalid_argument(std::string(who) + ": side and inv_h must be positive");
  int m = (int)std::lround(side * inv_h);
  if (m < 1) throw std::invalid_argument(std::string(who) + ": spacing coarser than the domain");
  return m;
}

}  // namespace

std::size_t NodeSet::boundary_count() const {
  std::size_t c = 0;
  for (const auto& n : nodes)
    if (n.kind == NodeKind::boundary) ++c;
  return c;
}

NodeSet generate_square_grid(const Rect& r, double inv_h) {
  int mx = lattice_count(r.width(), inv_h, "generate_square_grid");
  int my = lattice_count(r.height(), inv_h, "generate_square_grid");
  double hx = r.width() / mx, hy = r.height() / my;

  NodeSet ns;
  ns.domain = r;
  ns.h = hx;
  ns.nodes.reserve((std::size_t)(mx + 1) * (my + 1));
  for (int j = 0; j <= my; ++j)
    for (int i = 0; i <= mx; ++i) {
      Node n;
      n.x = (i == mx) ? r.x1 : r.x0 + i * hx;
      n.y = (j == my) ? r.y1 : r.y0 + j * hy;
      bool left = i == 0, right = i == mx, bottom = j == 0, top = j == my;
      if (left || right || bottom || top) {
        n.kind = NodeKind::boundary;
        double nx = left ? -1.0 : (right ? 1.0 : 0.0);
        double ny = bottom ? -1.0 : (top ? 1.0 : 0.0);
        if (nx != 0.0 && ny != 0.0)
          set_corner_normal(n, nx, 0, 0, ny);
        else {
          n.nx = nx;
          n.ny = ny;
        }
      }
      ns.nodes.push_back(n);
    }
  return ns;
}

namespace {

// Boundary ring shared by the hex and graded generators: nodes along each
// edge, corners once, outward normals (averaged at corners).  `spacing`
// maps arc position to the desired local step.
template <class SpacingFn>
void append_boundary_ring(NodeSet& ns, const Rect& r, SpacingFn spacing) {
  auto edge_positions = [&](double ax, double ay, double bx, double by) {
    double len = std::hypot(bx - ax, by - ay);
    std::vector<double> t{0.0};
    double s = 0;
    while (true) {
      double ux = ax + (bx - ax) * (s / len), uy = ay + (by - ay) * (s / len);
      double step = spacing(ux, uy);
      s += step;
      if (s > len - 0.5 * step) break;
      t.push_back(s);
    }
    t.push_back(len);
    double scale = len / t.back();
    for (auto& v : t) v *= scale;
    return t;
  };

  struct Edge { double ax, ay, bx, by, nx, ny; };
  const Edge edges[4] = {
      {r.x0, r.y0, r.x1, r.y0, 0, -1},  // bottom
      {r.x1, r.y0, r.x1, r.y1, 1, 0},   // right
      {r.x1, r.y1, r.x0, r.y1, 0, 1},   // top
      {r.x0, r.y1, r.x0, r.y0, -1, 0},  // left
  };
  std::size_t first = ns.nodes.size();
  for (const auto& e : edges) {
    auto ts = edge_positions(e.ax, e.ay, e.bx, e.by);
    double len = std::hypot(e.bx - e.ax, e.by - e.ay);
    // skip the far corner; it is the near corner of the next edge
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
      Node n;
      n.x = e.ax + (e.bx - e.ax) * (ts[i] / len);
      n.y = e.ay + (e.by - e.ay) * (ts[i] / len);
      n.kind = NodeKind::boundary;
      n.nx = e.nx;
      n.ny = e.ny;
      ns.nodes.push_back(n);
    }
  }
  // fix up corner normals: a corner is the first node of its edge; average
  // with the previous edge's normal
  for (int e = 0; e < 4; ++e) {
    // locate corners by coordinates
    double cx = edges[e].ax, cy = edges[e].ay;
    for (std::size_t i = first; i < ns.nodes.size(); ++i) {
      if (ns.nodes[i].x == cx && ns.nodes[i].y == cy) {
        int prev = (e + 3) % 4;
        set_corner_normal(ns.nodes[i], edges[e].nx, edges[e].ny,
                          edges[prev].nx, edges[prev].ny);
        break;
      }
    }
  }
}

}  // namespace

NodeSet generate_hex_grid(const Rect& r, double inv_h) {
  int m = lattice_count(r.width(), inv_h, "generate_hex_grid");
  double h = r.width() / m;
  // fit a whole number of row pitches into the height so the first and last
  // rows land on the edges; the resulting ~0.4% stretch keeps the lattice
  // periodic instead of leaving a seam at the top
  int rows = std::max(2, (int)std::floor(r.height() / (h * std::sqrt(3.0) / 2.0)));
  double pitch = r.height() / rows;

  NodeSet ns;
  ns.domain = r;
  ns.h = h;
  double reach = 0.5 * h * (1 + 1e-9);
  for (int row = 0; row <= rows; ++row) {
    double y = r.y0 + row * pitch;
    double off = (row % 2) ? 0.5 * h : 0.0;
    for (int i = 0; i <= m; ++i) {
      double x = r.x0 + off + i * h;
      if (x > r.x1 + 1e-12 * h) break;
      Node n;
      n.x = x;
      n.y = y;
      // nodes within h/2 of an edge become boundary collocation points at
      // their own position; the lattice itself stays undisturbed, so offset
      // rows contribute a wall node (at h/2 inside) on every row
      double nx = (x - r.x0 <= reach) ? -1.0 : (r.x1 - x <= reach ? 1.0 : 0.0);
      double ny = (y - r.y0 <= reach) ? -1.0 : (r.y1 - y <= reach ? 1.0 : 0.0);
      if (nx != 0.0 || ny != 0.0) {
        n.kind = NodeKind::boundary;
        if (nx != 0.0 && ny != 0.0)
          set_corner_normal(n, nx, 0, 0, ny);
        else {
          n.nx = nx;
          n.ny = ny;
        }
      }
      ns.nodes.push_back(n);
    }
  }
  // offset end rows miss the exact corners; append any that are absent
  for (double cx : {r.x0, r.x1})
    for (double cy : {r.y0, r.y1}) {
      bool have = false;
      for (const auto& n : ns.nodes)
        if (n.x == cx && n.y == cy) have = true;
      if (have) continue;
      Node n;
      n.x = cx;
      n.y = cy;
      n.kind = NodeKind::boundary;
      double sx = (cx > 0.5 * (r.x0 + r.x1)) ? 1.0 : -1.0;
      double sy = (cy > 0.5 * (r.y0 + r.y1)) ? 1.0 : -1.0;
      set_corner_normal(n, sx, 0, 0, sy);
      ns.nodes.push_back(n);
    }
  return ns;
}

NodeSet generate_adaptive(const Rect& r, double omega, double nodes_per_wavelength,
                          const SpeedModel& speed, std::uint32_t seed) {
  if (!(omega > 0) || !(nodes_per_wavelength > 0))
    throw std::invalid_argument("generate_adaptive: omega and Ng must be positive");
  auto target_h = [&](double x, double y) {
    return 2.0 * M_PI * speed.c(x, y) / (omega * nodes_per_wavelength);
  };

  NodeSet ns;
  ns.domain = r;
  append_boundary_ring(ns, r, target_h);

  // nominal spacing: average of the target over a coarse sweep
  double hsum = 0;
  int probes = 0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      hsum += target_h(r.x0 + (i + 0.5) * r.width() / 16, r.y0 + (j + 0.5) * r.height() / 16);
      ++probes;
    }
  ns.h = hsum / probes;

  // variable-radius Bridson sampling; boundary nodes act as blockers.
  // Acceptance: dist(p,q) >= 0.85 * min(h(p), h(q)).
  const double factor = 0.85;
  double hmin = 1e300;
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j)
      hmin = std::min(hmin, target_h(r.x0 + (i + 0.5) * r.width() / 32,
                                     r.y0 + (j + 0.5) * r.height() / 32));
  double cell = factor * hmin / std::sqrt(2.0);
  int gx = std::max(1, (int)(r.width() / cell) + 1);
  int gy = std::max(1, (int)(r.height() / cell) + 1);
  std::vector<std::vector<int>> grid((std::size_t)gx * gy);
  auto bucket = [&](double x, double y) {
    int ix = std::clamp((int)((x - r.x0) / cell), 0, gx - 1);
    int iy = std::clamp((int)((y - r.y0) / cell), 0, gy - 1);
    return iy * gx + ix;
  };
  std::vector<double> radius;  // local target h per stored node
  radius.reserve(4096);
  auto insert = [&](std::size_t idx) {
    grid[bucket(ns.nodes[idx].x, ns.nodes[idx].y)].push_back((int)idx);
    radius.push_back(target_h(ns.nodes[idx].x, ns.nodes[idx].y));
  };
  for (std::size_t i = 0; i < ns.nodes.size(); ++i) insert(i);

  auto conflicts = [&](double x, double y, double hq) {
    double reach = factor * hq;
    int ix0 = std::max(0, (int)((x - reach - r.x0) / cell));
    int ix1 = std::min(gx - 1, (int)((x + reach - r.x0) / cell));
    int iy0 = std::max(0, (int)((y - reach - r.y0) / cell));
    int iy1 = std::min(gy - 1, (int)((y + reach - r.y0) / cell));
    for (int iy = iy0; iy <= iy1; ++iy)
      for (int ix = ix0; ix <= ix1; ++ix)
        for (int j : grid[(std::size_t)iy * gx + ix]) {
          double dx = ns.nodes[j].x - x, dy = ns.nodes[j].y - y;
          double lim = factor * std::min(hq, radius[j]);
          if (dx * dx + dy * dy < lim * lim) return true;
        }
    return false;
  };

  std::mt19937 rng(seed);
  std::vector<int> active;
  {  // deterministic interior seed: domain center, nudged until clear
    double cx = 0.5 * (r.x0 + r.x1), cy = 0.5 * (r.y0 + r.y1);
    for (int attempt = 0; attempt < 1000; ++attempt) {
      if (!conflicts(cx, cy, target_h(cx, cy))) {
        Node n;
        n.x = cx;
        n.y = cy;
        ns.nodes.push_back(n);
        insert(ns.nodes.size() - 1);
        active.push_back((int)ns.nodes.size() - 1);
        break;
      }
      cx = r.x0 + unit_double(rng) * r.width();
      cy = r.y0 + unit_double(rng) * r.height();
    }
  }
  while (!active.empty()) {
    std::size_t pick = rng() % active.size();
    int pi = active[pick];
    double px = ns.nodes[pi].x, py = ns.nodes[pi].y;
    double rp = factor * radius[pi];
    bool placed = false;
    for (int attempt = 0; attempt < 30; ++attempt) {
      double ang = 2.0 * M_PI * unit_double(rng);
      double rad = rp * (1.0 + unit_double(rng));
      double qx = px + rad * std::cos(ang), qy = py + rad * std::sin(ang);
      if (qx <= r.x0 || qx >= r.x1 || qy <= r.y0 || qy >= r.y1) continue;
      if (conflicts(qx, qy, target_h(qx, qy))) continue;
      Node n;
      n.x = qx;
      n.y = qy;
      ns.nodes.push_back(n);
      insert(ns.nodes.size() - 1);
      active.push_back((int)ns.nodes.size() - 1);
      placed = true;
      break;
    }
    if (!placed) {
      active[pick] = active.back();
      active.pop_back();
    }
  }
  return ns;
}

void perturb_nodes(NodeSet& ns, double amplitude, std::uint32_t seed) {
  if (amplitude < 0) throw std::invalid_argument("perturb_nodes: negative amplitude");
  std::mt19937 rng(seed);
  for (auto& n : ns.nodes) {
    if (n.kind != NodeKind::interior) continue;
    double ang = 2.0 * M_PI * unit_double(rng);
    double rad = amplitude * ns.h * std::sqrt(unit_double(rng));
    n.x += rad * std::cos(ang);
    n.y += rad * std::sin(ang);
  }
}

std::vector<Stencil> build_stencils(const NodeSet& ns, int n_interior, int n_boundary) {
  const int N = (int)ns.size();
  int need = std::max(n_interior, n_boundary);
  if (n_interior < 1 || n_boundary < 1)
    throw std::invalid_argument("build_stencils: stencil sizes must be positive");
  if (need > N)
    throw std::invalid_argument("build_stencils: stencil larger than the node set");

  double cell = ns.h > 0 ? ns.h : 1.0;
  double w = std::max(ns.domain.width(), cell), hgt = std::max(ns.domain.height(), cell);
  int gx = std::max(1, (int)(w / cell) + 1);
  int gy = std::max(1, (int)(hgt / cell) + 1);
  std::vector<std::vector<int>> grid((std::size_t)gx * gy);
  auto bx = [&](double x) { return std::clamp((int)((x - ns.domain.x0) / cell), 0, gx - 1); };
  auto by = [&](double y) { return std::clamp((int)((y - ns.domain.y0) / cell), 0, gy - 1); };
  for (int i = 0; i < N; ++i)
    grid[(std::size_t)by(ns.nodes[i].y) * gx + bx(ns.nodes[i].x)].push_back(i);

  std::vector<Stencil> out(N);
  std::vector<std::pair<double, int>> cand;
  for (int i = 0; i < N; ++i) {
    int n = ns.nodes[i].kind == NodeKind::boundary ? n_boundary : n_interior;
    int cx = bx(ns.nodes[i].x), cy = by(ns.nodes[i].y);
    cand.clear();
    int maxr = std::max(gx, gy);
    int settled_at = -1;
    for (int ring = 0; ring <= maxr + 1; ++ring) {
      // cells with Chebyshev distance == ring from (cx, cy)
      for (int iy = cy - ring; iy <= cy + ring; ++iy) {
        if (iy < 0 || iy >= gy) continue;
        for (int ix = cx - ring; ix <= cx + ring; ++ix) {
          if (ix < 0 || ix >= gx) continue;
          if (std::max(std::abs(ix - cx), std::abs(iy - cy)) != ring) continue;
          for (int j : grid[(std::size_t)iy * gx + ix]) {
            double dx = ns.nodes[j].x - ns.nodes[i].x;
            double dy = ns.nodes[j].y - ns.nodes[i].y;
            cand.emplace_back(dx * dx + dy * dy, j);
          }
        }
      }
      if (settled_at >= 0) break;  // one guard ring past satisfaction
      if ((int)cand.size() >= n) {
        std::nth_element(cand.begin(), cand.begin() + (n - 1), cand.end());
        double guarantee = (double)ring * cell;
        if (cand[n - 1].first <= guarantee * guarantee || ring >= maxr)
          settled_at = ring;
      }
    }
    std::sort(cand.begin(), cand.end());
    auto& st = out[i].members;
    st.reserve(n);
    for (int m = 0; m < n; ++m) st.push_back(cand[m].second);
    if (st[0] != i) {
      // coincident nodes could displace the center; force it up front
      auto it = std::find(st.begin(), st.end(), i);
      if (it == st.end()) st[0] = i;
      else std::rotate(st.begin(), it, it + 1);
    }
  }
  return out;
}

void save_nodes(const NodeSet& ns, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("save_nodes: cannot open " + path);
  std::fprintf(f, "# %zu %.17g\n", ns.size(), ns.h);
  for (const auto& n : ns.nodes)
    std::fprintf(f, "%.17g %.17g %d %.17g %.17g\n", n.x, n.y, (int)n.kind, n.nx, n.ny);
  std::fclose(f);
}

NodeSet load_nodes(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_nodes: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.empty() || line[0] != '#')
    throw std::runtime_error("load_nodes: missing header in " + path);
  std::istringstream hdr(line.substr(1));
  std::size_t count = 0;
  NodeSet ns;
  if (!(hdr >> count >> ns.h))
    throw std::runtime_error("load_nodes: malformed header in " + path);
  ns.nodes.reserve(count);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    Node n;
    int flag;
    if (!(row >> n.x >> n.y >> flag >> n.nx >> n.ny))
      throw std::runtime_error("load_nodes: bad row at line " + std::to_string(lineno));
    n.kind = flag ? NodeKind::boundary : NodeKind::interior;
    ns.nodes.push_back(n);
  }
  if (ns.nodes.size() != count)
    throw std::runtime_error("load_nodes: header count mismatch in " + path);
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (const auto& n : ns.nodes) {
    x0 = std::min(x0, n.x);
    y0 = std::min(y0, n.y);
    x1 = std::max(x1, n.x);
    y1 = std::max(y1, n.y);
  }
  ns.domain = {x0, y0, x1, y1};
  return ns;
}

}  // namespace besselfd
