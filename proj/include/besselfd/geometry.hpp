// Node layouts on rectangular domains: tensor and hex lattices, a
// variable-density Poisson-disk sampler for graded spacing, jitter for
// robustness studies, and exact k-nearest-neighbour stencils.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace besselfd {

struct Rect {
  double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

enum class NodeKind : int { interior = 0, boundary = 1 };

struct Node {
  double x = 0, y = 0;
  NodeKind kind = NodeKind::interior;
  double nx = 0, ny = 0;  // outward unit normal, boundary nodes only
};

struct NodeSet {
  std::vector<Node> nodes;
  Rect domain;
  double h = 0;  // nominal spacing (mean target spacing for graded sets)

  std::size_t size() const { return nodes.size(); }
  std::size_t boundary_count() const;
};

// Tensor-product lattice.  Spacing h = width / round(width * inv_h); the
// node count per axis is round(side * inv_h) + 1.  Edge normals are axis
// aligned; corner normals average the two meeting edges.
NodeSet generate_square_grid(const Rect& r, double inv_h);

// Hex (triangular) lattice with row offset h/2; the row pitch is
// height / floor(height / (h*sqrt(3)/2)) so the end rows lie on the edges.
// Nodes within h/2 of an edge act as boundary collocation points at their
// own position (normal toward the nearest edge, averaged at corners), which
// gives every row a wall node without disturbing the lattice.  The four
// exact corners are appended when the end rows are offset.
NodeSet generate_hex_grid(const Rect& r, double inv_h);

// Local target spacing for a velocity field: h(x) = 2 pi c(x) / (omega Ng),
// i.e. Ng nodes per local wavelength.
class SpeedModel;  // media.hpp
NodeSet generate_adaptive(const Rect& r, double omega, double nodes_per_wavelength,
                          const SpeedModel& speed, std::uint32_t seed);

// Displace interior nodes by a uniform random vector of length at most
// amplitude * h.  Boundary nodes stay put.  amplitude = 0 is the identity.
void perturb_nodes(NodeSet& ns, double amplitude, std::uint32_t seed);

struct Stencil {
  std::vector<int> members;  // members[0] is the center node
};

// Exact k-nearest-neighbour stencils, ties broken by node index.  Interior
// centers get n_interior members, boundary centers n_boundary.
std::vector<Stencil> build_stencils(const NodeSet& ns, int n_interior, int n_boundary);

// Text round-trip: header "# N h", then one node per line "x y flag nx ny"
// at 17 significant digits.
void save_nodes(const NodeSet& ns, const std::string& path);
NodeSet load_nodes(const std::string& path);

}  // namespace besselfd
