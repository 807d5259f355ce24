// Python surface: special functions, node generation, local kernel systems,
// and a compact reference solve for smoke checks.
#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "besselfd/analytic.hpp"
#include "besselfd/harness.hpp"
#include "besselfd/specfun.hpp"

namespace py = pybind11;
using namespace besselfd;

namespace {

OpKind op_from_name(const std::string& name) {
  if (name == "id") return OpKind::identity;
  if (name == "dx") return OpKind::partial_x;
  if (name == "dy") return OpKind::partial_y;
  if (name == "lap") return OpKind::laplacian;
  throw std::invalid_argument("unknown operator '" + name +
                              "' (expected id, dx, dy, or lap)");
}

py::dict solve_reference(double k_over_2pi, double inv_h, int n_interior,
                         int n_boundary, double ratio_p) {
  double k = 2 * M_PI * k_over_2pi;
  Rect box{0, 0, 1, 1};
  NodeSet ns = generate_square_grid(box, inv_h);
  std::vector<Stencil> st = build_stencils(ns, n_interior, n_boundary);
  ReferenceField u1 = ReferenceField::test_u1(k);

  ProblemSpec prob;
  prob.omega = k;
  prob.bc = BcKind::impedance;
  prob.boundary_g = [&u1](double x, double y, double nx, double ny) {
    return u1.impedance_data(x, y, nx, ny);
  };
  prob.policy.kind = BetaPolicy::Kind::ratio;
  prob.policy.p = ratio_p;

  SparseSystem sys = assemble(ns, st, prob);
  double residual = 0;
  std::vector<cplx> u = solve_sparse(sys, &residual);

  double num = 0, den = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    cplx v = u1.value(ns.nodes[i].x, ns.nodes[i].y);
    num = std::max(num, std::abs(u[i] - v));
    den = std::max(den, std::abs(v));
  }

  py::dict out;
  out["n_nodes"] = (int)ns.size();
  out["err"] = num / den;
  out["residual"] = residual;
  out["beta_mean"] = sys.beta_mean;
  return out;
}

}  // namespace

PYBIND11_MODULE(_besselfd, m) {
  m.doc() = "meshless Helmholtz solver with oscillatory kernels";

  m.def("j0", &besselfd::j0, py::arg("x"), "Bessel function of the first kind, order 0");
  m.def("j1", &besselfd::j1, py::arg("x"), "Bessel function of the first kind, order 1");
  m.def("y0", &besselfd::y0, py::arg("x"), "Bessel function of the second kind, order 0");
  m.def("y1", &besselfd::y1, py::arg("x"), "Bessel function of the second kind, order 1");
  m.def("hankel1_0", &besselfd::hankel1_0, py::arg("x"),
        "outgoing Hankel function H0^(1) = J0 + i Y0");

  py::class_<NodeSet>(m, "NodeSet")
      .def_readonly("h", &NodeSet::h)
      .def("__len__", &NodeSet::size)
      .def("boundary_count", &NodeSet::boundary_count)
      .def("xy",
           [](const NodeSet& ns) {
             std::vector<std::pair<double, double>> out;
             out.reserve(ns.size());
             for (const Node& nd : ns.nodes) out.emplace_back(nd.x, nd.y);
             return out;
           })
      .def("kinds", [](const NodeSet& ns) {
        std::vector<int> out;
        out.reserve(ns.size());
        for (const Node& nd : ns.nodes) out.push_back((int)nd.kind);
        return out;
      });

  m.def(
      "square_grid",
      [](double x0, double y0, double x1, double y1, double inv_h) {
        return generate_square_grid(Rect{x0, y0, x1, y1}, inv_h);
      },
      py::arg("x0"), py::arg("y0"), py::arg("x1"), py::arg("y1"), py::arg("inv_h"));
  m.def(
      "hex_grid",
      [](double x0, double y0, double x1, double y1, double inv_h) {
        return generate_hex_grid(Rect{x0, y0, x1, y1}, inv_h);
      },
      py::arg("x0"), py::arg("y0"), py::arg("x1"), py::arg("y1"), py::arg("inv_h"));

  m.def(
      "stencils",
      [](const NodeSet& ns, int n_interior, int n_boundary) {
        std::vector<std::vector<int>> out;
        for (const Stencil& s : build_stencils(ns, n_interior, n_boundary))
          out.push_back(s.members);
        return out;
      },
      py::arg("nodes"), py::arg("n_interior"), py::arg("n_boundary"),
      "k-nearest stencils; entry 0 of each row is the center node");

  m.def(
      "kernel_spectrum",
      [](const std::vector<double>& xs, const std::vector<double>& ys, double k) {
        Spectrum s = extreme_eigenvalues(build_kernel_matrix(xs, ys, k), (int)xs.size());
        return py::make_tuple(s.lambda_max, s.lambda_min);
      },
      py::arg("xs"), py::arg("ys"), py::arg("k"),
      "(lambda_max, lambda_min) of the local interpolation matrix");

  m.def(
      "derivative_weights",
      [](const std::string& op, const std::vector<double>& xs,
         const std::vector<double>& ys, double k, double beta, int itmdi_rounds) {
        StencilGeom g{xs, ys};
        SolveOpts opts;
        opts.beta = beta;
        opts.itmdi_rounds = itmdi_rounds;
        return operator_weights(op_from_name(op), g, k, 0, 0, opts);
      },
      py::arg("op"), py::arg("xs"), py::arg("ys"), py::arg("k"), py::arg("beta") = 0.0,
      py::arg("itmdi_rounds") = -1,
      "weight row of a derivative operator on an explicit stencil");

  m.def("solve_reference", &solve_reference, py::arg("k_over_2pi") = 2.0,
        py::arg("inv_h") = 16.0, py::arg("n_interior") = 13, py::arg("n_boundary") = 15,
        py::arg("ratio_p") = 6.0,
        "solve an impedance problem with manufactured data and report the error");
}
