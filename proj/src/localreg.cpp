#include "besselfd/localreg.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

#include "besselfd/specfun.hpp"

namespace besselfd {

std::vector<double> build_kernel_matrix(const std::vector<double>& xs,
                                        const std::vector<double>& ys, double k) {
  const int n = (int)xs.size();
  if ((int)ys.size() != n) throw std::invalid_argument("build_kernel_matrix: size mismatch");
  if (!(k > 0)) throw std::invalid_argument("build_kernel_matrix: k must be positive");
  std::vector<double> a((std::size_t)n * n);
  for (int i = 0; i < n; ++i) {
    a[(std::size_t)i * n + i] = 1.0;
    for (int j = i + 1; j < n; ++j) {
      double r = std::hypot(xs[i] - xs[j], ys[i] - ys[j]);
      double v = specfun::j0(k * r);
      a[(std::size_t)i * n + j] = v;
      a[(std::size_t)j * n + i] = v;
    }
  }
  return a;
}

namespace {

double sqrt_t(double x) { return std::sqrt(x); }
dd sqrt_t(dd x) { return dd_sqrt(x); }
double fabs_t(double x) { return std::fabs(x); }
dd fabs_t(dd x) { return fabs(x); }
double to_double_t(double x) { return x; }
double to_double_t(dd x) { return to_double(x); }

// Cyclic Jacobi shared by the double and double-double paths.  T needs
// +,-,*,/ with itself, fabs, sqrt and comparisons.
template <class T>
void jacobi_sweeps(std::vector<T>& a, int n) {
  const T norm = [&] {
    T s(0.0);
    for (const auto& v : a) s = s + v * v;
    return sqrt_t(s);
  }();
  const double tol_scale = sizeof(T) > sizeof(double) ? 1e-30 : 1e-14;
  const T tol = T(tol_scale) * norm;
  for (int sweep = 0; sweep < 60; ++sweep) {
    T off(0.0);
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) off = off + a[(std::size_t)p * n + q] * a[(std::size_t)p * n + q];
    off = sqrt_t(off + off);
    if (off < tol) return;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        T apq = a[(std::size_t)p * n + q];
        if (!(fabs_t(apq) > T(0.0))) continue;
        T app = a[(std::size_t)p * n + p], aqq = a[(std::size_t)q * n + q];
        // a pivot this far below the diagonal shifts the spectrum by less
        // than the working precision; rotating on it would overflow tau
        if (fabs_t(apq) <= T(tol_scale * 1e-10) * (fabs_t(app) + fabs_t(aqq))) {
          a[(std::size_t)p * n + q] = T(0.0);
          a[(std::size_t)q * n + p] = T(0.0);
          continue;
        }
        T tau = (aqq - app) / (T(2.0) * apq);
        T t;
        if (tau >= T(0.0))
          t = T(1.0) / (tau + sqrt_t(T(1.0) + tau * tau));
        else
          t = T(-1.0) / (T(0.0) - tau + sqrt_t(T(1.0) + tau * tau));
        T c = T(1.0) / sqrt_t(T(1.0) + t * t);
        T s = t * c;
        // rotate rows/cols p and q
        for (int i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          T aip = a[(std::size_t)i * n + p], aiq = a[(std::size_t)i * n + q];
          T nip = c * aip - s * aiq;
          T niq = s * aip + c * aiq;
          a[(std::size_t)i * n + p] = nip;
          a[(std::size_t)p * n + i] = nip;
          a[(std::size_t)i * n + q] = niq;
          a[(std::size_t)q * n + i] = niq;
        }
        T napp = app - t * apq;
        T naqq = aqq + t * apq;
        a[(std::size_t)p * n + p] = napp;
        a[(std::size_t)q * n + q] = naqq;
        a[(std::size_t)p * n + q] = T(0.0);
        a[(std::size_t)q * n + p] = T(0.0);
      }
  }
}

template <class T>
Spectrum spectrum_from(std::vector<T>& a, int n) {
  jacobi_sweeps(a, n);
  T lo = a[0], hi = a[0];
  for (int i = 1; i < n; ++i) {
    T d = a[(std::size_t)i * n + i];
    if (d < lo) lo = d;
    if (d > hi) hi = d;
  }
  Spectrum s;
  s.lambda_max = to_double_t(hi);
  s.lambda_min = to_double_t(lo);
  if (s.lambda_min <= 0) {
    s.lambda_min = 0;
    s.clamped = true;
  }
  return s;
}

}  // namespace

Spectrum extreme_eigenvalues(std::vector<double> a, int n) {
  if ((int)a.size() != n * n) throw std::invalid_argument("extreme_eigenvalues: shape mismatch");
  if (n < 1 || n > 200) throw std::invalid_argument("extreme_eigenvalues: n out of range");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (a[(std::size_t)i * n + j] != a[(std::size_t)j * n + i])
        throw std::invalid_argument("extreme_eigenvalues: matrix not symmetric");
  return spectrum_from(a, n);
}

Spectrum extreme_eigenvalues_hp(const std::vector<double>& xs,
                                const std::vector<double>& ys, double k) {
  const int n = (int)xs.size();
  if ((int)ys.size() != n) throw std::invalid_argument("extreme_eigenvalues_hp: size mismatch");
  if (n < 1 || n > 200) throw std::invalid_argument("extreme_eigenvalues_hp: n out of range");
  std::vector<dd> a((std::size_t)n * n);
  for (int i = 0; i < n; ++i) {
    a[(std::size_t)i * n + i] = dd(1.0);
    for (int j = i + 1; j < n; ++j) {
      double ddx = xs[i] - xs[j], ddy = ys[i] - ys[j];
      dd r2 = two_prod(ddx, ddx) + two_prod(ddy, ddy);
      dd arg = dd(k) * dd_sqrt(r2);
      dd v = specfun::j0_dd(arg);
      a[(std::size_t)i * n + j] = v;
      a[(std::size_t)j * n + i] = v;
    }
  }
  return spectrum_from(a, n);
}

double compute_beta(double lambda_max, double lambda_min, double kappa0) {
  if (!(kappa0 > 1.0)) throw std::invalid_argument("compute_beta: kappa0 must exceed 1");
  if (!(lambda_max > 0)) throw std::invalid_argument("compute_beta: lambda_max must be positive");
  double beta = (lambda_max - kappa0 * lambda_min) / (kappa0 - 1.0);
  return beta > 0 ? beta : 0.0;
}

BetaChoice select_beta(const Spectrum& s, int n, const BetaPolicy& policy) {
  BetaChoice out;
  out.lambda_max = s.lambda_max;
  double ln = s.lambda_min;
  if (ln <= 0 || ln <= 1e-18 * s.lambda_max) {
    ln = 1e-18 * s.lambda_max;
    out.guarded = true;
  }
  out.lambda_min = ln;
  switch (policy.kind) {
    case BetaPolicy::Kind::target_kappa_formula: {
      double k0 = std::pow(10.0, 7.0 + std::sqrt((double)n));
      out.kappa0 = std::clamp(k0, 1e7, 1e14);
      break;
    }
    case BetaPolicy::Kind::ratio: {
      double kj = s.lambda_max / ln;
      // the fixed condition drop still honours the kappa0 working range;
      // without the floor, well-conditioned stencils (clipped near a wall)
      // would get beta ~ lambda1 * 10^p / kappa and lose their row accuracy
      out.kappa0 = std::clamp(kj * std::pow(10.0, -policy.p), 1e7, 1e14);
      break;
    }
    case BetaPolicy::Kind::rough_media:
      out.kappa0 = std::pow(10.0, 1.0 + std::sqrt((double)n));
      break;
  }
  if (out.kappa0 <= 1.0) {  // matrix already better conditioned than the target
    out.beta = 0.0;
    return out;
  }
  out.beta = compute_beta(s.lambda_max, ln, out.kappa0);
  return out;
}

namespace {

struct Factorization {
  Eigen::LDLT<Eigen::MatrixXd> ldlt;
  Eigen::MatrixXd a;

  Factorization(const std::vector<double>& j_matrix, int n, double beta) {
    a = Eigen::Map<const Eigen::MatrixXd>(j_matrix.data(), n, n);
    a.diagonal().array() += beta;
    ldlt.compute(a);
    if (ldlt.info() != Eigen::Success) {
      int bad = 0;
      for (int i = 0; i < n; ++i)
        if (!std::isfinite(ldlt.vectorD()(i))) { bad = i; break; }
      throw std::runtime_error("solve_shifted: LDLT breakdown at pivot " +
                               std::to_string(bad));
    }
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& b, bool refine) const {
    Eigen::VectorXd x = ldlt.solve(b);
    if (!refine) return x;
    // one refinement pass; keeps the residual at roundoff up to kappa ~ 1e12
    Eigen::VectorXd r = b - a * x;
    double bn = b.lpNorm<Eigen::Infinity>();
    if (bn > 0 && r.lpNorm<Eigen::Infinity>() > 1e-13 * bn) x += ldlt.solve(r);
    return x;
  }
};

}  // namespace

std::vector<double> solve_shifted(const std::vector<double>& j_matrix, int n,
                                  double beta, const std::vector<double>& rhs,
                                  bool refine) {
  if ((int)j_matrix.size() != n * n || (int)rhs.size() != n)
    throw std::invalid_argument("solve_shifted: shape mismatch");
  Factorization f(j_matrix, n, beta);
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.data(), n);
  Eigen::VectorXd x = f.solve(b, refine);
  return std::vector<double>(x.data(), x.data() + n);
}

std::vector<double> solve_iterated(const std::vector<double>& j_matrix, int n,
                                   double beta, const std::vector<double>& rhs,
                                   int rounds, bool refine) {
  if ((int)j_matrix.size() != n * n || (int)rhs.size() != n)
    throw std::invalid_argument("solve_iterated: shape mismatch");
  if (rounds < 0) throw std::invalid_argument("solve_iterated: rounds must be >= 0");
  Factorization f(j_matrix, n, beta);
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.data(), n);
  Eigen::VectorXd x0 = f.solve(b, refine);
  Eigen::VectorXd x = x0;
  for (int m = 0; m < rounds; ++m) x = x0 + beta * f.solve(x, refine);
  return std::vector<double>(x.data(), x.data() + n);
}

}  // namespace besselfd
