// Local kernel systems: the oscillatory interpolation matrix on a stencil,
// its spectrum, and the diagonal-increment regularization that keeps the
// weight solves at a chosen condition number.  The increment admits an
// iterated correction (one factorization, M cheap re-solves) whose error
// contracts geometrically in beta / (lambda_min + beta).
#pragma once

#include <cstdint>
#include <vector>

#include "besselfd/dd.hpp"

namespace besselfd {

// phi(r) = J0(k r) evaluated over all stencil pairs; symmetric, unit
// diagonal.  Row-major n x n.
std::vector<double> build_kernel_matrix(const std::vector<double>& xs,
                                        const std::vector<double>& ys, double k);

struct Spectrum {
  double lambda_max = 0;
  double lambda_min = 0;
  bool clamped = false;  // true when the raw estimate came out <= 0
};

// Cyclic Jacobi on a symmetric matrix (row-major, destroyed).  Off-diagonal
// Frobenius mass is driven below 1e-14 of the matrix norm.  n <= 200.
Spectrum extreme_eigenvalues(std::vector<double> a, int n);

// Same spectrum, but the matrix entries and the sweep are carried in
// double-double, resolving lambda_min far below the double rounding floor
// of the entries.  Intended for conditioning reports on small stencils.
Spectrum extreme_eigenvalues_hp(const std::vector<double>& xs,
                                const std::vector<double>& ys, double k);

// beta = (l1 - kappa0 ln) / (kappa0 - 1), clamped at zero.  kappa0 must
// exceed 1.  Guarantees (l1 + beta) / (ln + beta) <= kappa0 (to roundoff).
double compute_beta(double lambda_max, double lambda_min, double kappa0);

struct BetaPolicy {
  enum class Kind {
    target_kappa_formula,  // kappa0 = 10^(7 + sqrt(n)), clipped to [1e7, 1e14]
    ratio,                 // kappa0 = kappa(J) * 10^-p, clipped to [1e7, 1e14]
    rough_media,           // kappa0 = 10^(1 + sqrt(n))
  };
  Kind kind = Kind::ratio;
  double p = 6.0;  // ratio drop in decades (ratio policy only)
};

struct BetaChoice {
  double beta = 0;
  double kappa0 = 0;
  double lambda_max = 0;
  double lambda_min = 0;  // after the floor guard
  bool guarded = false;   // lambda_min was below the resolvable floor
};

// Applies the floor guard (lambda_min <= 0 or < 1e-18 lambda_max is
// replaced by 1e-18 lambda_max) and the policy's kappa0 formula.
BetaChoice select_beta(const Spectrum& s, int n, const BetaPolicy& policy);

// Factor J + beta I (symmetric indefinite-capable LDLT) and solve.  One
// refinement pass keeps the residual at roundoff for condition numbers up
// to ~1e12; pass refine = false for the bare factorization (the conditioning
// studies report the unrefined rounding behaviour).  Throws on factorization
// breakdown.
std::vector<double> solve_shifted(const std::vector<double>& j_matrix, int n,
                                  double beta, const std::vector<double>& rhs,
                                  bool refine = true);

// Iterated correction: x_0 = (J+bI)^-1 u, x_m = x_0 + b (J+bI)^-1 x_{m-1}.
// rounds = 0 reproduces solve_shifted exactly (same factorization path).
std::vector<double> solve_iterated(const std::vector<double>& j_matrix, int n,
                                   double beta, const std::vector<double>& rhs,
                                   int rounds, bool refine = true);

}  // namespace besselfd
