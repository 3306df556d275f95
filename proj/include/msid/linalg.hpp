#pragma once

#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace msid {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace linalg {

/// Closed-loop radii within this distance of 1 are treated as lying on the unit circle.
inline constexpr double kUnitCircleTolerance = 1e-9;

/// Reciprocal condition numbers below this are treated as singular.
inline constexpr double kSingularRcond = 1e-13;

[[nodiscard]] double max_abs(const Matrix& m);

/// Throws ErrorKind::dimension if any entry is NaN or infinite.
void require_finite(const Matrix& m, std::string_view what);

void require_square(const Matrix& m, std::string_view what);

/// Symmetric within `rel_tol` relative to the largest absolute entry.
[[nodiscard]] bool is_symmetric(const Matrix& m, double rel_tol = 1e-10);

/// Smallest eigenvalue >= -rel_tol * trace (rounding tolerance for PSD checks).
[[nodiscard]] bool is_psd(const Matrix& m, double rel_tol = 1e-10);

/// Symmetric and Cholesky-factorizable with reciprocal condition above kSingularRcond.
[[nodiscard]] bool is_pd(const Matrix& m);

[[nodiscard]] Matrix symmetrized(const Matrix& m);

/// Inverse of a symmetric positive-definite matrix via LLT.
/// Throws ErrorKind::singularity when the factorization fails or is ill-conditioned.
[[nodiscard]] Matrix spd_inverse(const Matrix& m, std::string_view what);

/// Largest eigenvalue modulus, from a dense eigensolver.
[[nodiscard]] double spectral_radius(const Matrix& m);

/// Solves Omega = A Omega A^T + Q by the doubling iteration
///   Omega <- Omega + A_k Omega A_k^T,  A_{k+1} = A_k^2,
/// stopping once max|A_k| <= 1e-14 (at most 200 doublings).
/// Requires spectral_radius(a) < 1 and q symmetric PSD.
[[nodiscard]] Matrix solve_dlyap(const Matrix& a, const Matrix& q);

enum class DareMethod {
  doubling,     ///< structured doubling on the cross-term-free form
  fixed_point,  ///< Riccati difference recursion from P0 = Xi (reference)
};

enum class StabilityPolicy {
  strict,          ///< closed loop radius must be < 1 - kUnitCircleTolerance
  allow_marginal,  ///< also accept radius within kUnitCircleTolerance of 1
};

struct DareOptions {
  DareMethod method = DareMethod::doubling;
  StabilityPolicy stability = StabilityPolicy::strict;
  double tolerance = 1e-12;
  long max_iterations = 0;  ///< 0 selects the method default (64 doublings / 1e6 steps)
};

/// Post-solve health of one DARE, kept so callers can audit every solve.
struct DareReport {
  std::string stage;
  long iterations = 0;
  double residual = 0.0;             ///< max|P - Ricc(P)|
  double residual_bound = 0.0;       ///< 1e-9 * (1 + max|P|)
  double closed_loop_radius = 0.0;   ///< spectral radius of A - K C
  bool marginal = false;             ///< radius within kUnitCircleTolerance of 1

  [[nodiscard]] bool residual_ok() const { return residual <= residual_bound; }
};

struct DareSolution {
  Matrix p;    ///< state error variance
  Matrix k;    ///< Kalman gain (A P C^T + Ups) Phi^-1
  Matrix phi;  ///< innovation covariance C P C^T + Psi
  DareReport report;
};

/// Stabilizing (or, under allow_marginal, maximal) solution of
///   P = A P A^T + Xi - (A P C^T + Ups)(C P C^T + Psi)^-1 (C P A^T + Ups^T).
[[nodiscard]] DareSolution solve_dare(const Matrix& a, const Matrix& c,
                                      const Matrix& xi, const Matrix& psi,
                                      const Matrix& ups,
                                      const DareOptions& options = {});

/// max|P - RHS(P)| for the DARE above.
[[nodiscard]] double dare_residual(const Matrix& p, const Matrix& a,
                                   const Matrix& c, const Matrix& xi,
                                   const Matrix& psi, const Matrix& ups);

}  // namespace linalg
}  // namespace msid
