#include "msid/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "msid/error.hpp"

namespace msid::linalg {

namespace {

constexpr long kMaxDoublings = 64;
constexpr long kMaxFixedPointSteps = 1'000'000;
constexpr int kMaxLyapunovDoublings = 200;
constexpr double kLyapunovPowerFloor = 1e-14;

std::string shape(const Matrix& m) {
  return fmt::format("{}x{}", m.rows(), m.cols());
}

void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols,
                   std::string_view what) {
  if (m.rows() != rows || m.cols() != cols) {
    fail(ErrorKind::dimension,
         fmt::format("{}: expected {}x{}, got {}", what, rows, cols, shape(m)));
  }
}

void require_covariance(const Matrix& m, std::string_view what) {
  if (!is_symmetric(m)) {
    fail(ErrorKind::covariance, fmt::format("{} is not symmetric", what));
  }
  if (!is_psd(m)) {
    fail(ErrorKind::covariance,
         fmt::format("{} is not positive semidefinite", what));
  }
}

// Shared tail of both DARE methods: gain, innovation covariance and health.
DareSolution finish_dare(Matrix p, const Matrix& a, const Matrix& c,
                         const Matrix& xi, const Matrix& psi, const Matrix& ups,
                         long iterations, const DareOptions& options) {
  DareSolution out;
  out.phi = symmetrized(c * p * c.transpose() + psi);
  const Matrix phi_inv = spd_inverse(out.phi, "innovation covariance C P C^T + Psi");
  out.k = (a * p * c.transpose() + ups) * phi_inv;

  DareReport& rep = out.report;
  rep.iterations = iterations;
  rep.residual = dare_residual(p, a, c, xi, psi, ups);
  rep.residual_bound = 1e-9 * (1.0 + max_abs(p));
  rep.closed_loop_radius = spectral_radius(a - out.k * c);
  rep.marginal = std::abs(rep.closed_loop_radius - 1.0) <= kUnitCircleTolerance;
  out.p = std::move(p);

  const double limit = options.stability == StabilityPolicy::strict
                           ? 1.0 - kUnitCircleTolerance
                           : 1.0 + kUnitCircleTolerance;
  if (!(rep.closed_loop_radius < limit)) {
    fail(ErrorKind::non_stabilizing,
         fmt::format("DARE solution leaves rho(A - K C) = {:.17g}",
                     rep.closed_loop_radius));
  }
  return out;
}

DareSolution dare_doubling(const Matrix& a, const Matrix& c, const Matrix& xi,
                           const Matrix& psi, const Matrix& ups,
                           const DareOptions& options) {
  const Eigen::Index n = a.rows();
  const Matrix psi_inv = spd_inverse(psi, "observation noise covariance Psi");

  // Removing the state/observation cross term turns the filtering DARE into
  // X = H + A_s^T X (I + G X)^-1 A_s with A_s = (A - Ups Psi^-1 C)^T.
  Matrix ak = (a - ups * psi_inv * c).transpose();
  Matrix g = symmetrized(c.transpose() * psi_inv * c);
  Matrix h = symmetrized(xi - ups * psi_inv * ups.transpose());

  const long cap = options.max_iterations > 0 ? options.max_iterations : kMaxDoublings;
  const Matrix eye = Matrix::Identity(n, n);
  for (long it = 1; it <= cap; ++it) {
    const Eigen::PartialPivLU<Matrix> w(eye + g * h);
    const Matrix w_ak = w.solve(ak);
    const Matrix w_g = w.solve(g);

    Matrix h_next = symmetrized(h + ak.transpose() * h * w_ak);
    Matrix g_next = symmetrized(g + ak * w_g * ak.transpose());
    Matrix a_next = ak * w_ak;
    if (!h_next.allFinite()) {
      fail(ErrorKind::convergence, "DARE doubling diverged");
    }

    const double change = max_abs(h_next - h);
    h = std::move(h_next);
    g = std::move(g_next);
    ak = std::move(a_next);
    if (change <= options.tolerance * (1.0 + max_abs(h))) {
      return finish_dare(std::move(h), a, c, xi, psi, ups, it, options);
    }
  }
  fail(ErrorKind::convergence,
       fmt::format("DARE doubling did not converge in {} steps", cap));
}

DareSolution dare_fixed_point(const Matrix& a, const Matrix& c, const Matrix& xi,
                              const Matrix& psi, const Matrix& ups,
                              const DareOptions& options) {
  Matrix p = xi;
  const long cap =
      options.max_iterations > 0 ? options.max_iterations : kMaxFixedPointSteps;
  for (long it = 1; it <= cap; ++it) {
    const Matrix phi = symmetrized(c * p * c.transpose() + psi);
    const Matrix gain = a * p * c.transpose() + ups;
    Matrix next = symmetrized(a * p * a.transpose() + xi -
                              gain * spd_inverse(phi, "C P C^T + Psi") * gain.transpose());
    const double change = max_abs(next - p);
    p = std::move(next);
    if (change <= options.tolerance * (1.0 + max_abs(p))) {
      return finish_dare(std::move(p), a, c, xi, psi, ups, it, options);
    }
  }
  fail(ErrorKind::convergence,
       fmt::format("Riccati iteration did not converge in {} steps", cap));
}

}  // namespace

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_finite(const Matrix& m, std::string_view what) {
  if (!m.allFinite()) {
    fail(ErrorKind::dimension, fmt::format("{} has non-finite entries", what));
  }
}

void require_square(const Matrix& m, std::string_view what) {
  if (m.rows() != m.cols()) {
    fail(ErrorKind::dimension,
         fmt::format("{} must be square, got {}", what, shape(m)));
  }
}

bool is_symmetric(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = max_abs(m);
  return max_abs(m - m.transpose()) <= rel_tol * scale;
}

bool is_psd(const Matrix& m, double rel_tol) {
  if (!is_symmetric(m)) return false;
  if (m.size() == 0) return true;
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrized(m),
                                                  Eigen::EigenvaluesOnly);
  const double floor = -rel_tol * std::max(std::abs(m.trace()), 0.0);
  return eig.eigenvalues().minCoeff() >= floor;
}

bool is_pd(const Matrix& m) {
  if (!is_symmetric(m) || m.size() == 0) return false;
  const Eigen::LLT<Matrix> llt(symmetrized(m));
  return llt.info() == Eigen::Success && llt.rcond() >= kSingularRcond;
}

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

Matrix spd_inverse(const Matrix& m, std::string_view what) {
  require_square(m, what);
  const Eigen::LLT<Matrix> llt(symmetrized(m));
  if (llt.info() != Eigen::Success || !(llt.rcond() >= kSingularRcond)) {
    fail(ErrorKind::singularity,
         fmt::format("{} is numerically singular or not positive definite", what));
  }
  return llt.solve(Matrix::Identity(m.rows(), m.cols()));
}

double spectral_radius(const Matrix& m) {
  require_square(m, "spectral_radius argument");
  if (m.size() == 0) return 0.0;
  const Eigen::EigenSolver<Matrix> eig(m, /*computeEigenvectors=*/false);
  if (eig.info() != Eigen::Success) {
    fail(ErrorKind::convergence, "eigenvalue iteration failed");
  }
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix solve_dlyap(const Matrix& a, const Matrix& q) {
  require_square(a, "Lyapunov A");
  require_shape(q, a.rows(), a.rows(), "Lyapunov Q");
  require_finite(a, "Lyapunov A");
  require_finite(q, "Lyapunov Q");
  require_covariance(q, "Lyapunov Q");
  const double rho = spectral_radius(a);
  if (rho >= 1.0) {
    fail(ErrorKind::instability,
         fmt::format("Lyapunov equation needs rho(A) < 1, got {:.17g}", rho));
  }

  Matrix omega = symmetrized(q);
  Matrix ak = a;
  for (int it = 0; it < kMaxLyapunovDoublings; ++it) {
    omega = symmetrized(omega + ak * omega * ak.transpose());
    ak = ak * ak;
    if (max_abs(ak) <= kLyapunovPowerFloor) return omega;
  }
  fail(ErrorKind::convergence, "Lyapunov doubling did not converge");
}

double dare_residual(const Matrix& p, const Matrix& a, const Matrix& c,
                     const Matrix& xi, const Matrix& psi, const Matrix& ups) {
  const Matrix phi = c * p * c.transpose() + psi;
  const Matrix gain = a * p * c.transpose() + ups;
  const Matrix rhs = a * p * a.transpose() + xi -
                     gain * phi.llt().solve(gain.transpose());
  return max_abs(p - rhs);
}

DareSolution solve_dare(const Matrix& a, const Matrix& c, const Matrix& xi,
                        const Matrix& psi, const Matrix& ups,
                        const DareOptions& options) {
  require_square(a, "DARE A");
  const Eigen::Index n = a.rows();
  const Eigen::Index m = c.rows();
  require_shape(c, m, n, "DARE C");
  require_shape(xi, n, n, "DARE Xi");
  require_shape(psi, m, m, "DARE Psi");
  require_shape(ups, n, m, "DARE Upsilon");
  for (const auto* mat : {&a, &c, &xi, &psi, &ups}) {
    require_finite(*mat, "DARE argument");
  }
  require_covariance(xi, "DARE Xi");
  if (!is_symmetric(psi)) {
    fail(ErrorKind::covariance, "DARE Psi is not symmetric");
  }

  switch (options.method) {
    case DareMethod::doubling: return dare_doubling(a, c, xi, psi, ups, options);
    case DareMethod::fixed_point: return dare_fixed_point(a, c, xi, psi, ups, options);
  }
  fail(ErrorKind::parameter, "unknown DARE method");
}

}  // namespace msid::linalg
