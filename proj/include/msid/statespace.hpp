#pragma once

#include <cstddef>
#include <vector>

#include "msid/linalg.hpp"

namespace msid {

/// General state-space model
///   X_{n+1} = A X_n + W_n,   Y_n = C X_n + V_n,
/// with E[W W^T] = Xi, E[V V^T] = Psi and E[W V^T] = Ups.
struct SsModel {
  Matrix a;
  Matrix c;
  Matrix xi;
  Matrix psi;
  Matrix ups;

  [[nodiscard]] Eigen::Index state_dim() const { return a.rows(); }
  [[nodiscard]] Eigen::Index obs_dim() const { return c.rows(); }

  /// Checks shapes and rho(A) < 1. The joint noise covariance [[Xi, Ups], [Ups^T, Psi]] must be PSD.
  void validate() const;
};

/// Innovations-form model
///   Z_{n+1} = A Z_n + K E_n,   Y_n = C Z_n + E_n,   E[E E^T] = Phi.
struct IssModel {
  Matrix a;
  Matrix c;
  Matrix k;
  Matrix phi;

  [[nodiscard]] Eigen::Index state_dim() const { return a.rows(); }
  [[nodiscard]] Eigen::Index obs_dim() const { return c.rows(); }

  /// rho(A - K C); 1 for representations with unit-circle MA zeros.
  [[nodiscard]] double inverse_radius() const;

  /// Shapes, rho(A) < 1, Phi symmetric PD. With `require_invertible`, also
  /// rho(A - K C) < 1; averaged (AVG) models at tau >= 2 sit on the boundary.
  void validate(bool require_invertible = true) const;
};

/// The ISS read as a general SS: Xi = K Phi K^T, Psi = Phi, Ups = K Phi.
[[nodiscard]] SsModel as_ss(const IssModel& iss);

struct IssConversion {
  IssModel model;
  linalg::DareReport report;
};

/// SS -> ISS through the DARE. Keeps A and C; K and Phi come from the solution.
[[nodiscard]] IssConversion ss_to_iss(const SsModel& ss,
                                      const linalg::DareOptions& options = {});

/// Single-target submodel for channel `target` (0-based): state equation of the
/// ISS, observation row C^(j), Xi = K Phi K^T, Psi = Phi(j,j), Ups = column j of K Phi.
/// Not in innovations form; ss_to_iss of it yields lambda_{j|j} as its Phi.
[[nodiscard]] SsModel extract_target_submodel(const IssModel& iss, std::size_t target);

/// Runs the ISS recursion from Z_0 = 0 on the given innovations (obs_dim x N),
/// returning the observations (obs_dim x N).
[[nodiscard]] Matrix filter_iss(const IssModel& iss, const Matrix& innovations);

}  // namespace msid
