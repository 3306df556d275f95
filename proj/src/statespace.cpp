#include "msid/statespace.hpp"

#include <fmt/format.h>

#include "msid/error.hpp"

namespace msid {

namespace {

void require_dims(const Matrix& m, Eigen::Index rows, Eigen::Index cols,
                  const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    fail(ErrorKind::dimension, fmt::format("{} must be {}x{}, got {}x{}", what,
                                           rows, cols, m.rows(), m.cols()));
  }
}

void require_stable(const Matrix& a, const char* what) {
  const double rho = linalg::spectral_radius(a);
  if (!(rho < 1.0)) {
    fail(ErrorKind::instability,
         fmt::format("{}: rho(A) = {:.17g} is not below 1", what, rho));
  }
}

}  // namespace

void SsModel::validate() const {
  const Eigen::Index n = a.rows();
  const Eigen::Index m = c.rows();
  linalg::require_square(a, "SS A");
  require_dims(c, m, n, "SS C");
  require_dims(xi, n, n, "SS Xi");
  require_dims(psi, m, m, "SS Psi");
  require_dims(ups, n, m, "SS Upsilon");
  require_stable(a, "SS model");

  Matrix joint(n + m, n + m);
  joint << xi, ups, ups.transpose(), psi;
  if (!linalg::is_psd(joint)) {
    fail(ErrorKind::covariance, "SS joint noise covariance is not symmetric PSD");
  }
}

double IssModel::inverse_radius() const { return linalg::spectral_radius(a - k * c); }

void IssModel::validate(bool require_invertible) const {
  const Eigen::Index n = a.rows();
  const Eigen::Index m = c.rows();
  linalg::require_square(a, "ISS A");
  require_dims(c, m, n, "ISS C");
  require_dims(k, n, m, "ISS K");
  require_dims(phi, m, m, "ISS Phi");
  require_stable(a, "ISS model");
  if (!linalg::is_pd(phi)) {
    fail(ErrorKind::covariance, "ISS innovation covariance is not symmetric PD");
  }
  if (require_invertible) {
    const double rho = inverse_radius();
    if (!(rho < 1.0)) {
      fail(ErrorKind::non_stabilizing,
           fmt::format("ISS is not causally invertible: rho(A - K C) = {:.17g}", rho));
    }
  }
}

SsModel as_ss(const IssModel& iss) {
  const Matrix k_phi = iss.k * iss.phi;
  return SsModel{iss.a, iss.c, linalg::symmetrized(k_phi * iss.k.transpose()),
                 iss.phi, k_phi};
}

IssConversion ss_to_iss(const SsModel& ss, const linalg::DareOptions& options) {
  ss.validate();
  linalg::DareSolution sol =
      linalg::solve_dare(ss.a, ss.c, ss.xi, ss.psi, ss.ups, options);
  IssConversion out{IssModel{ss.a, ss.c, std::move(sol.k), std::move(sol.phi)},
                    std::move(sol.report)};
  out.model.validate(/*require_invertible=*/false);
  return out;
}

SsModel extract_target_submodel(const IssModel& iss, std::size_t target) {
  const auto m = static_cast<std::size_t>(iss.obs_dim());
  if (target >= m) {
    fail(ErrorKind::parameter,
         fmt::format("target index {} out of range for {} channels", target + 1, m));
  }
  const auto j = static_cast<Eigen::Index>(target);
  const Matrix k_phi = iss.k * iss.phi;
  return SsModel{iss.a, iss.c.row(j),
                 linalg::symmetrized(k_phi * iss.k.transpose()),
                 iss.phi.block(j, j, 1, 1), k_phi.col(j)};
}

Matrix filter_iss(const IssModel& iss, const Matrix& innovations) {
  if (innovations.rows() != iss.obs_dim()) {
    fail(ErrorKind::dimension, "innovation rows must match ISS observation dimension");
  }
  Matrix y(innovations.rows(), innovations.cols());
  Vector z = Vector::Zero(iss.state_dim());
  for (Eigen::Index n = 0; n < innovations.cols(); ++n) {
    const auto e = innovations.col(n);
    y.col(n) = iss.c * z + e;
    z = iss.a * z + iss.k * e;
  }
  return y;
}

}  // namespace msid
