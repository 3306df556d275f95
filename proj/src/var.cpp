#include "msid/var.hpp"

#include <algorithm>
#include <random>

#include <fmt/format.h>

#include "msid/error.hpp"

namespace msid {

std::string_view to_string(SeriesOrigin origin) noexcept {
  switch (origin) {
    case SeriesOrigin::original: return "original";
    case SeriesOrigin::averaged: return "averaged";
    case SeriesOrigin::downsampled: return "downsampled";
  }
  return "unknown";
}

Matrix companion_matrix(const VarModel& model) {
  const auto m = static_cast<Eigen::Index>(model.dim());
  const auto p = static_cast<Eigen::Index>(model.order());
  Matrix comp = Matrix::Zero(m * p, m * p);
  for (Eigen::Index k = 0; k < p; ++k) {
    comp.block(0, k * m, m, m) = model.coefficients[static_cast<std::size_t>(k)];
  }
  if (p > 1) comp.bottomLeftCorner(m * (p - 1), m * (p - 1)).setIdentity();
  return comp;
}

VarModel validate(VarModel model) {
  if (model.coefficients.empty()) {
    fail(ErrorKind::parameter, "VAR order p must be at least 1");
  }
  const Eigen::Index m = model.sigma.rows();
  if (m < 1 || model.sigma.cols() != m) {
    fail(ErrorKind::dimension, "Sigma must be a non-empty square matrix");
  }
  for (std::size_t k = 0; k < model.coefficients.size(); ++k) {
    const Matrix& a = model.coefficients[k];
    if (a.rows() != m || a.cols() != m) {
      fail(ErrorKind::dimension,
           fmt::format("A_{} must be {}x{}, got {}x{}", k + 1, m, m, a.rows(), a.cols()));
    }
    linalg::require_finite(a, "VAR coefficient");
  }
  linalg::require_finite(model.sigma, "Sigma");
  if (!linalg::is_pd(model.sigma)) {
    fail(ErrorKind::covariance, "Sigma must be symmetric positive definite");
  }
  const double rho = linalg::spectral_radius(companion_matrix(model));
  if (!(rho < 1.0)) {
    fail(ErrorKind::instability,
         fmt::format("VAR is not stationary: companion spectral radius {:.12g}", rho));
  }
  return model;
}

IssModel companion_iss(const VarModel& model) {
  const auto m = static_cast<Eigen::Index>(model.dim());
  const auto p = static_cast<Eigen::Index>(model.order());
  IssModel iss;
  iss.a = companion_matrix(model);
  iss.c = iss.a.topRows(m);
  iss.k = Matrix::Zero(m * p, m);
  iss.k.topRows(m).setIdentity();
  iss.phi = model.sigma;
  return iss;
}

Matrix draw_innovations(const Matrix& sigma, std::size_t n, std::uint64_t seed) {
  const Eigen::LLT<Matrix> llt(linalg::symmetrized(sigma));
  if (llt.info() != Eigen::Success) {
    fail(ErrorKind::covariance, "innovation covariance is not positive definite");
  }
  const Matrix chol = llt.matrixL();

  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(sigma.rows(), static_cast<Eigen::Index>(n));
  for (Eigen::Index col = 0; col < z.cols(); ++col) {
    for (Eigen::Index row = 0; row < z.rows(); ++row) z(row, col) = normal(gen);
  }
  return chol * z;
}

Matrix filter_var(const VarModel& model, const Matrix& innovations) {
  const auto m = static_cast<Eigen::Index>(model.dim());
  if (innovations.rows() != m) {
    fail(ErrorKind::dimension, "innovation rows must match VAR dimension");
  }
  const Eigen::Index n = innovations.cols();
  const auto p = static_cast<Eigen::Index>(model.order());
  Matrix y(m, n);
  for (Eigen::Index t = 0; t < n; ++t) {
    for (Eigen::Index i = 0; i < m; ++i) {
      double acc = innovations(i, t);
      for (Eigen::Index lag = 1; lag <= std::min(p, t); ++lag) {
        const Matrix& a = model.coefficients[static_cast<std::size_t>(lag - 1)];
        for (Eigen::Index j = 0; j < m; ++j) acc += a(i, j) * y(j, t - lag);
      }
      y(i, t) = acc;
    }
  }
  return y;
}

TimeSeries simulate(const VarModel& model, std::size_t n, std::uint64_t seed,
                    std::size_t burn_in) {
  if (n < 1) fail(ErrorKind::parameter, "simulation length must be at least 1");
  const Matrix u = draw_innovations(model.sigma, n + burn_in, seed);
  const Matrix y = filter_var(model, u);
  TimeSeries ts;
  ts.data = y.rightCols(static_cast<Eigen::Index>(n));
  ts.origin = SeriesOrigin::original;
  return ts;
}

}  // namespace msid
