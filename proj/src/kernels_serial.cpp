#include <fmt/format.h>

#include "msid/error.hpp"
#include "msid/kernels.hpp"

namespace msid::kernels::serial {

Matrix lagged_gram(const SeriesData& y, std::size_t max_lag) {
  const Eigen::Index m = y.rows();
  const Eigen::Index n = y.cols();
  const auto lags = static_cast<Eigen::Index>(max_lag);
  if (n <= lags) {
    fail(ErrorKind::length, fmt::format("series of {} samples is too short for {} lags", n, lags));
  }
  const Eigen::Index dim = m * (lags + 1);
  Matrix gram = Matrix::Zero(dim, dim);
  Vector stacked(dim);
  for (Eigen::Index t = lags; t < n; ++t) {
    for (Eigen::Index r = 0; r <= lags; ++r) stacked.segment(r * m, m) = y.col(t - r);
    gram.noalias() += stacked * stacked.transpose();
  }
  return gram;
}

SeriesData coarse_grain(const SeriesData& y, int tau, Mode mode) {
  if (tau < 1) fail(ErrorKind::parameter, fmt::format("scale factor must be >= 1, got {}", tau));
  const Eigen::Index n = y.cols();
  if (n < tau) {
    fail(ErrorKind::length, fmt::format("series of {} samples is shorter than tau = {}", n, tau));
  }
  const Eigen::Index out_len = mode == Mode::avg ? n - tau + 1 : n / tau;
  const Eigen::Index stride = mode == Mode::avg ? 1 : tau;
  SeriesData out(y.rows(), out_len);
  for (Eigen::Index c = 0; c < y.rows(); ++c) {
    for (Eigen::Index i = 0; i < out_len; ++i) {
      double sum = 0.0;
      for (Eigen::Index l = 0; l < tau; ++l) sum += y(c, i * stride + l);
      out(c, i) = sum / tau;
    }
  }
  return out;
}

}  // namespace msid::kernels::serial
