#include "msid/multiscale.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "msid/error.hpp"

namespace msid {

std::string_view to_string(Mode mode) noexcept {
  return mode == Mode::avg ? "avg" : "dws";
}

std::optional<Mode> parse_mode(std::string_view text) noexcept {
  if (text == "avg" || text == "AVG") return Mode::avg;
  if (text == "dws" || text == "DWS") return Mode::dws;
  return std::nullopt;
}

namespace {

void require_tau(int tau) {
  if (tau < 1) fail(ErrorKind::parameter, fmt::format("scale factor must be >= 1, got {}", tau));
}

void require_state_size(Eigen::Index dim) {
  if (dim > kMaxStateDim) {
    fail(ErrorKind::size, fmt::format("state dimension {} exceeds limit {}", dim, kMaxStateDim));
  }
}

}  // namespace

VarmaModel average_varma(const VarModel& model, int tau) {
  require_tau(tau);
  const auto m = static_cast<Eigen::Index>(model.dim());
  VarmaModel out;
  out.ar = model.coefficients;
  out.ma.assign(static_cast<std::size_t>(tau), Matrix::Identity(m, m) / tau);
  out.sigma = model.sigma;
  return out;
}

IssModel aoki_iss(const VarmaModel& varma) {
  const auto m = static_cast<Eigen::Index>(varma.dim());
  const auto p = static_cast<Eigen::Index>(varma.ar_order());
  const auto q = static_cast<Eigen::Index>(varma.ma_order());
  if (p < 1 || varma.ma.empty()) {
    fail(ErrorKind::parameter, "VARMA needs at least one AR and one MA matrix");
  }
  const Matrix& b0 = varma.ma.front();
  const Eigen::FullPivLU<Matrix> b0_lu(b0);
  if (!b0_lu.isInvertible() || b0_lu.rcond() < linalg::kSingularRcond) {
    fail(ErrorKind::singularity, "MA leading coefficient B_0 is singular");
  }
  const Matrix phi = linalg::symmetrized(b0 * varma.sigma * b0.transpose());

  if (q == 0) {
    require_state_size(m * p);
    IssModel iss = companion_iss(VarModel{varma.ar, varma.sigma});
    iss.phi = phi;
    return iss;
  }

  const Eigen::Index dim = m * (p + q);
  require_state_size(dim);
  IssModel iss;
  iss.c = Matrix::Zero(m, dim);
  for (Eigen::Index k = 0; k < p; ++k) {
    iss.c.block(0, k * m, m, m) = varma.ar[static_cast<std::size_t>(k)];
  }
  for (Eigen::Index l = 1; l <= q; ++l) {
    iss.c.block(0, (p + l - 1) * m, m, m) = varma.ma[static_cast<std::size_t>(l)];
  }

  iss.a = Matrix::Zero(dim, dim);
  iss.a.topRows(m) = iss.c;
  // Shift registers: Y block rows 1..p-1 and U block rows p+1..p+q-1.
  for (Eigen::Index k = 1; k < p; ++k) {
    iss.a.block(k * m, (k - 1) * m, m, m).setIdentity();
  }
  for (Eigen::Index l = 1; l < q; ++l) {
    iss.a.block((p + l) * m, (p + l - 1) * m, m, m).setIdentity();
  }

  iss.k = Matrix::Zero(dim, m);
  iss.k.topRows(m).setIdentity();
  iss.k.block(p * m, 0, m, m) = b0_lu.inverse();
  iss.phi = phi;
  return iss;
}

IssConversion downsample_iss(const IssModel& avg, int tau,
                             const linalg::DareOptions& options) {
  require_tau(tau);
  const Matrix k_phi = avg.k * avg.phi;
  const Matrix kpk = linalg::symmetrized(k_phi * avg.k.transpose());

  Matrix xi = kpk;
  Matrix a_pow = Matrix::Identity(avg.a.rows(), avg.a.cols());  // A^(tau-1) at loop end
  for (int step = 2; step <= tau; ++step) {
    xi = linalg::symmetrized(avg.a * xi * avg.a.transpose() + kpk);
    a_pow = a_pow * avg.a;
  }

  SsModel ss{a_pow * avg.a, avg.c, xi, avg.phi, a_pow * k_phi};
  return ss_to_iss(ss, options);
}

ScaledModel scaled_iss(const VarModel& model, const ScaleRequest& request) {
  ScaledModel out{aoki_iss(average_varma(model, request.tau)), {}};
  if (request.mode == Mode::dws) {
    IssConversion conv = downsample_iss(out.iss, request.tau);
    conv.report.stage = fmt::format("downsample tau={}", request.tau);
    out.iss = std::move(conv.model);
    out.reports.push_back(std::move(conv.report));
  }
  return out;
}

Matrix filter_varma(const VarmaModel& varma, const Matrix& noise) {
  const auto m = static_cast<Eigen::Index>(varma.dim());
  if (noise.rows() != m) fail(ErrorKind::dimension, "noise rows must match VARMA dimension");
  const Eigen::Index n = noise.cols();
  const auto p = static_cast<Eigen::Index>(varma.ar_order());
  const auto q = static_cast<Eigen::Index>(varma.ma_order());
  Matrix y(m, n);
  for (Eigen::Index t = 0; t < n; ++t) {
    Vector acc = Vector::Zero(m);
    for (Eigen::Index l = 0; l <= std::min(q, t); ++l) {
      acc.noalias() += varma.ma[static_cast<std::size_t>(l)] * noise.col(t - l);
    }
    for (Eigen::Index k = 1; k <= std::min(p, t); ++k) {
      acc.noalias() += varma.ar[static_cast<std::size_t>(k - 1)] * y.col(t - k);
    }
    y.col(t) = acc;
  }
  return y;
}

}  // namespace msid
