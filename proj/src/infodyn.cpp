#include "msid/infodyn.hpp"

#include <cmath>

#include <fmt/format.h>

namespace msid {

ProcessCovariance process_covariance(const IssModel& iss) {
  ProcessCovariance out;
  const Matrix k_phi_k = linalg::symmetrized(iss.k * iss.phi * iss.k.transpose());
  out.omega = linalg::solve_dlyap(iss.a, k_phi_k);
  out.gamma = linalg::symmetrized(iss.c * out.omega * iss.c.transpose() + iss.phi);
  return out;
}

std::vector<Matrix> autocovariance(const IssModel& iss, std::size_t max_lag) {
  const ProcessCovariance pc = process_covariance(iss);
  std::vector<Matrix> out;
  out.reserve(max_lag + 1);
  out.push_back(pc.gamma);
  // Carry A^{k-1} N with N = A Omega C^T + K Phi.
  Matrix carried = iss.a * pc.omega * iss.c.transpose() + iss.k * iss.phi;
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    out.push_back(iss.c * carried);
    carried = iss.a * carried;
  }
  return out;
}

InfoMeasures measures_from_variances(std::size_t target, double lambda_full,
                                     double lambda_own, double lambda_all) {
  if (!(lambda_full > 0.0) || !(lambda_own > 0.0) || !(lambda_all > 0.0)) {
    fail(ErrorKind::degeneracy,
         fmt::format("non-positive variance for target {}: {}, {}, {}", target + 1,
                     lambda_full, lambda_own, lambda_all));
  }
  InfoMeasures out;
  out.target = target;
  out.lambda_full = lambda_full;
  out.lambda_own = lambda_own;
  out.lambda_all = lambda_all;
  out.storage = 0.5 * std::log(lambda_full / lambda_own);
  out.transfer = 0.5 * std::log(lambda_own / lambda_all);
  out.predictive = out.storage + out.transfer;
  return out;
}

InfoMeasures measures(const IssModel& iss, std::size_t target,
                      linalg::StabilityPolicy policy,
                      std::vector<linalg::DareReport>* reports) {
  iss.validate(/*require_invertible=*/false);
  const ProcessCovariance pc = process_covariance(iss);

  linalg::DareOptions options;
  options.stability = policy;
  IssConversion own = ss_to_iss(extract_target_submodel(iss, target), options);
  if (reports != nullptr) {
    own.report.stage = fmt::format("target {} submodel", target + 1);
    reports->push_back(own.report);
  }

  const auto j = static_cast<Eigen::Index>(target);
  return measures_from_variances(target, pc.gamma(j, j), own.model.phi(0, 0),
                                 iss.phi(j, j));
}

linalg::StabilityPolicy policy_for(Mode mode) noexcept {
  return mode == Mode::avg ? linalg::StabilityPolicy::allow_marginal
                           : linalg::StabilityPolicy::strict;
}

namespace {

// All rows of one scale. Errors are captured, never thrown.
std::vector<SweepRow> sweep_scale(const VarModel& model, int tau, Mode mode,
                                  std::span<const std::size_t> targets) {
  std::vector<SweepRow> rows;
  rows.reserve(targets.size());
  for (std::size_t target : targets) {
    SweepRow row;
    row.tau = tau;
    row.mode = mode;
    row.target = target;
    rows.push_back(std::move(row));
  }

  ScaledModel scaled;
  try {
    scaled = scaled_iss(model, ScaleRequest{tau, mode});
  } catch (const Error& e) {
    for (SweepRow& row : rows) {
      row.error_kind = e.kind();
      row.error = e.what();
    }
    return rows;
  }

  for (SweepRow& row : rows) {
    row.reports = scaled.reports;
    try {
      row.measures = measures(scaled.iss, row.target, policy_for(mode), &row.reports);
    } catch (const Error& e) {
      row.error_kind = e.kind();
      row.error = e.what();
    }
  }
  return rows;
}

void flatten(std::vector<std::vector<SweepRow>>& per_scale, std::vector<SweepRow>& out) {
  for (auto& rows : per_scale) {
    for (auto& row : rows) out.push_back(std::move(row));
  }
}

}  // namespace

std::vector<SweepRow> multiscale_sweep(const VarModel& model, std::span<const int> taus,
                                       Mode mode, std::span<const std::size_t> targets) {
  std::vector<std::vector<SweepRow>> per_scale(taus.size());
  const auto count = static_cast<long>(taus.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    per_scale[idx] = sweep_scale(model, taus[idx], mode, targets);
  }
  std::vector<SweepRow> out;
  out.reserve(taus.size() * targets.size());
  flatten(per_scale, out);
  return out;
}

std::vector<SweepRow> multiscale_sweep_serial(const VarModel& model,
                                              std::span<const int> taus, Mode mode,
                                              std::span<const std::size_t> targets) {
  std::vector<std::vector<SweepRow>> per_scale;
  per_scale.reserve(taus.size());
  for (int tau : taus) per_scale.push_back(sweep_scale(model, tau, mode, targets));
  std::vector<SweepRow> out;
  flatten(per_scale, out);
  return out;
}

}  // namespace msid
