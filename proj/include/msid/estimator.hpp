#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "msid/infodyn.hpp"
#include "msid/multiscale.hpp"
#include "msid/var.hpp"

namespace msid {

/// Regression-based estimate of the information measures from data. This is
/// a cross-check for the analytic route, truncating the infinite past at
/// `lag_order` samples.
struct EstimationSettings {
  std::size_t lag_order = 0;             ///< 0 selects default_lag_order()
  std::size_t sample_count = 1'000'000;  ///< samples simulated before coarse-graining
  std::uint64_t seed = 1;
  double ridge = 0.0;                    ///< added to the normal equations, relative to their mean diagonal
  std::size_t burn_in = kDefaultBurnIn;
};

/// Truncation used when EstimationSettings::lag_order is 0.
///
/// min(3 p tau, 50) in general. Averaged series at tau >= 2 carry the
/// unit-circle zeros of the averaging filter, so their finite-past residual
/// variance converges only like 1/lag (about (tau-1)/(2 lag) nats of storage
/// bias); there the lag is raised to min(200 (tau - 1), 1000).
[[nodiscard]] std::size_t default_lag_order(std::size_t var_order, int tau, Mode mode);

/// Averages (AVG, sliding) or averages-and-decimates (DWS) every channel.
[[nodiscard]] TimeSeries coarse_grain(const TimeSeries& ts, int tau, Mode mode);

/// Sample variance and OLS residual variances of each target regressed on its
/// own `lag_order` lags and on all channels' lags. All three use the same
/// estimation window, so lambda_full >= lambda_own >= lambda_all holds exactly
/// when ridge is 0.
[[nodiscard]] std::vector<InfoMeasures> estimate_measures(
    const TimeSeries& ts, std::span<const std::size_t> targets, std::size_t lag_order,
    double ridge = 0.0);

[[nodiscard]] InfoMeasures estimate_measures(const TimeSeries& ts, std::size_t target,
                                             const EstimationSettings& settings);

struct EmpiricalRow {
  ScaleRequest request;
  std::size_t lag_order = 0;
  std::vector<InfoMeasures> measures;  ///< one per requested target
};

/// Simulates the VAR once and estimates every (tau, mode) request from it.
[[nodiscard]] std::vector<EmpiricalRow> empirical_measures(
    const VarModel& model, std::span<const ScaleRequest> requests,
    std::span<const std::size_t> targets, const EstimationSettings& settings);

}  // namespace msid
