#include "msid/estimator.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "msid/error.hpp"
#include "msid/kernels.hpp"

namespace msid {

namespace {

// Residual sum of squares of y on the regressors `idx`, all read from the
// lagged Gram matrix (column `response` holds X^T y).
class NormalEquations {
 public:
  NormalEquations(const Matrix& gram, std::vector<Eigen::Index> idx, double ridge)
      : gram_(gram), idx_(std::move(idx)) {
    const auto d = static_cast<Eigen::Index>(idx_.size());
    Matrix xtx(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index k = 0; k < d; ++k) xtx(i, k) = gram_(idx_[i], idx_[k]);
    }
    if (ridge > 0.0) xtx.diagonal().array() += ridge * xtx.diagonal().mean();
    xtx_ = xtx;
    llt_.compute(xtx);
    if (llt_.info() != Eigen::Success || !(llt_.rcond() >= linalg::kSingularRcond)) {
      fail(ErrorKind::conditioning,
           "regression design is rank deficient; retry with a small ridge (e.g. 1e-10)");
    }
  }

  [[nodiscard]] double rss(Eigen::Index response) const {
    const auto d = static_cast<Eigen::Index>(idx_.size());
    Vector xty(d);
    for (Eigen::Index i = 0; i < d; ++i) xty(i) = gram_(idx_[i], response);
    const Vector beta = llt_.solve(xty);
    const double yty = gram_(response, response);
    return yty - 2.0 * beta.dot(xty) + beta.dot(xtx_ * beta);
  }

 private:
  const Matrix& gram_;
  std::vector<Eigen::Index> idx_;
  Matrix xtx_;
  Eigen::LLT<Matrix> llt_;
};

}  // namespace

std::size_t default_lag_order(std::size_t var_order, int tau, Mode mode) {
  const std::size_t t = static_cast<std::size_t>(std::max(tau, 1));
  std::size_t lags = std::min<std::size_t>(3 * var_order * t, 50);
  if (mode == Mode::avg && tau >= 2) {
    lags = std::max(lags, std::min<std::size_t>(200 * (t - 1), 1000));
  }
  return std::max<std::size_t>(lags, 1);
}

TimeSeries coarse_grain(const TimeSeries& ts, int tau, Mode mode) {
  TimeSeries out;
  out.data = kernels::coarse_grain(ts.data, tau, mode);
  out.origin = mode == Mode::avg ? SeriesOrigin::averaged : SeriesOrigin::downsampled;
  if (tau == 1) out.origin = ts.origin;
  return out;
}

std::vector<InfoMeasures> estimate_measures(const TimeSeries& ts,
                                            std::span<const std::size_t> targets,
                                            std::size_t lag_order, double ridge) {
  const std::size_t m = ts.channels();
  if (lag_order < 1) fail(ErrorKind::parameter, "lag order must be at least 1");
  if (ts.samples() <= 10 * lag_order * m) {
    fail(ErrorKind::parameter,
         fmt::format("{} samples is too few for {} lags on {} channels (need > {})",
                     ts.samples(), lag_order, m, 10 * lag_order * m));
  }
  for (std::size_t target : targets) {
    if (target >= m) {
      fail(ErrorKind::parameter, fmt::format("target {} out of range", target + 1));
    }
  }

  SeriesData centered = ts.data;
  for (Eigen::Index c = 0; c < centered.rows(); ++c) {
    centered.row(c).array() -= centered.row(c).mean();
  }
  const Matrix gram = kernels::lagged_gram(centered, lag_order);
  const double n_eff = static_cast<double>(ts.samples() - lag_order);

  const auto mm = static_cast<Eigen::Index>(m);
  const auto lags = static_cast<Eigen::Index>(lag_order);
  std::vector<Eigen::Index> all_idx;
  for (Eigen::Index k = mm; k < mm * (lags + 1); ++k) all_idx.push_back(k);
  const NormalEquations full(gram, all_idx, ridge);

  std::vector<InfoMeasures> out;
  out.reserve(targets.size());
  for (std::size_t target : targets) {
    const auto j = static_cast<Eigen::Index>(target);
    std::vector<Eigen::Index> own_idx;
    for (Eigen::Index r = 1; r <= lags; ++r) own_idx.push_back(r * mm + j);
    const NormalEquations own(gram, own_idx, ridge);

    out.push_back(measures_from_variances(target, gram(j, j) / n_eff,
                                          own.rss(j) / n_eff, full.rss(j) / n_eff));
  }
  return out;
}

InfoMeasures estimate_measures(const TimeSeries& ts, std::size_t target,
                               const EstimationSettings& settings) {
  if (settings.lag_order < 1) {
    fail(ErrorKind::parameter, "explicit lag order required for a bare series");
  }
  const std::size_t one[] = {target};
  return estimate_measures(ts, one, settings.lag_order, settings.ridge).front();
}

std::vector<EmpiricalRow> empirical_measures(const VarModel& model,
                                             std::span<const ScaleRequest> requests,
                                             std::span<const std::size_t> targets,
                                             const EstimationSettings& settings) {
  const TimeSeries raw =
      simulate(model, settings.sample_count, settings.seed, settings.burn_in);
  std::vector<EmpiricalRow> rows;
  rows.reserve(requests.size());
  for (const ScaleRequest& req : requests) {
    EmpiricalRow row;
    row.request = req;
    row.lag_order = settings.lag_order > 0
                        ? settings.lag_order
                        : default_lag_order(model.order(), req.tau, req.mode);
    const TimeSeries scaled = coarse_grain(raw, req.tau, req.mode);
    row.measures = estimate_measures(scaled, targets, row.lag_order, settings.ridge);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace msid
