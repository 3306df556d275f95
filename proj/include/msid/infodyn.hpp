#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "msid/error.hpp"
#include "msid/linalg.hpp"
#include "msid/multiscale.hpp"
#include "msid/statespace.hpp"
#include "msid/var.hpp"

namespace msid {

/// Zero-lag second moments of an ISS process.
struct ProcessCovariance {
  Matrix omega;  ///< E[Z Z^T], solves Omega = A Omega A^T + K Phi K^T
  Matrix gamma;  ///< E[Y Y^T] = C Omega C^T + Phi
};

[[nodiscard]] ProcessCovariance process_covariance(const IssModel& iss);

/// Gamma_k = E[Y_n Y_{n-k}^T] for k = 0..max_lag, using
/// Gamma_k = C A^{k-1} (A Omega C^T + K Phi) for k >= 1.
[[nodiscard]] std::vector<Matrix> autocovariance(const IssModel& iss, std::size_t max_lag);

/// Information measures of one target, in nats.
/// The driver set is every channel other than the target.
struct InfoMeasures {
  std::size_t target = 0;    ///< 0-based channel index
  double lambda_full = 0.0;  ///< variance of the target
  double lambda_own = 0.0;   ///< partial variance given the target's own past
  double lambda_all = 0.0;   ///< partial variance given the whole past
  double storage = 0.0;      ///< 1/2 ln(lambda_full / lambda_own)
  double transfer = 0.0;     ///< 1/2 ln(lambda_own / lambda_all)
  double predictive = 0.0;   ///< storage + transfer
};

/// Fills the log-ratio fields from the three variances.
/// Throws ErrorKind::degeneracy if a variance is not strictly positive.
[[nodiscard]] InfoMeasures measures_from_variances(std::size_t target, double lambda_full,
                                                   double lambda_own, double lambda_all);

/// Measures for `target` (0-based). lambda_own comes from the DARE of the
/// single-target submodel; `policy` governs its closed-loop check. When
/// `reports` is given, the submodel DARE report is appended to it.
[[nodiscard]] InfoMeasures measures(
    const IssModel& iss, std::size_t target,
    linalg::StabilityPolicy policy = linalg::StabilityPolicy::strict,
    std::vector<linalg::DareReport>* reports = nullptr);

/// Closed-loop policy used for a processing mode: averaged models at tau >= 2
/// have unit-circle MA zeros, so AVG accepts marginal solutions.
[[nodiscard]] linalg::StabilityPolicy policy_for(Mode mode) noexcept;

struct SweepRow {
  int tau = 1;
  Mode mode = Mode::avg;
  std::size_t target = 0;
  std::optional<InfoMeasures> measures;   ///< empty when this scale failed
  std::optional<ErrorKind> error_kind;
  std::string error;
  std::vector<linalg::DareReport> reports;  ///< every DARE solved for this row

  [[nodiscard]] bool ok() const { return measures.has_value(); }
};

/// One row per (tau, target) in input order. Scales are evaluated in parallel;
/// a failing scale records its error in its rows and does not stop the others.
[[nodiscard]] std::vector<SweepRow> multiscale_sweep(const VarModel& model,
                                                     std::span<const int> taus, Mode mode,
                                                     std::span<const std::size_t> targets);

/// Single-threaded reference for multiscale_sweep.
[[nodiscard]] std::vector<SweepRow> multiscale_sweep_serial(
    const VarModel& model, std::span<const int> taus, Mode mode,
    std::span<const std::size_t> targets);

}  // namespace msid
