#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "msid/linalg.hpp"
#include "msid/statespace.hpp"
#include "msid/var.hpp"

namespace msid {

/// Averaging only (AVG), or averaging followed by downsampling (DWS).
enum class Mode { avg, dws };

[[nodiscard]] std::string_view to_string(Mode mode) noexcept;
[[nodiscard]] std::optional<Mode> parse_mode(std::string_view text) noexcept;

struct ScaleRequest {
  int tau = 1;
  Mode mode = Mode::avg;
};

/// VARMA(p, q): Y_n = sum_k A_k Y_{n-k} + sum_{l=0}^{q} B_l U_{n-l}.
struct VarmaModel {
  std::vector<Matrix> ar;  ///< A_1 .. A_p
  std::vector<Matrix> ma;  ///< B_0 .. B_q
  Matrix sigma;            ///< covariance of U

  [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(sigma.rows()); }
  [[nodiscard]] std::size_t ar_order() const { return ar.size(); }
  [[nodiscard]] std::size_t ma_order() const { return ma.empty() ? 0 : ma.size() - 1; }
};

/// Largest state dimension the multiscale builders will produce.
inline constexpr Eigen::Index kMaxStateDim = 256;

/// Process obtained by averaging the VAR over windows of `tau` samples:
/// AR part unchanged, B_0 = ... = B_{tau-1} = I / tau.
[[nodiscard]] VarmaModel average_varma(const VarModel& model, int tau);

/// Innovations-form embedding of a VARMA with state
/// [Y_{n-1} .. Y_{n-p}, U_{n-1} .. U_{n-q}], innovations B_0 U_n and
/// Phi = B_0 Sigma B_0^T. For q = 0 this is the companion form.
/// For the averaging filter at tau >= 2 the result has rho(A - K C) = 1.
[[nodiscard]] IssModel aoki_iss(const VarmaModel& varma);

/// ISS of the process sampled every `tau` steps. A becomes A^tau and C is kept;
/// K and Phi come from the DARE of the SS with
///   Xi_tau = sum_{i<tau} A^i K Phi K^T A^iT,  Ups_tau = A^{tau-1} K Phi,  Psi = Phi.
[[nodiscard]] IssConversion downsample_iss(const IssModel& avg, int tau,
                                           const linalg::DareOptions& options = {});

/// Model at one scale plus the DARE reports produced while building it.
struct ScaledModel {
  IssModel iss;
  std::vector<linalg::DareReport> reports;
};

/// aoki_iss(average_varma(model, tau)), downsampled when mode == dws.
[[nodiscard]] ScaledModel scaled_iss(const VarModel& model, const ScaleRequest& request);

/// VARMA recursion from zero initial conditions on the driving noise U (M x N).
[[nodiscard]] Matrix filter_varma(const VarmaModel& varma, const Matrix& noise);

}  // namespace msid
