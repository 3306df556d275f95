#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "msid/linalg.hpp"
#include "msid/statespace.hpp"

namespace msid {

/// VAR(p) process Y_n = sum_k A_k Y_{n-k} + U_n with E[U U^T] = Sigma.
struct VarModel {
  std::vector<Matrix> coefficients;  ///< A_1 .. A_p, each M x M
  Matrix sigma;

  [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(sigma.rows()); }
  [[nodiscard]] std::size_t order() const { return coefficients.size(); }
};

/// Block companion matrix of A_1..A_p (Mp x Mp).
[[nodiscard]] Matrix companion_matrix(const VarModel& model);

/// Returns the model unchanged when p >= 1, shapes agree, Sigma is symmetric PD
/// and the companion matrix has spectral radius < 1; throws otherwise
/// (ErrorKind::instability reports the radius).
VarModel validate(VarModel model);

/// Companion-form ISS with state [Y_{n-1}; ...; Y_{n-p}], C = [A_1 .. A_p],
/// K = [I; 0], Phi = Sigma.
[[nodiscard]] IssModel companion_iss(const VarModel& model);

/// Row-major so each channel is contiguous.
using SeriesData = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class SeriesOrigin { original, averaged, downsampled };

[[nodiscard]] std::string_view to_string(SeriesOrigin origin) noexcept;

struct TimeSeries {
  SeriesData data;  ///< M x N, channel m in row m
  SeriesOrigin origin = SeriesOrigin::original;

  [[nodiscard]] std::size_t channels() const { return static_cast<std::size_t>(data.rows()); }
  [[nodiscard]] std::size_t samples() const { return static_cast<std::size_t>(data.cols()); }
};

inline constexpr std::size_t kDefaultBurnIn = 10'000;

/// Names the generator pair so output metadata can record it.
inline constexpr std::string_view kGeneratorName = "std::mt19937_64";
inline constexpr std::string_view kNormalSamplerName = "std::normal_distribution<double>";

/// Gaussian innovations with covariance `sigma` (M x n): L z with L L^T = Sigma.
/// Deterministic in `seed`; each call owns its generator.
[[nodiscard]] Matrix draw_innovations(const Matrix& sigma, std::size_t n, std::uint64_t seed);

/// VAR recursion from zero initial conditions on the given innovations.
[[nodiscard]] Matrix filter_var(const VarModel& model, const Matrix& innovations);

/// n samples of the VAR after discarding `burn_in` transients.
[[nodiscard]] TimeSeries simulate(const VarModel& model, std::size_t n,
                                  std::uint64_t seed,
                                  std::size_t burn_in = kDefaultBurnIn);

}  // namespace msid
