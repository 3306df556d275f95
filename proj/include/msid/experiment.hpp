#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "msid/error.hpp"
#include "msid/estimator.hpp"
#include "msid/infodyn.hpp"
#include "msid/multiscale.hpp"
#include "msid/var.hpp"

namespace msid::experiment {

using Json = nlohmann::ordered_json;

/// Bivariate VAR
///   y1_n = a1 y1_{n-b1} + c1 y2_{n-d1} + u1_n
///   y2_n = a2 y2_{n-b2} + c2 y1_{n-d2} + u2_n,   Sigma = I.
/// Zero coefficients do not contribute to the model order.
struct BivariateConfig {
  double a1 = 0.0;
  int b1 = 1;
  double c1 = 0.0;
  int d1 = 1;
  double a2 = 0.0;
  int b2 = 1;
  double c2 = 0.0;
  int d2 = 1;
};

[[nodiscard]] VarModel bivariate_var(const BivariateConfig& config);

/// "uni", "bi" and "uni-strong".
[[nodiscard]] const std::vector<std::string>& preset_names();
[[nodiscard]] std::optional<BivariateConfig> preset_config(std::string_view name);
/// Throws ErrorKind::parameter for unknown names.
[[nodiscard]] VarModel preset(std::string_view name);

/// Model document: {"m": M, "p": p, "A": [p matrices as row lists], "Sigma": matrix}.
/// Structural problems (missing keys, wrong shapes, asymmetric Sigma) raise
/// ErrorKind::schema; the returned model is validated.
[[nodiscard]] VarModel parse_model(const Json& doc);
[[nodiscard]] VarModel load_model(const std::filesystem::path& path);
[[nodiscard]] Json model_to_json(const VarModel& model);

struct OracleSpec {
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 1;
  std::size_t lags = 0;  ///< 0 selects default_lag_order
  double ridge = 0.0;
};

enum class Format { csv, json };

struct ExperimentSpec {
  std::string model_source;  ///< preset name or model path, echoed in output
  VarModel model;
  std::vector<int> taus{1};
  std::vector<Mode> modes{Mode::avg, Mode::dws};
  std::vector<std::size_t> targets;  ///< 0-based; empty selects every channel
  std::optional<OracleSpec> oracle;
};

struct ResultRow {
  int tau = 1;
  Mode mode = Mode::avg;
  std::size_t target = 0;
  std::optional<InfoMeasures> analytic;
  std::optional<InfoMeasures> oracle;
  std::size_t oracle_lags = 0;
  std::optional<ErrorKind> error_kind;
  std::string error;

  [[nodiscard]] bool ok() const { return !error_kind.has_value(); }
};

struct ResultTable {
  std::string model_source;
  VarModel model;
  std::optional<OracleSpec> oracle;
  std::vector<ResultRow> rows;

  [[nodiscard]] std::optional<ErrorKind> first_error() const;
};

/// Rows ordered by mode (as listed), then tau (as listed), then target.
[[nodiscard]] ResultTable run(const ExperimentSpec& spec);

/// Comma-separated, header row, LF endings, 12 significant digits. Storage,
/// transfer and predictive values in [-1e-10, 0) are reported as 0.
[[nodiscard]] std::string to_csv(const ResultTable& table);

/// Machine output; values are kept unclamped.
[[nodiscard]] Json to_json(const ResultTable& table);

/// "1..20", "1,2,5" or mixtures such as "1..4,8". Values must be >= 1.
[[nodiscard]] std::vector<int> parse_taus(std::string_view text);
/// 1-based channel list, returned 0-based.
[[nodiscard]] std::vector<std::size_t> parse_targets(std::string_view text);
[[nodiscard]] std::vector<Mode> parse_modes(std::string_view text);
/// "N=1000000,seed=3,lags=0,ridge=1e-10"; omitted keys keep defaults.
[[nodiscard]] OracleSpec parse_oracle(std::string_view text);

/// Process exit status for a failure category (see README).
[[nodiscard]] int exit_code(ErrorKind kind) noexcept;
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

[[nodiscard]] Json error_json(ErrorKind kind, std::string_view message);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomically(const std::filesystem::path& path, std::string_view content);

}  // namespace msid::experiment
