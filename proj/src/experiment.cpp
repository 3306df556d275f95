#include "msid/experiment.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <unistd.h>

#include <fmt/format.h>

namespace msid::experiment {

namespace {

constexpr double kClampFloor = -1e-10;

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    fail(ErrorKind::parameter, fmt::format("invalid {}: '{}'", what, text));
  }
  return value;
}

Matrix parse_matrix(const Json& node, std::size_t m, const std::string& what) {
  if (!node.is_array() || node.size() != m) {
    fail(ErrorKind::schema, fmt::format("{} must be an array of {} rows", what, m));
  }
  Matrix out(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const Json& row = node[i];
    if (!row.is_array() || row.size() != m) {
      fail(ErrorKind::schema, fmt::format("{} row {} must hold {} numbers", what, i + 1, m));
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (!row[j].is_number()) {
        fail(ErrorKind::schema, fmt::format("{} entry ({}, {}) is not a number", what, i + 1, j + 1));
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j].get<double>();
    }
  }
  return out;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::size_t positive_int(const Json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer() || doc[key].get<long long>() < 1) {
    fail(ErrorKind::schema, fmt::format("\"{}\" must be a positive integer", key));
  }
  return doc[key].get<std::size_t>();
}

double clamp_report(double v) { return (v < 0.0 && v >= kClampFloor) ? 0.0 : v; }

std::string num(double v) { return fmt::format("{:.12g}", v); }

Json measures_json(const InfoMeasures& m) {
  Json out;
  out["lambda_full"] = m.lambda_full;
  out["lambda_own"] = m.lambda_own;
  out["lambda_all"] = m.lambda_all;
  out["storage_nats"] = m.storage;
  out["transfer_nats"] = m.transfer;
  out["predictive_nats"] = m.predictive;
  out["storage_bits"] = m.storage / std::numbers::ln2;
  out["transfer_bits"] = m.transfer / std::numbers::ln2;
  return out;
}

}  // namespace

VarModel bivariate_var(const BivariateConfig& cfg) {
  for (int lag : {cfg.b1, cfg.d1, cfg.b2, cfg.d2}) {
    if (lag < 1) fail(ErrorKind::parameter, "bivariate lags must be >= 1");
  }
  struct Term { double coeff; int lag; int row; int col; };
  const Term terms[] = {{cfg.a1, cfg.b1, 0, 0}, {cfg.c1, cfg.d1, 0, 1},
                        {cfg.a2, cfg.b2, 1, 1}, {cfg.c2, cfg.d2, 1, 0}};
  int order = 1;
  for (const Term& t : terms) {
    if (t.coeff != 0.0) order = std::max(order, t.lag);
  }
  VarModel model;
  model.coefficients.assign(static_cast<std::size_t>(order), Matrix::Zero(2, 2));
  for (const Term& t : terms) {
    if (t.coeff != 0.0) model.coefficients[static_cast<std::size_t>(t.lag - 1)](t.row, t.col) += t.coeff;
  }
  model.sigma = Matrix::Identity(2, 2);
  return model;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"uni", "bi", "uni-strong"};
  return names;
}

std::optional<BivariateConfig> preset_config(std::string_view name) {
  // y1 -> y2 at lag 2; y1 autonomous at lag 1.
  if (name == "uni") return BivariateConfig{0.25, 1, 0.0, 1, 0.0, 1, 0.5, 2};
  // Same coupling with a strongly persistent driver.
  if (name == "uni-strong") return BivariateConfig{0.95, 1, 0.0, 1, 0.0, 1, 0.5, 2};
  // y1 -> y2 at lag 7, y2 -> y1 at lag 3, autonomous lags 2 and 5.
  if (name == "bi") return BivariateConfig{0.25, 2, 0.75, 3, 0.25, 5, 0.5, 7};
  return std::nullopt;
}

VarModel preset(std::string_view name) {
  const auto cfg = preset_config(name);
  if (!cfg) fail(ErrorKind::parameter, fmt::format("unknown preset '{}'", name));
  return validate(bivariate_var(*cfg));
}

VarModel parse_model(const Json& doc) {
  if (!doc.is_object()) fail(ErrorKind::schema, "model document must be a JSON object");
  const std::size_t m = positive_int(doc, "m");
  const std::size_t p = positive_int(doc, "p");
  if (!doc.contains("A") || !doc["A"].is_array() || doc["A"].size() != p) {
    fail(ErrorKind::schema, fmt::format("\"A\" must be an array of p = {} matrices", p));
  }
  if (!doc.contains("Sigma")) fail(ErrorKind::schema, "\"Sigma\" is missing");

  VarModel model;
  for (std::size_t k = 0; k < p; ++k) {
    model.coefficients.push_back(parse_matrix(doc["A"][k], m, fmt::format("A[{}]", k + 1)));
  }
  model.sigma = parse_matrix(doc["Sigma"], m, "Sigma");
  if (!linalg::is_symmetric(model.sigma)) fail(ErrorKind::schema, "\"Sigma\" is not symmetric");
  return validate(std::move(model));
}

VarModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, fmt::format("cannot open model file '{}'", path.string()));
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::schema, fmt::format("model file '{}' is not valid JSON: {}", path.string(), e.what()));
  }
  return parse_model(doc);
}

Json model_to_json(const VarModel& model) {
  Json doc;
  doc["m"] = model.dim();
  doc["p"] = model.order();
  Json a = Json::array();
  for (const Matrix& coeff : model.coefficients) a.push_back(matrix_to_json(coeff));
  doc["A"] = std::move(a);
  doc["Sigma"] = matrix_to_json(model.sigma);
  return doc;
}

std::optional<ErrorKind> ResultTable::first_error() const {
  for (const ResultRow& row : rows) {
    if (row.error_kind) return row.error_kind;
  }
  return std::nullopt;
}

ResultTable run(const ExperimentSpec& spec) {
  const VarModel model = validate(spec.model);
  std::vector<std::size_t> targets = spec.targets;
  if (targets.empty()) {
    for (std::size_t j = 0; j < model.dim(); ++j) targets.push_back(j);
  }
  for (std::size_t j : targets) {
    if (j >= model.dim()) {
      fail(ErrorKind::parameter, fmt::format("target {} exceeds model dimension {}", j + 1, model.dim()));
    }
  }
  for (int tau : spec.taus) {
    if (tau < 1) fail(ErrorKind::parameter, "scale factors must be positive");
  }

  ResultTable table{spec.model_source, model, spec.oracle, {}};

  std::optional<TimeSeries> raw;
  if (spec.oracle) {
    raw = simulate(model, spec.oracle->samples, spec.oracle->seed);
  }

  for (Mode mode : spec.modes) {
    const std::vector<SweepRow> sweep = multiscale_sweep(model, spec.taus, mode, targets);
    for (std::size_t t = 0; t < spec.taus.size(); ++t) {
      const int tau = spec.taus[t];
      std::vector<InfoMeasures> oracle;
      std::size_t lags = 0;
      std::optional<ErrorKind> oracle_kind;
      std::string oracle_error;
      if (raw) {
        lags = spec.oracle->lags > 0 ? spec.oracle->lags
                                     : default_lag_order(model.order(), tau, mode);
        try {
          oracle = estimate_measures(coarse_grain(*raw, tau, mode), targets, lags,
                                     spec.oracle->ridge);
        } catch (const Error& e) {
          oracle_kind = e.kind();
          oracle_error = fmt::format("oracle: {}", e.what());
        }
      }
      for (std::size_t i = 0; i < targets.size(); ++i) {
        const SweepRow& s = sweep[t * targets.size() + i];
        ResultRow row;
        row.tau = tau;
        row.mode = mode;
        row.target = targets[i];
        row.analytic = s.measures;
        row.oracle_lags = lags;
        if (!oracle.empty()) row.oracle = oracle[i];
        if (s.error_kind) {
          row.error_kind = s.error_kind;
          row.error = s.error;
        } else if (oracle_kind) {
          row.error_kind = oracle_kind;
          row.error = oracle_error;
        }
        table.rows.push_back(std::move(row));
      }
    }
  }
  return table;
}

std::string to_csv(const ResultTable& table) {
  const bool with_oracle = table.oracle.has_value();
  std::string out =
      "scale,mode,target,lambda_full,lambda_own,lambda_all,storage_nats,transfer_nats,"
      "predictive_nats,storage_bits,transfer_bits";
  if (with_oracle) {
    out += ",oracle_lags,oracle_storage_nats,oracle_transfer_nats,storage_abs_dev,transfer_abs_dev";
  }
  out += ",status\n";

  for (const ResultRow& row : table.rows) {
    out += fmt::format("{},{},{}", row.tau, to_string(row.mode), row.target + 1);
    if (row.analytic) {
      const InfoMeasures& m = *row.analytic;
      const double s = clamp_report(m.storage);
      const double t = clamp_report(m.transfer);
      out += fmt::format(",{},{},{},{},{},{},{},{}", num(m.lambda_full), num(m.lambda_own),
                         num(m.lambda_all), num(s), num(t), num(clamp_report(m.predictive)),
                         num(s / std::numbers::ln2), num(t / std::numbers::ln2));
    } else {
      out += ",,,,,,,,";
    }
    if (with_oracle) {
      if (row.oracle) {
        const InfoMeasures& o = *row.oracle;
        out += fmt::format(",{},{},{}", row.oracle_lags, num(clamp_report(o.storage)),
                           num(clamp_report(o.transfer)));
        if (row.analytic) {
          out += fmt::format(",{},{}", num(std::abs(o.storage - row.analytic->storage)),
                             num(std::abs(o.transfer - row.analytic->transfer)));
        } else {
          out += ",,";
        }
      } else {
        out += ",,,,,";
      }
    }
    out += fmt::format(",{}\n", row.error_kind ? to_string(*row.error_kind) : "ok");
  }
  return out;
}

Json to_json(const ResultTable& table) {
  Json doc;
  doc["model_source"] = table.model_source;
  doc["model"] = model_to_json(table.model);
  Json meta;
  meta["log_base"] = "e";
  if (table.oracle) {
    Json oracle;
    oracle["generator"] = std::string(kGeneratorName);
    oracle["normal_sampler"] = std::string(kNormalSamplerName);
    oracle["samples"] = table.oracle->samples;
    oracle["seed"] = table.oracle->seed;
    oracle["burn_in"] = kDefaultBurnIn;
    oracle["lags"] = table.oracle->lags;
    oracle["ridge"] = table.oracle->ridge;
    meta["oracle"] = std::move(oracle);
  } else {
    meta["oracle"] = nullptr;
  }
  doc["metadata"] = std::move(meta);

  Json rows = Json::array();
  for (const ResultRow& row : table.rows) {
    Json r;
    r["scale"] = row.tau;
    r["mode"] = std::string(to_string(row.mode));
    r["target"] = row.target + 1;
    r["status"] = row.error_kind ? std::string(to_string(*row.error_kind)) : "ok";
    r["analytic"] = row.analytic ? measures_json(*row.analytic) : Json(nullptr);
    if (table.oracle) {
      Json o = row.oracle ? measures_json(*row.oracle) : Json(nullptr);
      if (row.oracle) o["lags"] = row.oracle_lags;
      r["oracle"] = std::move(o);
    }
    if (row.error_kind) r["error"] = row.error;
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

std::vector<int> parse_taus(std::string_view text) {
  std::vector<int> out;
  for (std::string_view token : split(text, ',')) {
    token = trim(token);
    const std::size_t dots = token.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(parse_number<int>(token, "scale"));
    } else {
      const int lo = parse_number<int>(token.substr(0, dots), "scale range start");
      const int hi = parse_number<int>(token.substr(dots + 2), "scale range end");
      if (hi < lo) fail(ErrorKind::parameter, fmt::format("empty scale range '{}'", token));
      for (int tau = lo; tau <= hi; ++tau) out.push_back(tau);
    }
  }
  for (int tau : out) {
    if (tau < 1) fail(ErrorKind::parameter, "scale factors must be positive");
  }
  return out;
}

std::vector<std::size_t> parse_targets(std::string_view text) {
  std::vector<std::size_t> out;
  for (std::string_view token : split(text, ',')) {
    const auto one_based = parse_number<long>(token, "target");
    if (one_based < 1) fail(ErrorKind::parameter, "targets are 1-based channel indices");
    out.push_back(static_cast<std::size_t>(one_based - 1));
  }
  return out;
}

std::vector<Mode> parse_modes(std::string_view text) {
  std::vector<Mode> out;
  for (std::string_view token : split(text, ',')) {
    const auto mode = parse_mode(trim(token));
    if (!mode) fail(ErrorKind::parameter, fmt::format("unknown mode '{}' (use avg, dws)", token));
    out.push_back(*mode);
  }
  return out;
}

OracleSpec parse_oracle(std::string_view text) {
  OracleSpec spec;
  for (std::string_view token : split(text, ',')) {
    token = trim(token);
    if (token.empty()) continue;
    const std::size_t eq = token.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorKind::parameter, fmt::format("oracle setting '{}' is not key=value", token));
    }
    const std::string_view key = trim(token.substr(0, eq));
    const std::string_view value = token.substr(eq + 1);
    if (key == "N" || key == "n" || key == "samples") {
      spec.samples = parse_number<std::size_t>(value, "oracle sample count");
    } else if (key == "seed") {
      spec.seed = parse_number<std::uint64_t>(value, "oracle seed");
    } else if (key == "lags") {
      spec.lags = parse_number<std::size_t>(value, "oracle lag order");
    } else if (key == "ridge") {
      spec.ridge = parse_number<double>(value, "oracle ridge");
    } else {
      fail(ErrorKind::parameter, fmt::format("unknown oracle setting '{}'", key));
    }
  }
  if (spec.samples < 1) fail(ErrorKind::parameter, "oracle sample count must be positive");
  return spec;
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::io: return 3;
    case ErrorKind::schema: return 4;
    case ErrorKind::instability:
    case ErrorKind::covariance: return 5;
    case ErrorKind::convergence:
    case ErrorKind::singularity:
    case ErrorKind::non_stabilizing:
    case ErrorKind::degeneracy:
    case ErrorKind::conditioning: return 6;
    case ErrorKind::parameter:
    case ErrorKind::length:
    case ErrorKind::size:
    case ErrorKind::dimension: return 7;
  }
  return kExitInternal;
}

Json error_json(ErrorKind kind, std::string_view message) {
  Json doc;
  doc["error"] = std::string(to_string(kind));
  doc["exit_code"] = exit_code(kind);
  doc["message"] = std::string(message);
  return doc;
}

void write_file_atomically(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += fmt::format(".tmp-{}", ::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io, fmt::format("cannot write '{}'", tmp.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      fail(ErrorKind::io, fmt::format("short write to '{}'", tmp.string()));
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(ErrorKind::io, fmt::format("cannot move output into '{}'", path.string()));
  }
}

}  // namespace msid::experiment
