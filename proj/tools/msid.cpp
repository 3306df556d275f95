// msid: multiscale information dynamics of VAR processes.
//
//   msid run --preset uni --taus 1..20 --modes avg,dws
//   msid run --model model.json --oracle N=1000000,seed=3 --format json --output out.json
//   msid presets
//   msid preset bi

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "msid/experiment.hpp"

namespace ex = msid::experiment;

namespace {

struct RunOptions {
  std::string model_path;
  std::string preset;
  std::string taus = "1";
  std::string modes = "avg,dws";
  std::string targets;
  std::string oracle;
  std::optional<std::uint64_t> seed;
  std::string output;
  std::string format = "csv";
  std::string error_json;
};

void report_error(const std::string& error_json, msid::ErrorKind kind, const std::string& msg,
                  int code) {
  std::cerr << "msid: " << msid::to_string(kind) << ": " << msg << '\n';
  if (error_json.empty()) return;
  ex::Json doc = ex::error_json(kind, msg);
  doc["exit_code"] = code;
  if (error_json == "-") {
    std::cerr << doc.dump(2) << '\n';
    return;
  }
  std::ofstream out(error_json, std::ios::trunc);
  out << doc.dump(2) << '\n';
}

ex::ExperimentSpec build_spec(const RunOptions& opt) {
  ex::ExperimentSpec spec;
  if (!opt.preset.empty()) {
    spec.model_source = "preset:" + opt.preset;
    spec.model = ex::preset(opt.preset);
  } else {
    spec.model_source = opt.model_path;
    spec.model = ex::load_model(opt.model_path);
  }
  spec.taus = ex::parse_taus(opt.taus);
  spec.modes = ex::parse_modes(opt.modes);
  if (!opt.targets.empty()) spec.targets = ex::parse_targets(opt.targets);
  if (!opt.oracle.empty()) spec.oracle = ex::parse_oracle(opt.oracle);
  if (opt.seed) {
    if (!spec.oracle) msid::fail(msid::ErrorKind::parameter, "--seed only applies with --oracle");
    spec.oracle->seed = *opt.seed;
  }
  return spec;
}

// Flag values that fail to parse are usage errors; everything after the
// model is loaded keeps its own category.
int run_command(const RunOptions& opt) {
  std::optional<ex::ExperimentSpec> spec;
  try {
    spec = build_spec(opt);
  } catch (const msid::Error& e) {
    const int code =
        e.kind() == msid::ErrorKind::parameter ? ex::kExitUsage : ex::exit_code(e.kind());
    report_error(opt.error_json, e.kind(), e.what(), code);
    return code;
  }

  ex::ResultTable table;
  try {
    table = ex::run(*spec);
  } catch (const msid::Error& e) {
    const int code = ex::exit_code(e.kind());
    report_error(opt.error_json, e.kind(), e.what(), code);
    return code;
  }

  const std::string text = opt.format == "json" ? ex::to_json(table).dump(2) + "\n"
                                                : ex::to_csv(table);
  try {
    if (opt.output.empty()) {
      std::fwrite(text.data(), 1, text.size(), stdout);
      std::fflush(stdout);
    } else {
      ex::write_file_atomically(opt.output, text);
    }
  } catch (const msid::Error& e) {
    const int code = ex::exit_code(e.kind());
    report_error(opt.error_json, e.kind(), e.what(), code);
    return code;
  }

  // The table is complete even when some scales failed; their rows carry the
  // error status and the exit code reports the first failure.
  if (const auto kind = table.first_error()) {
    for (const ex::ResultRow& row : table.rows) {
      if (row.error_kind) {
        const int code = ex::exit_code(*kind);
        report_error(opt.error_json, *kind,
                     fmt::format("tau={} mode={} target={}: {}", row.tau,
                                 msid::to_string(row.mode), row.target + 1, row.error),
                     code);
        return code;
      }
    }
  }
  return ex::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiscale storage and transfer entropy of linear Gaussian VAR processes"};
  app.require_subcommand(1);

  RunOptions opt;
  CLI::App* run = app.add_subcommand("run", "Sweep scales and report information measures");
  auto* model_opt = run->add_option("--model", opt.model_path, "VAR model JSON file");
  auto* preset_opt = run->add_option("--preset", opt.preset, "Built-in model (uni, bi, uni-strong)");
  model_opt->excludes(preset_opt);
  preset_opt->excludes(model_opt);
  run->add_option("--taus", opt.taus, "Scale list or range, e.g. 1..20 or 1,2,5")
      ->capture_default_str();
  run->add_option("--modes", opt.modes, "Processing modes: avg, dws")->capture_default_str();
  run->add_option("--targets", opt.targets, "1-based target channels (default all)");
  run->add_option("--oracle", opt.oracle,
                  "Empirical cross-check, e.g. N=1000000,seed=1,lags=0,ridge=0");
  run->add_option("--seed", opt.seed, "Oracle seed (overrides seed= in --oracle)");
  run->add_option("--output", opt.output, "Output path (default stdout)");
  run->add_option("--format", opt.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  run->add_option("--error-json", opt.error_json, "Write a JSON error report here ('-' for stderr)");

  CLI::App* presets = app.add_subcommand("presets", "List built-in models");
  std::string preset_name;
  CLI::App* show = app.add_subcommand("preset", "Print a built-in model as JSON");
  show->add_option("name", preset_name, "Preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ex::kExitOk : ex::kExitUsage;
  }

  try {
    if (*run) {
      if (opt.model_path.empty() && opt.preset.empty()) {
        std::cerr << "msid run: one of --model or --preset is required\n";
        return ex::kExitUsage;
      }
      return run_command(opt);
    }
    if (*presets) {
      for (const std::string& name : ex::preset_names()) std::cout << name << '\n';
      return ex::kExitOk;
    }
    if (*show) {
      if (!ex::preset_config(preset_name)) {
        std::cerr << fmt::format("msid preset: unknown preset '{}'\n", preset_name);
        return ex::kExitUsage;
      }
      std::cout << ex::model_to_json(ex::preset(preset_name)).dump(2) << '\n';
      return ex::kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "msid: internal error: " << e.what() << '\n';
    return ex::kExitInternal;
  }
  return ex::kExitInternal;
}
