#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace ardlkit {

/// Stage identifiers in execution order.
inline const std::vector<std::string> kStages = {"describe",      "unit_root",     "var_select", "cointegration",
                                                 "ardl",          "toda_yamamoto", "structural"};

struct TransformSpec {
  std::string source;
  std::string kind;  // log, diff, logdiff
  std::string name;  // defaults to ln_/d_/dln_ prefix
};

struct UnitRootPanel {
  std::string name;
  std::vector<std::string> series;
  std::string deterministic = "ct";  // c or ct, for ADF/DF-GLS/PP/KPSS/ERS
};

struct ArdlModelSpec {
  std::string dependent;
  std::vector<std::string> regressors;
};

/// Declarative run description. Every field has a default so a partial file
/// is valid; unknown keys are rejected.
struct PipelineConfig {
  int schema_version = 1;
  std::filesystem::path data_path;
  std::string data_url;
  std::string date_column = "date";
  std::vector<std::string> columns;  // empty -> every non-date column
  std::vector<TransformSpec> transforms;
  std::string output_dir = "bundle";
  std::uint64_t seed = 42;
  int threads = 1;
  std::vector<std::string> stages = kStages;

  std::vector<std::string> describe_series;
  int describe_lags = 10;

  std::vector<UnitRootPanel> unit_root_panels;
  std::vector<std::string> unit_root_tests = {"adf", "dfgls", "pp", "kpss", "ers",
                                              "perron_io", "perron_ao", "za", "ls_crash", "ls_break"};
  std::string unit_root_criterion = "sic";
  int unit_root_max_lag = -1;
  double level = 0.05;

  std::vector<std::string> var_variables;
  int var_max_lag = 12;
  std::string var_deterministic = "const_trend";

  std::vector<std::string> coint_variables;
  std::string residual_deterministic = "none";
  int johansen_case = 1;
  int johansen_var_lags = 2;
  std::vector<std::string> gh_models = {"level", "regime", "regime_trend"};
  double gh_trimming = 0.15;

  std::vector<ArdlModelSpec> ardl_models;
  int ardl_max_p = 8;
  int ardl_max_q = 8;
  std::string ardl_criterion = "aic";
  std::string ardl_case = "no_const";
  std::string ardl_covariance = "hac";
  std::string bounds_source = "pesaran_asymptotic";
  int ardl_serial_lags = 2;
  int ardl_arch_lags = 1;
  double cusum_level = 0.05;

  std::vector<std::string> ty_variables;
  std::optional<int> ty_k;      // nullopt -> AIC choice of var_select
  std::optional<int> ty_d_max;  // nullopt -> max_integration_order
  std::string ty_deterministic = "const";
  int portmanteau_lags = 7;
  int ty_serial_lags = 7;

  int horizon = 24;
  std::vector<std::string> ordering;
  std::string bands = "analytic";
  int band_replications = 1000;

  /// Relative paths in the file resolve against `base_dir`.
  static PipelineConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static PipelineConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

struct StageOutcome {
  std::string stage;
  bool ok = true;
  bool skipped = false;
  std::string error;
};

struct ReportBundle {
  std::filesystem::path dir;
  std::map<std::string, std::string> artifacts;  // file name -> content
  std::vector<StageOutcome> stages;
  nlohmann::json manifest;

  bool ok() const;
  std::vector<std::string> failed_stages() const;
};

/// Output directory: $ARDLKIT_OUTPUT_ROOT/output_dir when the variable is
/// set, otherwise output_dir as given.
std::filesystem::path resolve_output_dir(const PipelineConfig& config);

/// Runs every selected stage and writes the artifacts plus manifest.json.
/// A stage that throws is recorded; stages depending on it are skipped.
ReportBundle run_pipeline(const PipelineConfig& config);
/// As run_pipeline without touching the file system.
ReportBundle build_bundle(const PipelineConfig& config);
void write_bundle(const ReportBundle& bundle);

std::string sha256_hex(const std::string& bytes);

struct FetchResult {
  std::filesystem::path path;
  std::string sha256;
  std::size_t bytes = 0;
  std::vector<std::string> header;
};

/// Downloads a CSV. HTML or malformed bodies raise SchemaError; transport
/// failures and non-2xx replies raise NetworkError.
FetchResult fetch(const std::string& url, const std::filesystem::path& out);
/// Content checks applied by fetch, exposed for reuse.
std::vector<std::string> validate_csv_body(const std::string& body);

enum class PlotFormat { Csv, Svg };

/// Renders the plot-data files found in `bundle_dir` into bundle_dir/plots.
/// Returns the written paths; MissingArtifact when none is present.
std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& bundle_dir, PlotFormat format);

}  // namespace ardlkit
