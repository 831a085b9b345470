#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fnls {

struct SlopeFit {
  double slope;
  double residual;  // RMS of the log-space residuals
};

// Least squares on (log x, log y); needs >= 3 points, all positive.
SlopeFit fit_slope(std::span<const double> xs, std::span<const double> ys);

struct ParamSpec {
  std::string key;
  nlohmann::json default_value;
  std::string description;
};

struct ExperimentConfig {
  std::string kind;
  nlohmann::json params;  // fully resolved, defaults filled in
  std::uint64_t seed = 1;
  std::string out_dir;    // empty: nothing written
  bool dump_traces = false;
};

struct Column {
  std::string name;
  std::string unit;
};

struct ResultRecord {
  nlohmann::json config;
  std::vector<Column> columns;
  std::vector<std::vector<double>> rows;
  std::optional<SlopeFit> fit;
  bool pass = false;
  bool valid = true;  // false when a validity diagnostic failed; pass is then false too
  nlohmann::json diagnostics = nlohmann::json::object();
  double wall_ms = 0.0;
};

const std::vector<std::string>& experiment_kinds();
const std::vector<ParamSpec>& experiment_schema(const std::string& kind);
std::string describe_experiment(const std::string& kind);

// Merges `params` over the schema defaults; unknown keys and type mismatches throw ConfigError.
ExperimentConfig make_experiment_config(const std::string& kind, const nlohmann::json& params, std::uint64_t seed,
                                        std::string out_dir = {});

// Reads {"kind", "seed", "params"} (all optional) from a JSON document.
ExperimentConfig experiment_config_from_json(const std::string& kind, const nlohmann::json& doc);

// "key=value" with value parsed as JSON, falling back to a plain string.
void apply_override(nlohmann::json& params, const std::string& assignment);

// Runs the experiment; when out_dir is set writes results.csv and summary.json there.
ResultRecord run_experiment(const ExperimentConfig& cfg);

void write_results_csv(const ResultRecord& rec, const std::string& path);
nlohmann::json summary_json(const ResultRecord& rec);

}  // namespace fnls
