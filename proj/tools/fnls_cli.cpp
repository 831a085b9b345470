#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "fnls/error.hpp"
#include "fnls/experiments.hpp"

namespace {

struct RunOptions {
  std::string config_path;
  std::string out_dir = "results";
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  bool dump_traces = false;
};

void print_schema() {
  for (const auto& kind : fnls::experiment_kinds()) {
    std::cout << kind << ": " << fnls::describe_experiment(kind) << "\n";
    for (const auto& p : fnls::experiment_schema(kind))
      std::cout << "  " << p.key << " = " << p.default_value.dump() << "  (" << p.description << ")\n";
  }
}

int run(const std::string& kind, const RunOptions& opts) {
  nlohmann::json doc = nlohmann::json::object();
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path);
    if (!in) throw fnls::ConfigError("cannot open config " + opts.config_path);
    doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw fnls::ConfigError("config is not valid JSON: " + opts.config_path);
  }
  auto base = fnls::experiment_config_from_json(kind, doc);
  nlohmann::json params = doc.value("params", nlohmann::json::object());
  for (const auto& o : opts.overrides) fnls::apply_override(params, o);
  auto cfg = fnls::make_experiment_config(kind, params, opts.seed.value_or(base.seed), opts.out_dir);
  cfg.dump_traces = opts.dump_traces;
  const auto rec = fnls::run_experiment(cfg);
  std::printf("%s: %s%s (%.0f ms) -> %s\n", kind.c_str(), rec.pass ? "PASS" : "FAIL", rec.valid ? "" : " [invalid]",
              rec.wall_ms, opts.out_dir.c_str());
  if (rec.fit) std::printf("  slope %.6g, residual %.3g\n", rec.fit->slope, rec.fit->residual);
  std::printf("  %s\n", rec.diagnostics.dump().c_str());
  return rec.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments for fourth-order Schrodinger equations with derivative nonlinearities"};
  app.require_subcommand(1);
  app.add_subcommand("list", "print every experiment kind with its parameters and defaults");

  RunOptions opts;
  for (const auto& kind : fnls::experiment_kinds()) {
    auto* sub = app.add_subcommand(kind, fnls::describe_experiment(kind));
    sub->add_option("--config", opts.config_path, "JSON file with optional kind, seed and params");
    sub->add_option("--out", opts.out_dir, "output directory for results.csv and summary.json");
    sub->add_option("--seed", opts.seed, "random seed (overrides the config)");
    sub->add_option("--override", opts.overrides, "parameter override key=value (repeatable)");
    sub->add_flag("--dump-traces", opts.dump_traces, "write solver traces next to the results");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto* chosen = app.get_subcommands().front();
  if (chosen->get_name() == "list") {
    print_schema();
    return 0;
  }
  try {
    return run(chosen->get_name(), opts);
  } catch (const fnls::NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
