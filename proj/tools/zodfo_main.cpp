#include <cstdio>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "zodfo/experiment.hpp"

namespace {

// Every value flag lands in a key=value map and goes through the same
// config_from_keys path the grid manifest uses, so flag strings and manifest
// keys cannot drift apart.
void add_value_flag(CLI::App* cmd, std::map<std::string, std::string>* keys,
                    const std::string& flag, const std::string& key,
                    const std::string& description) {
  cmd->add_option_function<std::string>(
      flag, [keys, key](const std::string& value) { (*keys)[key] = value; },
      description);
}

int run_command(const std::map<std::string, std::string>& keys) {
  zodfo::ExperimentConfig cfg;
  try {
    cfg = zodfo::config_from_keys(keys);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return zodfo::kExitConfigError;
  }
  const zodfo::ExperimentResult result = zodfo::run_experiment(cfg);
  if (result.exit_code == zodfo::kExitOk ||
      result.exit_code == zodfo::kExitDiverged) {
    std::printf("%s\n", result.message.c_str());
    if (!cfg.out.empty()) std::printf("trace written to %s\n", cfg.out.c_str());
  } else {
    std::fprintf(stderr, "error: %s\n", result.message.c_str());
  }
  return result.exit_code;
}

int grid_command(const std::string& manifest, const std::string& out_dir) {
  const zodfo::GridResult grid = zodfo::run_grid(manifest, out_dir);
  if (grid.exit_code != zodfo::kExitOk) {
    std::fprintf(stderr, "error: %s\n", grid.message.c_str());
    return grid.exit_code;
  }
  for (const zodfo::GridEntryResult& entry : grid.entries) {
    std::printf("[%d] %s\n", entry.id, entry.result.message.c_str());
  }
  std::printf("%s\n", grid.message.c_str());
  return grid.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Derivative-free finite-sum optimization benchmarks"};
  app.require_subcommand(1);

  std::map<std::string, std::string> keys;
  CLI::App* run = app.add_subcommand("run", "Run one solver configuration");
  add_value_flag(run, &keys, "--dataset", "dataset", "Dataset file path");
  add_value_flag(run, &keys, "--format", "format", "Dataset format: libsvm|csv (default libsvm)");
  add_value_flag(run, &keys, "--label-column", "label_column", "CSV label column, 0-based (default 0)");
  add_value_flag(run, &keys, "--problem", "problem", "logistic|ridge|quadratic (default logistic)");
  add_value_flag(run, &keys, "--lambda", "lambda", "Regularization weight (default 0)");
  add_value_flag(run, &keys, "--quad-d", "quad_d", "Synthetic quadratic dimension (default 10)");
  add_value_flag(run, &keys, "--quad-n", "quad_n", "Synthetic quadratic component count (default 100)");
  add_value_flag(run, &keys, "--quad-tau", "quad_tau", "Synthetic quadratic strong convexity (default 0.1)");
  add_value_flag(run, &keys, "--quad-smoothness", "quad_smoothness", "Synthetic quadratic smoothness (default 1)");
  add_value_flag(run, &keys, "--solver", "solver", "zo-varag|zo-svrg|zo-katyusha|zo-nesterov (default zo-varag)");
  add_value_flag(run, &keys, "--estimator", "estimator", "gaussian|coordinate, zo-varag only (default gaussian)");
  add_value_flag(run, &keys, "--pivot", "pivot", "Pivot option 1 (epoch average) or 2 (last aggregate)");
  add_value_flag(run, &keys, "--epochs", "epochs", "Number of epochs (default 20)");
  add_value_flag(run, &keys, "--batch", "batch", "Minibatch size (default 1)");
  add_value_flag(run, &keys, "--mu", "mu", "Gaussian smoothing radius (default 1e-3)");
  add_value_flag(run, &keys, "--nu", "nu", "Coordinate smoothing radius (default 1e-3)");
  add_value_flag(run, &keys, "--eta", "eta", "Equivalent stepsize override");
  add_value_flag(run, &keys, "--p0", "p0", "Pivot weight / Katyusha momentum (default 0.5)");
  add_value_flag(run, &keys, "--seed", "seed", "Random seed (default 0)");
  add_value_flag(run, &keys, "--out", "out", "Trace CSV output path");
  add_value_flag(run, &keys, "--fstar", "fstar", "precompute|none (default precompute)");
  run->add_flag_function(
      "--scale-features",
      [&keys](std::int64_t) { keys["scale_features"] = "1"; },
      "Scale features so the largest row norm is 1");
  run->add_flag_function(
      "--wall-time",
      [&keys](std::int64_t) { keys["wall_time"] = "1"; },
      "Record measured wall time in the trace (breaks byte-level reproducibility)");

  std::string manifest;
  std::string out_dir;
  CLI::App* grid = app.add_subcommand("grid", "Run every entry of a manifest");
  grid->add_option("--manifest", manifest, "Manifest of key=value blocks")->required();
  grid->add_option("--out-dir", out_dir, "Directory for traces and index.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : zodfo::kExitConfigError;
  }

  if (run->parsed()) return run_command(keys);
  if (grid->parsed()) return grid_command(manifest, out_dir);
  return zodfo::kExitConfigError;
}
