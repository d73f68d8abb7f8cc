#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zodfo/trace.hpp"

namespace zodfo {

enum class ProblemKind { logistic, ridge, quadratic };
enum class SolverKind { varag, svrg, katyusha, nesterov };
enum class DataFormat { libsvm, csv };
enum class FstarMode { precompute, none };

// Exit codes shared by run_experiment and the command line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitDataError = 3;
inline constexpr int kExitDiverged = 4;

struct ExperimentConfig {
  // Problem.
  std::string dataset;  // file path; ignored for the synthetic quadratic
  DataFormat format = DataFormat::libsvm;
  int label_column = 0;  // csv only
  ProblemKind problem = ProblemKind::logistic;
  double lambda = 0.0;
  bool scale_features = false;
  int quad_dimension = 10;
  int quad_components = 100;
  double quad_tau = 0.1;
  double quad_smoothness = 1.0;

  // Solver.
  SolverKind solver = SolverKind::varag;
  bool gaussian_estimator = true;  // false selects coordinate estimates
  int pivot_option = 1;
  int epochs = 20;
  int batch = 1;
  double mu = 1e-3;
  double nu = 1e-3;
  std::optional<double> eta;
  double p0 = 0.5;
  std::uint64_t seed = 0;

  // Output.
  std::string out;  // trace file path; empty writes nothing
  FstarMode fstar = FstarMode::precompute;
  // Keep measured wall time in the trace file. Off by default so that runs
  // with the same config and seed produce byte-identical files.
  bool wall_time = false;
};

struct ExperimentResult {
  int exit_code = kExitOk;
  RunTrace trace;
  std::optional<double> fstar;
  std::string fstar_note;  // "analytic", "precomputed", "cap-exceeded" or ""
  std::string message;     // one-line summary, or the error text
};

// Runs one configuration end to end: build the problem, optionally
// precompute the reference optimum, run the solver, fill suboptimalities
// and write the trace file atomically. Never throws; failures land in
// exit_code/message. A diverged run still writes its partial trace.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/*! Grid manifests: blocks of `key=value` lines separated by blank lines,
 *  `#` starting a comment. Keys mirror the command line flag names with
 *  either '-' or '_' separators.
 */
std::vector<std::map<std::string, std::string>> parse_manifest(std::istream& in);

// Builds a config from manifest keys; throws std::invalid_argument on any
// unknown key or malformed value.
ExperimentConfig config_from_keys(const std::map<std::string, std::string>& keys);

struct GridEntryResult {
  int id = 0;  // 1-based position in the manifest
  ExperimentConfig config;
  ExperimentResult result;
};

struct GridResult {
  int exit_code = kExitOk;  // nonzero only when the manifest itself is unusable
  std::vector<GridEntryResult> entries;
  std::string index_path;
  std::string message;
};

// Runs every manifest entry (concurrently up to the ZODFO_THREADS cap, or
// the hardware concurrency) and writes <out_dir>/index.csv describing each
// run. Per-entry failures are recorded in the index and do not stop the
// remaining entries.
GridResult run_grid(const std::string& manifest_path, const std::string& out_dir);

}  // namespace zodfo
