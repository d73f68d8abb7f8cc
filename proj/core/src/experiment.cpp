#include "zodfo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>
#include <thread>

#include "zodfo/baselines.hpp"
#include "zodfo/dataset_io.hpp"
#include "zodfo/problems.hpp"
#include "zodfo/varag.hpp"

namespace zodfo {

namespace {

constexpr double kFstarTolerance = 1e-10;
constexpr std::int64_t kFstarIterationCap = 1'000'000;

double parse_double_or_throw(const std::string& key, const std::string& value) {
  double v = 0.0;
  std::string_view text = value;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("config: bad number for '" + key + "': " + value);
  }
  return v;
}

std::int64_t parse_int_or_throw(const std::string& key, const std::string& value) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw std::invalid_argument("config: bad integer for '" + key + "': " + value);
  }
  return v;
}

bool parse_bool_or_throw(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true") return true;
  if (value == "0" || value == "false") return false;
  throw std::invalid_argument("config: bad boolean for '" + key + "': " + value);
}

FiniteSumObjective build_objective(const ExperimentConfig& cfg,
                                   std::optional<double>& analytic_fstar) {
  if (cfg.problem == ProblemKind::quadratic) {
    QuadraticProblem problem =
        quadratic_objective(cfg.quad_dimension, cfg.quad_components,
                            cfg.quad_tau, cfg.quad_smoothness, cfg.seed);
    analytic_fstar = problem.f_star;
    return std::move(problem.objective);
  }

  if (cfg.dataset.empty()) {
    throw std::invalid_argument("config: dataset path is required");
  }
  std::ifstream in(cfg.dataset);
  if (!in) {
    throw ParseError(0, 0, "cannot open dataset file: " + cfg.dataset);
  }
  Dataset data = cfg.format == DataFormat::libsvm
                     ? parse_libsvm(in)
                     : parse_dense_csv(in, cfg.label_column);
  if (cfg.scale_features) scale_features_max_norm(data);
  return cfg.problem == ProblemKind::logistic
             ? logistic_objective(data, cfg.lambda)
             : ridge_objective(data, cfg.lambda);
}

RunTrace dispatch_solver(const ExperimentConfig& cfg,
                         const FiniteSumObjective& obj) {
  // The synthetic quadratic has its optimum at the origin, so start on the
  // unit sphere instead; data problems keep the conventional zero start.
  Vector start;
  if (cfg.problem == ProblemKind::quadratic) {
    start = Vector::Ones(obj.dimension());
    start /= start.norm();
  }

  if (cfg.solver == SolverKind::varag) {
    const double tau = obj.strong_convexity();
    const Regime regime =
        cfg.gaussian_estimator
            ? (tau > 0.0 ? Regime::gaussian_strongly_convex
                         : Regime::gaussian_convex)
            : (tau > 0.0 ? Regime::coordinate_strongly_convex
                         : Regime::coordinate_convex);
    ScheduleOptions options;
    options.eta = cfg.eta;
    options.p0 = cfg.p0;
    VaragConfig solver_cfg(make_schedule(regime, obj.dimension(),
                                         obj.component_count(), obj.smoothness(),
                                         tau, cfg.batch, options));
    solver_cfg.pivot = cfg.pivot_option == 1 ? PivotOption::averaged
                                             : PivotOption::aggregate;
    solver_cfg.epochs = cfg.epochs;
    solver_cfg.seed = cfg.seed;
    solver_cfg.estimator = EstimatorConfig{cfg.mu, cfg.nu};
    solver_cfg.start = start;
    return zo_varag(obj, solver_cfg);
  }

  if (!cfg.gaussian_estimator) {
    throw std::invalid_argument(
        "config: the coordinate estimator applies to zo-varag only");
  }
  BaselineConfig solver_cfg;
  solver_cfg.epochs = cfg.epochs;
  solver_cfg.batch = cfg.batch;
  solver_cfg.seed = cfg.seed;
  solver_cfg.estimator = EstimatorConfig{cfg.mu, cfg.nu};
  solver_cfg.eta = cfg.eta;
  solver_cfg.p0 = cfg.p0;
  solver_cfg.start = start;
  switch (cfg.solver) {
    case SolverKind::svrg:
      return zo_svrg(obj, solver_cfg);
    case SolverKind::katyusha:
      return zo_katyusha(obj, solver_cfg);
    case SolverKind::nesterov:
      return zo_nesterov(obj, solver_cfg);
    case SolverKind::varag:
      break;
  }
  throw std::logic_error("config: unknown solver");
}

void check_numeric_ranges(const ExperimentConfig& cfg) {
  if (cfg.epochs < 1) throw std::invalid_argument("config: epochs must be >= 1");
  if (cfg.batch < 1) throw std::invalid_argument("config: batch must be >= 1");
  if (!(cfg.mu > 0.0)) throw std::invalid_argument("config: mu must be > 0");
  if (!(cfg.nu > 0.0)) throw std::invalid_argument("config: nu must be > 0");
  if (cfg.eta && !(*cfg.eta > 0.0)) {
    throw std::invalid_argument("config: eta must be > 0");
  }
  if (!(cfg.p0 > 0.0) || cfg.p0 >= 1.0) {
    throw std::invalid_argument("config: p0 must lie in (0, 1)");
  }
  if (cfg.lambda < 0.0) throw std::invalid_argument("config: lambda must be >= 0");
  if (cfg.pivot_option != 1 && cfg.pivot_option != 2) {
    throw std::invalid_argument("config: pivot must be 1 or 2");
  }
  if (cfg.label_column < 0) {
    throw std::invalid_argument("config: label column must be >= 0");
  }
}

// Temp-then-rename so readers never observe a half-written file.
void write_file_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    if (ec) {
      throw std::runtime_error("cannot create directory " +
                               target.parent_path().string() + ": " + ec.message());
    }
  }
  const fs::path temp = target.string() + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + temp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + temp.string());
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) {
    throw std::runtime_error("cannot rename " + temp.string() + " to " +
                             target.string() + ": " + ec.message());
  }
}

std::string csv_quote(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (const char c : text) {
    if (c == '"') quoted += "\"\"";
    else quoted += c;
  }
  quoted += '"';
  return quoted;
}

unsigned grid_concurrency(std::size_t entries) {
  unsigned cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ZODFO_THREADS")) {
    const std::string value(env);
    const std::int64_t parsed = parse_int_or_throw("ZODFO_THREADS", value);
    if (parsed < 1) {
      throw std::invalid_argument("config: ZODFO_THREADS must be >= 1");
    }
    cap = static_cast<unsigned>(std::min<std::int64_t>(parsed, 1024));
  }
  return static_cast<unsigned>(
      std::min<std::size_t>(cap, std::max<std::size_t>(entries, 1)));
}

std::string solver_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::varag: return "zo-varag";
    case SolverKind::svrg: return "zo-svrg";
    case SolverKind::katyusha: return "zo-katyusha";
    case SolverKind::nesterov: return "zo-nesterov";
  }
  return "?";
}

std::string problem_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::logistic: return "logistic";
    case ProblemKind::ridge: return "ridge";
    case ProblemKind::quadratic: return "quadratic";
  }
  return "?";
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult result;
  try {
    check_numeric_ranges(cfg);

    std::optional<double> analytic_fstar;
    const FiniteSumObjective obj = build_objective(cfg, analytic_fstar);

    if (cfg.fstar == FstarMode::precompute) {
      if (analytic_fstar) {
        result.fstar = analytic_fstar;
        result.fstar_note = "analytic";
      } else {
        const ReferenceOptimum ref =
            reference_optimum(obj, kFstarTolerance, kFstarIterationCap);
        if (ref.converged) {
          result.fstar = ref.f;
          result.fstar_note = "precomputed";
        } else {
          result.fstar_note = "cap-exceeded";
        }
      }
    }

    result.trace = dispatch_solver(cfg, obj);
    if (result.fstar) {
      for (TraceRecord& record : result.trace.records) {
        record.subopt = record.f_value - *result.fstar;
      }
    }
    if (!cfg.wall_time) {
      for (TraceRecord& record : result.trace.records) record.elapsed_ms = 0.0;
    }

    if (!cfg.out.empty()) {
      std::ostringstream csv;
      write_trace_csv(result.trace.records, csv);
      write_file_atomically(cfg.out, csv.str());
    }

    std::ostringstream summary;
    summary << result.trace.solver << ": ";
    if (result.trace.records.empty()) {
      summary << "no completed epochs";
    } else {
      const TraceRecord& last = result.trace.records.back();
      summary << "f=" << format_double(last.f_value);
      if (last.subopt) summary << " subopt=" << format_double(*last.subopt);
      summary << " queries=" << last.queries << " epochs=" << last.epoch;
    }
    if (result.trace.status == RunStatus::diverged) {
      summary << " DIVERGED (" << result.trace.diagnostic << ")";
      result.exit_code = kExitDiverged;
    }
    if (result.fstar_note == "cap-exceeded") {
      summary << " [reference optimum hit its iteration cap; suboptimality omitted]";
    }
    result.message = summary.str();
    return result;
  } catch (const ParseError& e) {
    result.exit_code = kExitDataError;
    result.message = e.what();
    return result;
  } catch (const std::invalid_argument& e) {
    result.exit_code = kExitConfigError;
    result.message = e.what();
    return result;
  } catch (const std::exception& e) {
    result.exit_code = kExitDataError;
    result.message = e.what();
    return result;
  }
}

std::vector<std::map<std::string, std::string>> parse_manifest(std::istream& in) {
  std::vector<std::map<std::string, std::string>> entries;
  std::map<std::string, std::string> current;
  std::string line;
  std::size_t lineno = 0;
  auto flush = [&] {
    if (!current.empty()) {
      entries.push_back(current);
      current.clear();
    }
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::size_t begin = line.find_first_not_of(" \t");
    if (begin == std::string::npos) {
      flush();  // blank line separates entries
      continue;
    }
    const std::size_t end = line.find_last_not_of(" \t");
    const std::string trimmed = line.substr(begin, end - begin + 1);
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("manifest line " + std::to_string(lineno) +
                                  ": expected key=value");
    }
    std::string key = trimmed.substr(0, eq);
    std::string value = trimmed.substr(eq + 1);
    const auto strip = [](std::string& s) {
      const std::size_t b = s.find_first_not_of(" \t");
      if (b == std::string::npos) {
        s.clear();
        return;
      }
      const std::size_t e = s.find_last_not_of(" \t");
      s = s.substr(b, e - b + 1);
    };
    strip(key);
    strip(value);
    for (char& c : key) {
      if (c == '-') c = '_';
    }
    if (current.count(key)) {
      throw std::invalid_argument("manifest line " + std::to_string(lineno) +
                                  ": duplicate key '" + key + "'");
    }
    current[key] = value;
  }
  flush();
  return entries;
}

ExperimentConfig config_from_keys(const std::map<std::string, std::string>& keys) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : keys) {
    if (key == "dataset") {
      cfg.dataset = value;
    } else if (key == "format") {
      if (value == "libsvm") cfg.format = DataFormat::libsvm;
      else if (value == "csv") cfg.format = DataFormat::csv;
      else throw std::invalid_argument("config: unknown format '" + value + "'");
    } else if (key == "label_column") {
      cfg.label_column = static_cast<int>(parse_int_or_throw(key, value));
    } else if (key == "problem") {
      if (value == "logistic") cfg.problem = ProblemKind::logistic;
      else if (value == "ridge") cfg.problem = ProblemKind::ridge;
      else if (value == "quadratic") cfg.problem = ProblemKind::quadratic;
      else throw std::invalid_argument("config: unknown problem '" + value + "'");
    } else if (key == "lambda") {
      cfg.lambda = parse_double_or_throw(key, value);
    } else if (key == "scale_features") {
      cfg.scale_features = parse_bool_or_throw(key, value);
    } else if (key == "quad_d") {
      cfg.quad_dimension = static_cast<int>(parse_int_or_throw(key, value));
    } else if (key == "quad_n") {
      cfg.quad_components = static_cast<int>(parse_int_or_throw(key, value));
    } else if (key == "quad_tau") {
      cfg.quad_tau = parse_double_or_throw(key, value);
    } else if (key == "quad_smoothness") {
      cfg.quad_smoothness = parse_double_or_throw(key, value);
    } else if (key == "solver") {
      if (value == "zo-varag") cfg.solver = SolverKind::varag;
      else if (value == "zo-svrg") cfg.solver = SolverKind::svrg;
      else if (value == "zo-katyusha") cfg.solver = SolverKind::katyusha;
      else if (value == "zo-nesterov") cfg.solver = SolverKind::nesterov;
      else throw std::invalid_argument("config: unknown solver '" + value + "'");
    } else if (key == "estimator") {
      if (value == "gaussian") cfg.gaussian_estimator = true;
      else if (value == "coordinate") cfg.gaussian_estimator = false;
      else throw std::invalid_argument("config: unknown estimator '" + value + "'");
    } else if (key == "pivot") {
      cfg.pivot_option = static_cast<int>(parse_int_or_throw(key, value));
    } else if (key == "epochs") {
      cfg.epochs = static_cast<int>(parse_int_or_throw(key, value));
    } else if (key == "batch") {
      cfg.batch = static_cast<int>(parse_int_or_throw(key, value));
    } else if (key == "mu") {
      cfg.mu = parse_double_or_throw(key, value);
    } else if (key == "nu") {
      cfg.nu = parse_double_or_throw(key, value);
    } else if (key == "eta") {
      cfg.eta = parse_double_or_throw(key, value);
    } else if (key == "p0") {
      cfg.p0 = parse_double_or_throw(key, value);
    } else if (key == "seed") {
      const std::int64_t v = parse_int_or_throw(key, value);
      if (v < 0) throw std::invalid_argument("config: seed must be >= 0");
      cfg.seed = static_cast<std::uint64_t>(v);
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "fstar") {
      if (value == "precompute") cfg.fstar = FstarMode::precompute;
      else if (value == "none") cfg.fstar = FstarMode::none;
      else throw std::invalid_argument("config: unknown fstar mode '" + value + "'");
    } else if (key == "wall_time") {
      cfg.wall_time = parse_bool_or_throw(key, value);
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

GridResult run_grid(const std::string& manifest_path, const std::string& out_dir) {
  namespace fs = std::filesystem;
  GridResult grid;
  std::vector<std::map<std::string, std::string>> raw_entries;
  try {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("cannot open manifest: " + manifest_path);
    raw_entries = parse_manifest(in);
    if (raw_entries.empty()) {
      throw std::invalid_argument("manifest has no entries");
    }
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
      throw std::runtime_error("cannot create output directory " + out_dir + ": " +
                               ec.message());
    }
  } catch (const std::invalid_argument& e) {
    grid.exit_code = kExitConfigError;
    grid.message = e.what();
    return grid;
  } catch (const std::exception& e) {
    grid.exit_code = kExitDataError;
    grid.message = e.what();
    return grid;
  }

  grid.entries.resize(raw_entries.size());
  unsigned workers = 1;
  try {
    workers = grid_concurrency(raw_entries.size());
  } catch (const std::invalid_argument& e) {
    grid.exit_code = kExitConfigError;
    grid.message = e.what();
    return grid;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= raw_entries.size()) return;
      GridEntryResult& slot = grid.entries[k];
      slot.id = static_cast<int>(k + 1);
      try {
        slot.config = config_from_keys(raw_entries[k]);
        if (slot.config.out.empty()) {
          slot.config.out =
              (fs::path(out_dir) / ("run_" + std::to_string(slot.id) + ".csv"))
                  .string();
        } else if (fs::path(slot.config.out).is_relative()) {
          slot.config.out = (fs::path(out_dir) / slot.config.out).string();
        }
        slot.result = run_experiment(slot.config);
      } catch (const std::invalid_argument& e) {
        slot.result.exit_code = kExitConfigError;
        slot.result.message = e.what();
      } catch (const std::exception& e) {
        slot.result.exit_code = kExitDataError;
        slot.result.message = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  std::ostringstream index;
  index << "id,status,solver,problem,seed,out,final_f,subopt,queries,fstar,"
           "fstar_mode,error\n";
  for (const GridEntryResult& entry : grid.entries) {
    const ExperimentResult& r = entry.result;
    std::string status = "ok";
    if (r.exit_code == kExitConfigError) status = "config-error";
    else if (r.exit_code == kExitDataError) status = "data-error";
    else if (r.exit_code == kExitDiverged) status = "diverged";
    index << entry.id << ',' << status << ','
          << solver_name(entry.config.solver) << ','
          << problem_name(entry.config.problem) << ',' << entry.config.seed
          << ',' << csv_quote(entry.config.out) << ',';
    if (!r.trace.records.empty()) {
      const TraceRecord& last = r.trace.records.back();
      index << format_double(last.f_value) << ',';
      if (last.subopt) index << format_double(*last.subopt);
      index << ',' << last.queries << ',';
    } else {
      index << ",,,";
    }
    if (r.fstar) index << format_double(*r.fstar);
    index << ',' << r.fstar_note << ',';
    index << csv_quote(r.exit_code == kExitOk ? "" : r.message) << '\n';
  }
  grid.index_path = (fs::path(out_dir) / "index.csv").string();
  try {
    write_file_atomically(grid.index_path, index.str());
  } catch (const std::exception& e) {
    grid.exit_code = kExitDataError;
    grid.message = e.what();
    return grid;
  }
  grid.message = "grid: " + std::to_string(grid.entries.size()) + " entries, index at " +
                 grid.index_path;
  return grid;
}

}  // namespace zodfo
