#include "zodfo/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "zodfo/rng.hpp"
#include "zodfo/schedule.hpp"

namespace zodfo {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void check_common(const FiniteSumObjective& obj, const BaselineConfig& cfg,
                  bool needs_mu) {
  if (cfg.epochs < 1) throw std::invalid_argument("baseline: epochs must be >= 1");
  if (cfg.batch < 1) throw std::invalid_argument("baseline: batch must be >= 1");
  if (!cfg.exact_gradient) {
    if (needs_mu && !(cfg.estimator.mu > 0.0)) {
      throw std::invalid_argument("baseline: mu must be positive");
    }
    if (!(cfg.estimator.nu > 0.0)) {
      throw std::invalid_argument("baseline: nu must be positive");
    }
  }
  if (cfg.eta && !(*cfg.eta > 0.0)) {
    throw std::invalid_argument("baseline: eta must be positive");
  }
  if (cfg.start.size() != 0 && cfg.start.size() != obj.dimension()) {
    throw std::invalid_argument("baseline: start point dimension mismatch");
  }
}

Vector start_point(const FiniteSumObjective& obj, const BaselineConfig& cfg) {
  Vector x0 = cfg.start.size() ? cfg.start : Vector(Vector::Zero(obj.dimension()));
  require_finite(x0, "start point");
  return x0;
}

bool record_epoch(RunTrace& trace, const FiniteSumObjective& obj, int epoch,
                  const Vector& point, const QueryCounter& counter,
                  Clock::time_point start) {
  const double f = full_objective(obj, point);
  if (!std::isfinite(f)) {
    trace.status = RunStatus::diverged;
    trace.diagnostic = "non-finite objective at epoch " + std::to_string(epoch);
    return false;
  }
  TraceRecord record;
  record.epoch = epoch;
  record.f_value = f;
  record.queries = counter.total;
  record.elapsed_ms = elapsed_ms_since(start);
  trace.records.push_back(record);
  return true;
}

}  // namespace

RunTrace zo_svrg(const FiniteSumObjective& obj, const BaselineConfig& cfg) {
  check_common(obj, cfg, /*needs_mu=*/true);
  const int n = obj.component_count();
  const int d = obj.dimension();
  const double eta =
      cfg.eta.value_or(1.0 / (12.0 * static_cast<double>(d + 4) * obj.smoothness()));
  const std::int64_t iterations = cfg.inner_iterations.value_or(
      (static_cast<std::int64_t>(d + 4) * n + cfg.batch - 1) / cfg.batch);
  if (iterations < 1) throw std::invalid_argument("zo_svrg: inner length must be >= 1");

  RunTrace trace;
  trace.solver = "zo-svrg";
  trace.seed = cfg.seed;
  trace.config_echo = {
      {"solver", "zo-svrg"},       {"eta", format_double(eta)},
      {"epochs", std::to_string(cfg.epochs)},
      {"batch", std::to_string(cfg.batch)},
      {"inner_iterations", std::to_string(iterations)},
      {"mu", format_double(cfg.estimator.mu)},
      {"nu", format_double(cfg.estimator.nu)},
      {"seed", std::to_string(cfg.seed)},
  };

  QueryCounter counter;
  RngStream rng(cfg.seed);
  Vector pivot = start_point(obj, cfg);
  const auto start = Clock::now();

  for (int s = 1; s <= cfg.epochs; ++s) {
    PivotalGradient pivotal;
    if (cfg.exact_gradient) {
      pivotal.gradient = cfg.exact_gradient(pivot);
    } else {
      pivotal = coordinate_full_estimate(obj, pivot, cfg.estimator, counter);
    }
    Vector x = pivot;
    for (std::int64_t t = 1; t <= iterations; ++t) {
      Vector grad;
      if (cfg.exact_gradient) {
        grad = cfg.exact_gradient(x);
      } else {
        Vector at_iterate = Vector::Zero(d);
        Vector at_pivot = Vector::Zero(d);
        for (int j = 0; j < cfg.batch; ++j) {
          const int i = static_cast<int>(rng.uniform_index(n));
          const Vector u = rng.gaussian_vector(d);
          at_iterate +=
              gaussian_component_estimate(obj, i, x, u, cfg.estimator, counter);
          at_pivot +=
              gaussian_component_estimate(obj, i, pivot, u, cfg.estimator, counter);
        }
        at_iterate /= static_cast<double>(cfg.batch);
        at_pivot /= static_cast<double>(cfg.batch);
        grad = vr_inner_gradient(at_iterate, at_pivot, pivotal);
      }
      x -= eta * grad;
      if (!is_finite(x)) {
        trace.status = RunStatus::diverged;
        trace.diagnostic = "non-finite iterate at epoch " + std::to_string(s) +
                           ", inner iteration " + std::to_string(t);
        return trace;
      }
    }
    pivot = x;
    if (!record_epoch(trace, obj, s, pivot, counter, start)) return trace;
  }
  return trace;
}

RunTrace zo_katyusha(const FiniteSumObjective& obj, const BaselineConfig& cfg) {
  check_common(obj, cfg, /*needs_mu=*/true);
  if (!(cfg.p0 > 0.0) || cfg.p0 >= 1.0) {
    throw std::invalid_argument("zo_katyusha: p0 must lie in (0, 1)");
  }
  const double alpha = cfg.alpha0.value_or(1.0 - cfg.p0);
  if (!(alpha > 0.0) || cfg.p0 + alpha > 1.0 + 1e-12) {
    throw std::invalid_argument("zo_katyusha: need alpha0 > 0 and p0 + alpha0 <= 1");
  }
  const int n = obj.component_count();
  const int d = obj.dimension();
  const double eta =
      cfg.eta.value_or(1.0 / (12.0 * static_cast<double>(d + 4) * obj.smoothness()));
  const double gamma = eta / alpha;
  // Epoch lengths follow the Gaussian-regime doubling schedule.
  const Schedule lengths = make_schedule(Regime::gaussian_convex, d, n,
                                         obj.smoothness(), 0.0, cfg.batch);

  RunTrace trace;
  trace.solver = "zo-katyusha";
  trace.seed = cfg.seed;
  trace.config_echo = {
      {"solver", "zo-katyusha"},
      {"eta", format_double(eta)},
      {"gamma", format_double(gamma)},
      {"p0", format_double(cfg.p0)},
      {"alpha0", format_double(alpha)},
      {"epochs", std::to_string(cfg.epochs)},
      {"batch", std::to_string(cfg.batch)},
      {"mu", format_double(cfg.estimator.mu)},
      {"nu", format_double(cfg.estimator.nu)},
      {"seed", std::to_string(cfg.seed)},
  };

  QueryCounter counter;
  RngStream rng(cfg.seed);
  Vector pivot = start_point(obj, cfg);
  const auto start = Clock::now();

  for (int s = 1; s <= cfg.epochs; ++s) {
    PivotalGradient pivotal;
    if (cfg.exact_gradient) {
      pivotal.gradient = cfg.exact_gradient(pivot);
    } else {
      pivotal = coordinate_full_estimate(obj, pivot, cfg.estimator, counter);
    }
    Vector x = pivot;
    Vector y = pivot;
    Vector x_sum = Vector::Zero(d);
    const std::int64_t iterations = lengths.inner_iterations(s);
    for (std::int64_t t = 1; t <= iterations; ++t) {
      Vector grad;
      if (cfg.exact_gradient) {
        grad = cfg.exact_gradient(x);
      } else {
        Vector at_iterate = Vector::Zero(d);
        Vector at_pivot = Vector::Zero(d);
        for (int j = 0; j < cfg.batch; ++j) {
          const int i = static_cast<int>(rng.uniform_index(n));
          const Vector u = rng.gaussian_vector(d);
          at_iterate +=
              gaussian_component_estimate(obj, i, x, u, cfg.estimator, counter);
          at_pivot +=
              gaussian_component_estimate(obj, i, pivot, u, cfg.estimator, counter);
        }
        at_iterate /= static_cast<double>(cfg.batch);
        at_pivot /= static_cast<double>(cfg.batch);
        grad = vr_inner_gradient(at_iterate, at_pivot, pivotal);
      }
      y -= gamma * grad;
      x = pivot + alpha * (y - pivot);
      if (!is_finite(x)) {
        trace.status = RunStatus::diverged;
        trace.diagnostic = "non-finite iterate at epoch " + std::to_string(s) +
                           ", inner iteration " + std::to_string(t);
        return trace;
      }
      x_sum += x;
    }
    pivot = x_sum / static_cast<double>(iterations);
    // The running sum can overflow even when every iterate stayed finite.
    if (!is_finite(pivot)) {
      trace.status = RunStatus::diverged;
      trace.diagnostic = "non-finite epoch average at epoch " + std::to_string(s);
      return trace;
    }
    if (!record_epoch(trace, obj, s, pivot, counter, start)) return trace;
  }
  return trace;
}

RunTrace zo_nesterov(const FiniteSumObjective& obj, const BaselineConfig& cfg) {
  check_common(obj, cfg, /*needs_mu=*/true);
  const int n = obj.component_count();
  const int d = obj.dimension();
  const double eta =
      cfg.eta.value_or(1.0 / (4.0 * static_cast<double>(d + 4) * obj.smoothness()));
  const auto momentum = cfg.nesterov_momentum
                            ? cfg.nesterov_momentum
                            : [](std::int64_t k) {
                                return static_cast<double>(k) /
                                       static_cast<double>(k + 3);
                              };

  // Query checkpoints mirror the stochastic solvers' epoch boundaries so the
  // traces line up on a per-query axis. One step here costs 2n queries.
  const Schedule lengths = make_schedule(Regime::gaussian_convex, d, n,
                                         obj.smoothness(), 0.0, cfg.batch);
  std::vector<std::int64_t> checkpoint_steps;
  checkpoint_steps.reserve(static_cast<std::size_t>(cfg.epochs));
  std::uint64_t boundary_queries = 0;
  std::int64_t previous_step = 0;
  for (int s = 1; s <= cfg.epochs; ++s) {
    boundary_queries += 2ull * static_cast<std::uint64_t>(d) * n +
                        4ull * cfg.batch *
                            static_cast<std::uint64_t>(lengths.inner_iterations(s));
    std::int64_t step = static_cast<std::int64_t>(std::llround(
        static_cast<double>(boundary_queries) / (2.0 * static_cast<double>(n))));
    step = std::max(step, previous_step + 1);
    checkpoint_steps.push_back(step);
    previous_step = step;
  }
  const std::int64_t total_steps = checkpoint_steps.back();

  RunTrace trace;
  trace.solver = "zo-nesterov";
  trace.seed = cfg.seed;
  trace.config_echo = {
      {"solver", "zo-nesterov"},
      {"eta", format_double(eta)},
      {"momentum", "k/(k+3)"},
      {"epochs", std::to_string(cfg.epochs)},
      {"steps", std::to_string(total_steps)},
      {"mu", format_double(cfg.estimator.mu)},
      {"seed", std::to_string(cfg.seed)},
  };
  if (cfg.nesterov_momentum) trace.config_echo["momentum"] = "custom";

  QueryCounter counter;
  RngStream rng(cfg.seed);
  Vector x = start_point(obj, cfg);
  Vector y = x;
  const auto start = Clock::now();

  std::size_t next_checkpoint = 0;
  for (std::int64_t k = 0; k < total_steps; ++k) {
    Vector grad;
    if (cfg.exact_gradient) {
      grad = cfg.exact_gradient(y);
    } else {
      const Vector u = rng.gaussian_vector(d);
      const double shifted = full_objective(obj, y + cfg.estimator.mu * u, counter);
      const double base = full_objective(obj, y, counter);
      grad = ((shifted - base) / cfg.estimator.mu) * u;
    }
    const Vector x_next = y - eta * grad;
    if (!is_finite(x_next)) {
      trace.status = RunStatus::diverged;
      trace.diagnostic = "non-finite iterate at step " + std::to_string(k + 1);
      return trace;
    }
    y = x_next + momentum(k) * (x_next - x);
    if (!is_finite(y)) {
      trace.status = RunStatus::diverged;
      trace.diagnostic = "non-finite extrapolation at step " + std::to_string(k + 1);
      return trace;
    }
    x = x_next;

    if (next_checkpoint < checkpoint_steps.size() &&
        k + 1 == checkpoint_steps[next_checkpoint]) {
      if (!record_epoch(trace, obj, static_cast<int>(next_checkpoint) + 1, x,
                        counter, start)) {
        return trace;
      }
      ++next_checkpoint;
    }
  }
  return trace;
}

}  // namespace zodfo
