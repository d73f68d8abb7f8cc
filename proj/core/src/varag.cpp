#include "zodfo/varag.hpp"

#include <chrono>
#include <cmath>
#include <string>
#include <utility>

namespace zodfo {

namespace {

void check_config(const FiniteSumObjective& obj, const VaragConfig& cfg) {
  if (cfg.epochs < 1) throw std::invalid_argument("zo_varag: epochs must be >= 1");
  if (cfg.schedule.dimension() != obj.dimension()) {
    throw std::invalid_argument("zo_varag: schedule dimension mismatch");
  }
  if (cfg.schedule.component_count() != obj.component_count()) {
    throw std::invalid_argument("zo_varag: schedule component count mismatch");
  }
  if (!cfg.exact_gradient) {
    if (is_gaussian(cfg.schedule.regime()) && !(cfg.estimator.mu > 0.0)) {
      throw std::invalid_argument("zo_varag: gaussian regime needs mu > 0");
    }
    if (!(cfg.estimator.nu > 0.0)) {
      throw std::invalid_argument("zo_varag: nu must be positive");
    }
  }
  if (cfg.start.size() != 0 && cfg.start.size() != obj.dimension()) {
    throw std::invalid_argument("zo_varag: start point dimension mismatch");
  }
}

}  // namespace

EpochState initial_state(const Vector& x0) {
  require_finite(x0, "start point");
  EpochState state;
  state.epoch = 0;
  state.x = x0;
  state.x_bar = x0;
  state.x_tilde = x0;
  return state;
}

Vector inner_extrapolate(const Vector& x_prev, const Vector& x_bar_prev,
                         const Vector& x_tilde, double alpha, double p,
                         double tau, double gamma) {
  const double tg = 1.0 + tau * gamma;
  const double denom = 1.0 + tau * gamma * (1.0 - alpha);
  return (tg * (1.0 - alpha - p) * x_bar_prev + alpha * x_prev +
          tg * p * x_tilde) /
         denom;
}

Vector prox_step(const Vector& x_prev, const Vector& x_under, const Vector& g,
                 double gamma, double tau) {
  return (x_prev + gamma * tau * x_under - gamma * g) / (1.0 + gamma * tau);
}

Vector inner_aggregate(const std::vector<Vector>& points,
                       const std::vector<double>& weights) {
  if (points.empty() || points.size() != weights.size()) {
    throw std::invalid_argument("inner_aggregate: size mismatch");
  }
  Vector acc = Vector::Zero(points.front().size());
  double total = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    acc += weights[k] * points[k];
    total += weights[k];
  }
  if (!(total > 0.0)) throw std::invalid_argument("inner_aggregate: weights must sum > 0");
  return acc / total;
}

EpochState run_epoch(const FiniteSumObjective& obj, const VaragConfig& cfg,
                     EpochState state, QueryCounter& counter, RngStream& rng) {
  const Schedule& sched = cfg.schedule;
  const int s = state.epoch + 1;
  const double alpha = sched.alpha(s);
  const double gamma = sched.gamma(s);
  const double p = sched.p(s);
  const double tau = sched.strong_convexity();
  const std::int64_t iterations = sched.inner_iterations(s);
  const bool gaussian = is_gaussian(sched.regime());
  const int n = obj.component_count();
  const int d = obj.dimension();

  const Vector pivot =
      cfg.pivot == PivotOption::averaged ? state.x_tilde : state.x_bar;

  PivotalGradient pivotal;
  if (cfg.exact_gradient) {
    pivotal.gradient = cfg.exact_gradient(pivot);
    pivotal.error_bound = 0.0;
  } else {
    pivotal = coordinate_full_estimate(obj, pivot, cfg.estimator, counter);
    if (!gaussian) {
      // Coordinate estimates throughout tighten the bound to L^2*d*nu^2.
      pivotal.error_bound =
          coordinate_pivot_error_bound(obj.smoothness(), d, cfg.estimator.nu);
    }
  }

  Vector x_prev = state.x;
  Vector x_bar_prev = pivot;

  const std::vector<double> theta = theta_weights(sched, s);
  Vector weighted_sum = Vector::Zero(d);
  double weight_total = 0.0;

  const int batch = sched.batch();
  for (std::int64_t t = 1; t <= iterations; ++t) {
    const Vector x_under =
        inner_extrapolate(x_prev, x_bar_prev, pivot, alpha, p, tau, gamma);
    if (!is_finite(x_under)) {
      throw DivergenceError(s, t,
                            "non-finite extrapolation at epoch " +
                                std::to_string(s) + ", inner iteration " +
                                std::to_string(t));
    }

    Vector grad;
    if (cfg.exact_gradient) {
      grad = cfg.exact_gradient(x_under);
    } else {
      Vector at_iterate = Vector::Zero(d);
      Vector at_pivot = Vector::Zero(d);
      for (int j = 0; j < batch; ++j) {
        const int i = static_cast<int>(rng.uniform_index(n));
        if (gaussian) {
          const Vector u = rng.gaussian_vector(d);
          at_iterate +=
              gaussian_component_estimate(obj, i, x_under, u, cfg.estimator, counter);
          at_pivot +=
              gaussian_component_estimate(obj, i, pivot, u, cfg.estimator, counter);
        } else {
          at_iterate +=
              coordinate_component_estimate(obj, i, x_under, cfg.estimator, counter);
          at_pivot +=
              coordinate_component_estimate(obj, i, pivot, cfg.estimator, counter);
        }
      }
      at_iterate /= static_cast<double>(batch);
      at_pivot /= static_cast<double>(batch);
      grad = vr_inner_gradient(at_iterate, at_pivot, pivotal);
    }

    const Vector x_t = prox_step(x_prev, x_under, grad, gamma, tau);
    if (!is_finite(x_t)) {
      throw DivergenceError(s, t,
                            "non-finite iterate at epoch " + std::to_string(s) +
                                ", inner iteration " + std::to_string(t));
    }
    const Vector x_bar_t =
        (1.0 - alpha - p) * x_bar_prev + alpha * x_t + p * pivot;

    if (cfg.inner_observer) cfg.inner_observer(s, t, x_bar_t);

    const double w = theta[static_cast<std::size_t>(t - 1)];
    weighted_sum += w * x_bar_t;
    weight_total += w;

    x_prev = x_t;
    x_bar_prev = x_bar_t;
  }

  EpochState next;
  next.epoch = s;
  next.x = std::move(x_prev);
  next.x_bar = x_bar_prev;
  next.x_tilde = weighted_sum / weight_total;
  next.pivotal = std::move(pivotal);
  // The weighted sum can overflow even when every iterate stayed finite.
  if (!is_finite(next.x_bar) || !is_finite(next.x_tilde)) {
    throw DivergenceError(s, iterations,
                          "non-finite epoch aggregate at epoch " + std::to_string(s));
  }
  return next;
}

RunTrace zo_varag(const FiniteSumObjective& obj, const VaragConfig& cfg) {
  check_config(obj, cfg);
  const Vector x0 =
      cfg.start.size() ? cfg.start : Vector(Vector::Zero(obj.dimension()));

  RunTrace trace;
  trace.solver = "zo-varag";
  trace.seed = cfg.seed;
  trace.config_echo = {
      {"solver", "zo-varag"},
      {"estimator", is_gaussian(cfg.schedule.regime()) ? "gaussian" : "coordinate"},
      {"pivot", cfg.pivot == PivotOption::averaged ? "1" : "2"},
      {"epochs", std::to_string(cfg.epochs)},
      {"batch", std::to_string(cfg.schedule.batch())},
      {"mu", format_double(cfg.estimator.mu)},
      {"nu", format_double(cfg.estimator.nu)},
      {"eta", format_double(cfg.schedule.equivalent_stepsize())},
      {"p0", format_double(cfg.schedule.p(1))},
      {"seed", std::to_string(cfg.seed)},
      {"warmup_epochs", std::to_string(cfg.schedule.warmup_epochs())},
  };

  QueryCounter counter;
  RngStream rng(cfg.seed);
  EpochState state = initial_state(x0);

  const auto start_time = std::chrono::steady_clock::now();
  for (int s = 1; s <= cfg.epochs; ++s) {
    try {
      state = run_epoch(obj, cfg, std::move(state), counter, rng);
    } catch (const DivergenceError& e) {
      trace.status = RunStatus::diverged;
      trace.diagnostic = e.what();
      return trace;
    }
    const double f = full_objective(obj, state.x_tilde);
    if (!std::isfinite(f)) {
      trace.status = RunStatus::diverged;
      trace.diagnostic = "non-finite objective at epoch " + std::to_string(s);
      return trace;
    }
    TraceRecord record;
    record.epoch = s;
    record.f_value = f;
    record.queries = counter.total;
    record.elapsed_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - start_time)
            .count();
    trace.records.push_back(record);
  }
  return trace;
}

}  // namespace zodfo
