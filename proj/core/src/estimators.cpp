#include "zodfo/estimators.hpp"

#include <cmath>
#include <stdexcept>

namespace zodfo {

Vector gaussian_component_estimate(const FiniteSumObjective& obj, int i,
                                   const Vector& x, const Vector& u,
                                   const EstimatorConfig& cfg,
                                   QueryCounter& counter) {
  if (!(cfg.mu > 0.0)) throw std::invalid_argument("estimator: mu must be positive");
  require_dimension(u, obj.dimension(), "estimator direction");
  require_finite(u, "estimator direction");
  const double shifted = evaluate_component(obj, i, x + cfg.mu * u, counter);
  const double base = evaluate_component(obj, i, x, counter);
  return ((shifted - base) / cfg.mu) * u;
}

Vector coordinate_component_estimate(const FiniteSumObjective& obj, int i,
                                     const Vector& x,
                                     const EstimatorConfig& cfg,
                                     QueryCounter& counter) {
  if (!(cfg.nu > 0.0)) throw std::invalid_argument("estimator: nu must be positive");
  const int d = obj.dimension();
  require_dimension(x, d, "estimator");
  Vector g(d);
  Vector probe = x;
  for (int j = 0; j < d; ++j) {
    const double xj = probe[j];
    probe[j] = xj + cfg.nu;
    const double plus = evaluate_component(obj, i, probe, counter);
    probe[j] = xj - cfg.nu;
    const double minus = evaluate_component(obj, i, probe, counter);
    probe[j] = xj;
    g[j] = (plus - minus) / (2.0 * cfg.nu);
  }
  return g;
}

PivotalGradient coordinate_full_estimate(const FiniteSumObjective& obj,
                                         const Vector& x,
                                         const EstimatorConfig& cfg,
                                         QueryCounter& counter) {
  const int n = obj.component_count();
  Vector g = Vector::Zero(obj.dimension());
  for (int i = 0; i < n; ++i) {
    g += coordinate_component_estimate(obj, i, x, cfg, counter);
  }
  g /= static_cast<double>(n);
  return PivotalGradient{std::move(g),
                         pivot_error_bound(obj.smoothness(), obj.dimension(), cfg)};
}

Vector vr_inner_gradient(const Vector& estimate_at_x,
                         const Vector& estimate_at_pivot,
                         const PivotalGradient& pivotal) {
  if (estimate_at_x.size() != estimate_at_pivot.size() ||
      estimate_at_x.size() != pivotal.gradient.size()) {
    throw std::invalid_argument("vr_inner_gradient: dimension mismatch");
  }
  return estimate_at_x - estimate_at_pivot + pivotal.gradient;
}

double pivot_error_bound(double smoothness, int d, const EstimatorConfig& cfg) {
  if (d < 1) throw std::invalid_argument("pivot_error_bound: d must be positive");
  const double L2 = smoothness * smoothness;
  const double dim = static_cast<double>(d);
  const double d3 = (dim + 3.0) * (dim + 3.0) * (dim + 3.0);
  return 2.0 * L2 * dim * cfg.nu * cfg.nu + 0.5 * cfg.mu * cfg.mu * L2 * d3;
}

double coordinate_pivot_error_bound(double smoothness, int d, double nu) {
  if (d < 1) throw std::invalid_argument("pivot_error_bound: d must be positive");
  return smoothness * smoothness * static_cast<double>(d) * nu * nu;
}

MonteCarloValue smoothed_value_monte_carlo(const FiniteSumObjective& obj,
                                           const Vector& x, double mu,
                                           std::int64_t samples,
                                           RngStream& rng) {
  if (!(mu > 0.0)) throw std::invalid_argument("smoothed_value: mu must be positive");
  if (samples < 2) throw std::invalid_argument("smoothed_value: need >= 2 samples");
  // Welford keeps the variance accumulation stable over 1e5+ samples.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::int64_t k = 0; k < samples; ++k) {
    const Vector u = rng.gaussian_vector(x.size());
    const double v = full_objective(obj, x + mu * u);
    const double delta = v - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (v - mean);
  }
  const double variance = m2 / static_cast<double>(samples - 1);
  return MonteCarloValue{mean,
                         std::sqrt(variance / static_cast<double>(samples))};
}

}  // namespace zodfo
