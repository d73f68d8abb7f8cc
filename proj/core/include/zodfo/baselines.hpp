#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "zodfo/estimators.hpp"
#include "zodfo/objective.hpp"
#include "zodfo/trace.hpp"

namespace zodfo {

/*! Shared configuration for the three baseline solvers.
 *
 *  eta is the literal step size for zo_svrg and zo_nesterov and the
 *  equivalent stepsize alpha*gamma for zo_katyusha; unset picks the
 *  solver-specific default documented at each entry point.  p0/alpha0
 *  parameterize the Katyusha pivot weight (alpha0 defaults to 1 - p0,
 *  and p0 + alpha0 must not exceed 1).
 */
struct BaselineConfig {
  int epochs = 1;
  int batch = 1;
  std::uint64_t seed = 0;
  EstimatorConfig estimator;
  std::optional<double> eta;
  double p0 = 0.5;
  std::optional<double> alpha0;
  // zo_svrg epoch length override; defaults to ceil((d+4)*n / batch).
  std::optional<std::int64_t> inner_iterations;
  Vector start;

  // Test-only: replaces every gradient estimate with the exact full
  // gradient at the probe point. No queries are counted.
  std::function<Vector(const Vector&)> exact_gradient;
  // zo_nesterov extrapolation weight as a function of the step index,
  // starting at k = 0. Defaults to k / (k + 3).
  std::function<double(std::int64_t)> nesterov_momentum;
};

/*! Epoch-based variance reduction without acceleration: coordinate-wise full
 *  estimate at the pivot, Gaussian per-component estimates inside the epoch,
 *  constant step x <- x - eta*G. The pivot for the next epoch is the last
 *  iterate. Default eta = 1/(12(d+4)L). Queries: S*(2dn + 4b*T).
 */
RunTrace zo_svrg(const FiniteSumObjective& obj, const BaselineConfig& cfg);

/*! Accelerated variance reduction with a single coupling sequence: per epoch
 *  the pivot is re-centred, y follows the variance-reduced step and
 *  x interpolates between pivot and y with constant weight alpha0; the next
 *  pivot is the plain average of the epoch's x iterates. Epoch lengths follow
 *  the same doubling schedule as zo_varag (Gaussian warmup boundary).
 *  Default equivalent stepsize eta = 1/(12(d+4)L), gamma = eta/alpha0.
 *  Queries: sum_s (2dn + 4b*T_b(s)).
 */
RunTrace zo_katyusha(const FiniteSumObjective& obj, const BaselineConfig& cfg);

/*! Deterministic accelerated two-point search: one shared direction per
 *  step, the directional estimate averaged over all n components (2n queries
 *  per step), Nesterov extrapolation with momentum beta_k = k/(k+3) unless
 *  overridden. Default eta = 1/(4(d+4)L).
 *
 *  Runs enough steps to match the total query budget of the stochastic
 *  solvers' doubling schedule for cfg.epochs epochs, and records one trace
 *  row per epoch at the step whose query count is nearest that epoch
 *  boundary. Queries: 2n per step.
 */
RunTrace zo_nesterov(const FiniteSumObjective& obj, const BaselineConfig& cfg);

}  // namespace zodfo
