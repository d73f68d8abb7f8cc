#pragma once

#include <cstdint>

#include "zodfo/objective.hpp"
#include "zodfo/rng.hpp"
#include "zodfo/vector.hpp"

namespace zodfo {

/*! Smoothing radii for the two gradient estimates.
 *
 *  mu drives the Gaussian directional estimate used inside epochs, nu the
 *  coordinate-wise central differences used for pivotal gradients.  Either
 *  radius must be positive where the matching estimate is used.
 */
struct EstimatorConfig {
  double mu = 1e-3;
  double nu = 1e-3;
};

/*! Full coordinate-wise gradient estimate at an epoch pivot.
 *
 *  error_bound is the a priori bound on the squared deviation of the
 *  combined inner estimate from the smoothed gradient; it is carried as
 *  metadata for diagnostics and never feeds back into the iteration.
 */
struct PivotalGradient {
  Vector gradient;
  double error_bound = 0.0;
};

// Directional estimate ((f_i(x + mu*u) - f_i(x)) / mu) * u. Two queries.
Vector gaussian_component_estimate(const FiniteSumObjective& obj, int i,
                                   const Vector& x, const Vector& u,
                                   const EstimatorConfig& cfg,
                                   QueryCounter& counter);

// Central differences (f_i(x + nu*e_j) - f_i(x - nu*e_j)) / (2*nu) over all
// coordinates. 2d queries. Exact on quadratics.
Vector coordinate_component_estimate(const FiniteSumObjective& obj, int i,
                                     const Vector& x,
                                     const EstimatorConfig& cfg,
                                     QueryCounter& counter);

// Mean of coordinate_component_estimate over all components. 2dn queries.
// The attached error bound is the combined-estimate bound (both radii).
PivotalGradient coordinate_full_estimate(const FiniteSumObjective& obj,
                                         const Vector& x,
                                         const EstimatorConfig& cfg,
                                         QueryCounter& counter);

// Variance-reduced inner gradient: estimate at the iterate, minus the same
// estimate at the pivot, plus the pivotal full estimate.
Vector vr_inner_gradient(const Vector& estimate_at_x,
                         const Vector& estimate_at_pivot,
                         const PivotalGradient& pivotal);

// Squared-error bound for the combined scheme (Gaussian inner estimates on
// top of a coordinate-wise pivot): 2*L^2*d*nu^2 + mu^2*L^2*(d+3)^3 / 2.
double pivot_error_bound(double smoothness, int d, const EstimatorConfig& cfg);

// Squared-error bound when coordinate estimates are used throughout:
// L^2*d*nu^2.
double coordinate_pivot_error_bound(double smoothness, int d, double nu);

/*! Monte Carlo estimate of the Gaussian-smoothed value E_u[f(x + mu*u)].
 *
 *  Test oracle: uses the uncounted evaluation channel. stderr is the sample
 *  standard error of the mean.
 */
struct MonteCarloValue {
  double value = 0.0;
  double stderr_of_mean = 0.0;
};

MonteCarloValue smoothed_value_monte_carlo(const FiniteSumObjective& obj,
                                           const Vector& x, double mu,
                                           std::int64_t samples,
                                           RngStream& rng);

}  // namespace zodfo
