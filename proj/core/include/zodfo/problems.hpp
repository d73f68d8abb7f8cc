#pragma once

#include <cstdint>

#include "zodfo/objective.hpp"
#include "zodfo/vector.hpp"

namespace zodfo {

/*! Dense dataset: one row of `features` per example. For classification the
 *  labels are in {-1, +1}; for regression they are arbitrary reals.
 */
struct Dataset {
  Eigen::MatrixXd features;  // n x d
  Eigen::VectorXd labels;    // n

  Eigen::Index example_count() const { return features.rows(); }
  Eigen::Index dimension() const { return features.cols(); }
};

// Divides every feature row by the largest row norm, so that
// max_i |a_i| = 1 afterwards. No-op when all rows are zero.
void scale_features_max_norm(Dataset& data);

/*! Regularized logistic loss
 *    f_i(x) = log(1 + exp(-y_i <a_i, x>)) + lambda*|x|^2
 *  with smoothness max_i |a_i|^2 / 4 + 2*lambda and strong convexity
 *  2*lambda. Labels must be -1 or +1. Carries an analytic gradient oracle
 *  for reference solvers and tests.
 */
FiniteSumObjective logistic_objective(const Dataset& data, double lambda);

/*! Regularized least squares
 *    f_i(x) = (<a_i, x> - y_i)^2 / 2 + lambda*|x|^2
 *  with smoothness max_i |a_i|^2 + 2*lambda and strong convexity 2*lambda.
 */
FiniteSumObjective ridge_objective(const Dataset& data, double lambda);

/*! Synthetic diagonal quadratic f_i(x) = x^T D_i x / 2 with known optimum.
 *
 *  The average diagonal has extreme eigenvalues exactly (tau, smoothness)
 *  and a geometric spectrum in between; every component diagonal stays in
 *  [0, smoothness], so each f_i is convex and smoothness-smooth while the
 *  average is tau-strongly convex. x* = 0 and f* = 0 by construction.
 */
struct QuadraticProblem {
  FiniteSumObjective objective;
  Vector x_star;
  double f_star = 0.0;
  Eigen::MatrixXd diagonals;  // n x d, row i = diag(D_i)
};

QuadraticProblem quadratic_objective(int d, int n, double tau,
                                     double smoothness, std::uint64_t seed);

/*! Accelerated first-order descent to |grad f(x)| <= tol using the analytic
 *  gradient oracle. Never touches the query counter. When the cap is hit
 *  before the tolerance, converged is false and the caller must not treat
 *  f as an optimum (e.g. unregularized logistic loss on separable data has
 *  no attained minimum).
 */
struct ReferenceOptimum {
  Vector x;
  double f = 0.0;
  double gradient_norm = 0.0;
  std::int64_t iterations = 0;
  bool converged = false;
};

ReferenceOptimum reference_optimum(const FiniteSumObjective& obj, double tol,
                                   std::int64_t max_iterations);

// Gaussian features with rows scaled to unit typical norm; labels are the
// signs of a random linear functional (separable by construction).
Dataset make_synthetic_classification(int n, int d, std::uint64_t seed);

// Same features; labels are a random linear functional plus 0.1 noise.
Dataset make_synthetic_regression(int n, int d, std::uint64_t seed);

}  // namespace zodfo
