#include "zodfo/problems.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "zodfo/rng.hpp"

namespace zodfo {

namespace {

// log(1 + exp(z)) without overflow for large |z|.
double log1p_exp(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

// 1 / (1 + exp(-z)) without overflow for large |z|.
double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double max_row_squared_norm(const Eigen::MatrixXd& features) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    m = std::max(m, features.row(i).squaredNorm());
  }
  return m;
}

void check_dataset(const Dataset& data) {
  if (data.features.rows() < 1) {
    throw std::invalid_argument("problem: dataset is empty");
  }
  if (data.features.cols() < 1) {
    throw std::invalid_argument("problem: dataset has no features");
  }
  if (data.labels.size() != data.features.rows()) {
    throw std::invalid_argument("problem: label count does not match examples");
  }
  if (!data.features.allFinite() || !data.labels.allFinite()) {
    throw std::invalid_argument("problem: dataset has non-finite entries");
  }
}

}  // namespace

void scale_features_max_norm(Dataset& data) {
  const double m = std::sqrt(max_row_squared_norm(data.features));
  if (m > 0.0) data.features /= m;
}

FiniteSumObjective logistic_objective(const Dataset& data, double lambda) {
  check_dataset(data);
  if (lambda < 0.0) throw std::invalid_argument("logistic: lambda must be >= 0");
  for (Eigen::Index i = 0; i < data.labels.size(); ++i) {
    if (data.labels[i] != 1.0 && data.labels[i] != -1.0) {
      throw std::invalid_argument("logistic: labels must be -1 or +1");
    }
  }
  auto shared = std::make_shared<const Dataset>(data);
  const int n = static_cast<int>(shared->example_count());
  const int d = static_cast<int>(shared->dimension());
  const double smoothness = max_row_squared_norm(shared->features) / 4.0 + 2.0 * lambda;
  return FiniteSumObjective(
      n, d, smoothness, 2.0 * lambda,
      [shared, lambda](int i, const Vector& x) {
        const double margin = shared->labels[i] * shared->features.row(i).dot(x);
        return log1p_exp(-margin) + lambda * x.squaredNorm();
      },
      [shared, lambda](int i, const Vector& x) -> Vector {
        const double margin = shared->labels[i] * shared->features.row(i).dot(x);
        const double weight = -shared->labels[i] * sigmoid(-margin);
        return weight * shared->features.row(i).transpose() + 2.0 * lambda * x;
      });
}

FiniteSumObjective ridge_objective(const Dataset& data, double lambda) {
  check_dataset(data);
  if (lambda < 0.0) throw std::invalid_argument("ridge: lambda must be >= 0");
  auto shared = std::make_shared<const Dataset>(data);
  const int n = static_cast<int>(shared->example_count());
  const int d = static_cast<int>(shared->dimension());
  const double smoothness = max_row_squared_norm(shared->features) + 2.0 * lambda;
  return FiniteSumObjective(
      n, d, smoothness, 2.0 * lambda,
      [shared, lambda](int i, const Vector& x) {
        const double r = shared->features.row(i).dot(x) - shared->labels[i];
        return 0.5 * r * r + lambda * x.squaredNorm();
      },
      [shared, lambda](int i, const Vector& x) -> Vector {
        const double r = shared->features.row(i).dot(x) - shared->labels[i];
        return r * shared->features.row(i).transpose() + 2.0 * lambda * x;
      });
}

QuadraticProblem quadratic_objective(int d, int n, double tau,
                                     double smoothness, std::uint64_t seed) {
  if (d < 1 || n < 1) throw std::invalid_argument("quadratic: need d >= 1, n >= 1");
  if (!(tau > 0.0) || tau > smoothness) {
    throw std::invalid_argument("quadratic: need 0 < tau <= smoothness");
  }
  if (d == 1 && tau != smoothness) {
    throw std::invalid_argument(
        "quadratic: a one-dimensional spectrum cannot span tau < smoothness");
  }

  // Geometric average spectrum from smoothness down to tau, endpoints exact.
  Vector mean_eigs(d);
  if (d == 1) {
    mean_eigs[0] = smoothness;
  } else {
    const double ratio = tau / smoothness;
    for (int j = 0; j < d; ++j) {
      mean_eigs[j] = smoothness *
                     std::pow(ratio, static_cast<double>(j) /
                                         static_cast<double>(d - 1));
    }
    mean_eigs[0] = smoothness;
    mean_eigs[d - 1] = tau;
  }

  // Per-component diagonals: zero-mean spread around the average eigenvalue,
  // clipped implicitly to [0, smoothness] by the spread choice.
  Eigen::MatrixXd diagonals(n, d);
  RngStream rng(seed);
  for (int j = 0; j < d; ++j) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = 2.0 * rng.uniform01() - 1.0;
    v.array() -= v.mean();
    const double maxabs = v.cwiseAbs().maxCoeff();
    if (maxabs > 0.0) v /= maxabs;
    const double spread = std::min(mean_eigs[j], smoothness - mean_eigs[j]);
    diagonals.col(j) = mean_eigs[j] + spread * v.array();
  }

  auto shared = std::make_shared<const Eigen::MatrixXd>(diagonals);
  FiniteSumObjective objective(
      n, d, smoothness, tau,
      [shared](int i, const Vector& x) {
        return 0.5 * (shared->row(i).transpose().array() * x.array().square()).sum();
      },
      [shared](int i, const Vector& x) -> Vector {
        return shared->row(i).transpose().array() * x.array();
      });
  return QuadraticProblem{std::move(objective), Vector::Zero(d), 0.0,
                          std::move(diagonals)};
}

ReferenceOptimum reference_optimum(const FiniteSumObjective& obj, double tol,
                                   std::int64_t max_iterations) {
  if (!obj.has_gradient_oracle()) {
    throw std::logic_error("reference_optimum: objective has no gradient oracle");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("reference_optimum: tol must be > 0");
  if (max_iterations < 1) {
    throw std::invalid_argument("reference_optimum: need at least one iteration");
  }

  const double step = 1.0 / obj.smoothness();
  Vector x = Vector::Zero(obj.dimension());
  Vector y = x;
  double fx = full_objective(obj, x);
  double t = 1.0;

  ReferenceOptimum result;
  bool just_restarted = false;
  for (std::int64_t k = 1; k <= max_iterations; ++k) {
    result.iterations = k;
    const Vector gy = obj.full_gradient(y);
    Vector x_next = y - step * gy;
    const double f_next = full_objective(obj, x_next);
    if (f_next > fx) {
      // A plain descent step from the best iterate that still increases f
      // means we are at the floating point floor; restarting again would
      // repeat the exact same state forever.
      if (just_restarted) break;
      // Momentum overshoots: restart from the best iterate.
      y = x;
      t = 1.0;
      just_restarted = true;
      continue;
    }
    just_restarted = false;
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = x_next + ((t - 1.0) / t_next) * (x_next - x);
    x = std::move(x_next);
    fx = f_next;
    t = t_next;

    const Vector gx = obj.full_gradient(x);
    result.gradient_norm = gx.norm();
    if (result.gradient_norm <= tol) {
      result.x = std::move(x);
      result.f = fx;
      result.converged = true;
      return result;
    }
  }
  result.x = std::move(x);
  result.f = fx;
  result.converged = false;
  return result;
}

Dataset make_synthetic_classification(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw std::invalid_argument("synthetic: need n >= 1, d >= 1");
  RngStream rng(seed);
  Dataset data;
  data.features.resize(n, d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) data.features(i, j) = scale * rng.normal();
  }
  const Vector w = rng.gaussian_vector(d);
  data.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    data.labels[i] = data.features.row(i).dot(w) >= 0.0 ? 1.0 : -1.0;
  }
  return data;
}

Dataset make_synthetic_regression(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw std::invalid_argument("synthetic: need n >= 1, d >= 1");
  RngStream rng(seed);
  Dataset data;
  data.features.resize(n, d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) data.features(i, j) = scale * rng.normal();
  }
  const Vector w = rng.gaussian_vector(d);
  data.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    data.labels[i] = data.features.row(i).dot(w) + 0.1 * rng.normal();
  }
  return data;
}

}  // namespace zodfo
