#include "zodfo/objective.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace zodfo {

FiniteSumObjective::FiniteSumObjective(int n, int d, double smoothness,
                                       double strong_convexity,
                                       Component component,
                                       ComponentGradient gradient_oracle)
    : n_(n),
      d_(d),
      smoothness_(smoothness),
      strong_convexity_(strong_convexity),
      component_(std::move(component)),
      gradient_(std::move(gradient_oracle)) {
  if (n_ < 1) throw std::invalid_argument("objective: need at least one component");
  if (d_ < 1) throw std::invalid_argument("objective: dimension must be positive");
  if (!(smoothness_ > 0.0)) {
    throw std::invalid_argument("objective: smoothness constant must be positive");
  }
  if (strong_convexity_ < 0.0 || strong_convexity_ > smoothness_) {
    throw std::invalid_argument(
        "objective: strong convexity must lie in [0, smoothness]");
  }
  if (!component_) throw std::invalid_argument("objective: component missing");
}

double FiniteSumObjective::component_value(int i, const Vector& x) const {
  if (i < 0 || i >= n_) {
    throw std::out_of_range("objective: component index " + std::to_string(i) +
                            " outside [0, " + std::to_string(n_) + ")");
  }
  require_dimension(x, d_, "objective");
  require_finite(x, "objective");
  return component_(i, x);
}

Vector FiniteSumObjective::component_gradient(int i, const Vector& x) const {
  if (!gradient_) throw std::logic_error("objective: no gradient oracle attached");
  if (i < 0 || i >= n_) {
    throw std::out_of_range("objective: component index " + std::to_string(i) +
                            " outside [0, " + std::to_string(n_) + ")");
  }
  require_dimension(x, d_, "objective");
  require_finite(x, "objective");
  return gradient_(i, x);
}

Vector FiniteSumObjective::full_gradient(const Vector& x) const {
  Vector g = Vector::Zero(d_);
  for (int i = 0; i < n_; ++i) g += component_gradient(i, x);
  return g / static_cast<double>(n_);
}

double evaluate_component(const FiniteSumObjective& obj, int i, const Vector& x,
                          QueryCounter& counter) {
  const double v = obj.component_value(i, x);
  counter.add(1);
  return v;
}

double full_objective(const FiniteSumObjective& obj, const Vector& x,
                      QueryCounter& counter) {
  double acc = 0.0;
  for (int i = 0; i < obj.component_count(); ++i) {
    acc += evaluate_component(obj, i, x, counter);
  }
  return acc / static_cast<double>(obj.component_count());
}

double full_objective(const FiniteSumObjective& obj, const Vector& x) {
  double acc = 0.0;
  for (int i = 0; i < obj.component_count(); ++i) {
    acc += obj.component_value(i, x);
  }
  return acc / static_cast<double>(obj.component_count());
}

}  // namespace zodfo
