#pragma once

#include <cstdint>
#include <functional>

#include "zodfo/vector.hpp"

namespace zodfo {

/*! Counts component function evaluations.
 *
 *  Every call to evaluate_component adds exactly one query.  The counter is
 *  single-owner: each solver run owns its counter and no two threads share
 *  one.  Trace reporting goes through the uncounted full_objective overload
 *  and never shows up here.
 */
struct QueryCounter {
  std::uint64_t total = 0;
  void add(std::uint64_t k) { total += k; }
};

/*! Finite-sum objective f(x) = (1/n) * sum_i f_i(x).
 *
 *  Solvers may only query component values through evaluate_component; the
 *  gradient oracle is a side channel for reference solvers and tests and is
 *  never available to the zeroth-order methods.  smoothness() is a Lipschitz
 *  constant valid for every component gradient; strong_convexity() may be 0
 *  (merely convex).
 */
class FiniteSumObjective {
 public:
  using Component = std::function<double(int, const Vector&)>;
  using ComponentGradient = std::function<Vector(int, const Vector&)>;

  FiniteSumObjective(int n, int d, double smoothness, double strong_convexity,
                     Component component,
                     ComponentGradient gradient_oracle = {});

  int component_count() const { return n_; }
  int dimension() const { return d_; }
  double smoothness() const { return smoothness_; }
  double strong_convexity() const { return strong_convexity_; }

  // Raw component value, no counting. Callers outside trace reporting and
  // Monte Carlo oracles should use evaluate_component instead.
  double component_value(int i, const Vector& x) const;

  bool has_gradient_oracle() const { return static_cast<bool>(gradient_); }
  Vector component_gradient(int i, const Vector& x) const;
  Vector full_gradient(const Vector& x) const;

 private:
  int n_;
  int d_;
  double smoothness_;
  double strong_convexity_;
  Component component_;
  ComponentGradient gradient_;
};

// The sole query channel for solvers: one component value, one counted query.
double evaluate_component(const FiniteSumObjective& obj, int i, const Vector& x,
                          QueryCounter& counter);

// Full objective value, counted as n queries.
double full_objective(const FiniteSumObjective& obj, const Vector& x,
                      QueryCounter& counter);

// Uncounted side channel used for trace reporting and test oracles only.
double full_objective(const FiniteSumObjective& obj, const Vector& x);

}  // namespace zodfo
