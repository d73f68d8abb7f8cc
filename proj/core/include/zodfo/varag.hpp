#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "zodfo/estimators.hpp"
#include "zodfo/objective.hpp"
#include "zodfo/rng.hpp"
#include "zodfo/schedule.hpp"
#include "zodfo/trace.hpp"

namespace zodfo {

// Which point seeds the next epoch's pivot: the weighted epoch average
// (option 1) or the last inner aggregate (option 2).
enum class PivotOption { averaged = 1, aggregate = 2 };

// Thrown by run_epoch when an iterate leaves the finite range; the driver
// converts it into a diverged trace rather than propagating.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(int epoch, std::int64_t iteration, const std::string& what)
      : std::runtime_error(what), epoch_(epoch), iteration_(iteration) {}
  int epoch() const { return epoch_; }
  std::int64_t iteration() const { return iteration_; }

 private:
  int epoch_;
  std::int64_t iteration_;
};

struct VaragConfig {
  explicit VaragConfig(Schedule s) : schedule(std::move(s)) {}

  Schedule schedule;
  PivotOption pivot = PivotOption::averaged;
  int epochs = 1;
  std::uint64_t seed = 0;
  EstimatorConfig estimator;
  // Start point; empty means the origin.
  Vector start;

  // Test-only: replaces both the pivotal gradient and every inner estimate
  // with the exact full gradient at the probe point. No queries are counted.
  std::function<Vector(const Vector&)> exact_gradient;
  // Test-only: observes each inner aggregate x_bar_t as it is produced.
  std::function<void(int s, std::int64_t t, const Vector& x_bar_t)> inner_observer;
};

/*! State carried between epochs: the triple (x^s, xbar^s, xtilde^s) plus the
 *  pivotal gradient that drove epoch s. At s = 0 all three points coincide
 *  with the start point and the pivotal gradient is empty.
 */
struct EpochState {
  int epoch = 0;
  Vector x;
  Vector x_bar;
  Vector x_tilde;
  PivotalGradient pivotal;
};

EpochState initial_state(const Vector& x0);

// One inner extrapolation:
// ((1+tau*gamma)(1-alpha-p)*xbar + alpha*x + (1+tau*gamma)*p*xtilde)
//   / (1 + tau*gamma*(1-alpha)).
Vector inner_extrapolate(const Vector& x_prev, const Vector& x_bar_prev,
                         const Vector& x_tilde, double alpha, double p,
                         double tau, double gamma);

// Minimizer of gamma*(<g, x> + tau/2*|x_under - x|^2) + 1/2*|x_prev - x|^2:
// (x_prev + gamma*tau*x_under - gamma*g) / (1 + gamma*tau).
Vector prox_step(const Vector& x_prev, const Vector& x_under, const Vector& g,
                 double gamma, double tau);

// Weighted average of the inner aggregates; weights need not be normalized.
Vector inner_aggregate(const std::vector<Vector>& points,
                       const std::vector<double>& weights);

// Advances the state by one epoch (state.epoch + 1). Draws and queries go
// through the supplied stream and counter. Throws DivergenceError when an
// iterate goes non-finite.
EpochState run_epoch(const FiniteSumObjective& obj, const VaragConfig& cfg,
                     EpochState state, QueryCounter& counter, RngStream& rng);

// Full solver run: epochs 1..cfg.epochs, one trace record per epoch holding
// the objective at the new pivot and the cumulative query count.
RunTrace zo_varag(const FiniteSumObjective& obj, const VaragConfig& cfg);

}  // namespace zodfo
