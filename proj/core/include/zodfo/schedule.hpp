#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace zodfo {

/*! Which estimator family drives the inner loop, and whether the schedule
 *  exploits strong convexity.  Convex regimes are valid for any tau >= 0;
 *  strongly convex regimes require tau > 0.
 */
enum class Regime {
  gaussian_convex,
  gaussian_strongly_convex,
  coordinate_convex,
  coordinate_strongly_convex,
};

inline bool is_gaussian(Regime r) {
  return r == Regime::gaussian_convex || r == Regime::gaussian_strongly_convex;
}
inline bool is_strongly_convex(Regime r) {
  return r == Regime::gaussian_strongly_convex ||
         r == Regime::coordinate_strongly_convex;
}

struct ScheduleOptions {
  // Equivalent stepsize alpha_s * gamma_s. Defaults to 1/(12(d+4)L) for
  // Gaussian regimes and 1/(12L) for coordinate regimes.
  std::optional<double> eta;
  // Probability weight of the pivot inside the inner loop. The canonical
  // value 1/2 is what the convergence analysis assumes.
  double p0 = 0.5;
};

/*! Per-epoch parameter schedule.
 *
 *  Epoch lengths double until the warmup boundary s0 and stay flat after it:
 *  T(s) = 2^(s-1) for s <= s0, T(s) = 2^(s0-1) beyond. s0 is
 *  floor(log2((d+4)n)) + 1 for Gaussian regimes and floor(log2(n)) + 1 for
 *  coordinate regimes. alpha_s * gamma_s stays constant at eta for every s.
 */
class Schedule {
 public:
  Schedule(Regime regime, int d, int n, double smoothness, double tau,
           int batch, const ScheduleOptions& options = {});

  Regime regime() const { return regime_; }
  int dimension() const { return d_; }
  int component_count() const { return n_; }
  double smoothness() const { return smoothness_; }
  double strong_convexity() const { return tau_; }
  int batch() const { return batch_; }
  int warmup_epochs() const { return s0_; }
  double equivalent_stepsize() const { return eta_; }

  // Pre-batch inner length T(s).
  std::int64_t epoch_length(int s) const;
  // Batch-scaled inner iteration count: max(1, ceil(T(s)/batch)).
  std::int64_t inner_iterations(int s) const;

  double alpha(int s) const;
  double gamma(int s) const;  // eta / alpha(s)
  double p(int s) const;

 private:
  Regime regime_;
  int d_;
  int n_;
  double smoothness_;
  double tau_;
  int batch_;
  int s0_;
  double eta_;
  double p0_;
};

Schedule make_schedule(Regime regime, int d, int n, double smoothness,
                       double tau, int batch,
                       const ScheduleOptions& options = {});

// Weights for the epoch pivot average, defined on the batch-scaled iteration
// range 1..inner_iterations(s). All weights are positive.
std::vector<double> theta_weights(const Schedule& schedule, int s);

/*! Validity margins of the two epoch-level conditions the analysis needs:
 *    positivity:  1 + tau*gamma_s - L*alpha_s*gamma_s > 0
 *    momentum:    p_s - c*L*alpha_s*gamma_s / (1 + tau*gamma_s - L*alpha_s*gamma_s) >= 0
 *  with c = 4(d+4) for Gaussian regimes and c = 4 for coordinate regimes.
 */
struct ScheduleValidation {
  struct EpochMargins {
    int epoch = 0;
    double positivity = 0.0;  // must be > 0
    double momentum = 0.0;    // must be >= 0
    bool ok() const { return positivity > 0.0 && momentum >= 0.0; }
  };
  std::vector<EpochMargins> epochs;
  bool all_ok = true;
  int first_violation = -1;  // epoch index, or -1 when clean
};

ScheduleValidation validate_schedule(const Schedule& schedule, int horizon);

}  // namespace zodfo
