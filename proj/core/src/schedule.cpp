#include "zodfo/schedule.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace zodfo {

namespace {

int warmup_boundary(Regime regime, int d, int n) {
  const std::uint64_t m = is_gaussian(regime)
                              ? static_cast<std::uint64_t>(d + 4) *
                                    static_cast<std::uint64_t>(n)
                              : static_cast<std::uint64_t>(n);
  // bit_width(m) = floor(log2(m)) + 1 for m >= 1.
  return static_cast<int>(std::bit_width(m));
}

double default_eta(Regime regime, int d, double smoothness) {
  if (is_gaussian(regime)) {
    return 1.0 / (12.0 * static_cast<double>(d + 4) * smoothness);
  }
  return 1.0 / (12.0 * smoothness);
}

}  // namespace

Schedule::Schedule(Regime regime, int d, int n, double smoothness, double tau,
                   int batch, const ScheduleOptions& options)
    : regime_(regime),
      d_(d),
      n_(n),
      smoothness_(smoothness),
      tau_(tau),
      batch_(batch),
      s0_(0),
      eta_(0.0),
      p0_(options.p0) {
  if (d_ < 1) throw std::invalid_argument("schedule: dimension must be positive");
  if (n_ < 1) throw std::invalid_argument("schedule: need at least one component");
  if (!(smoothness_ > 0.0)) {
    throw std::invalid_argument("schedule: smoothness constant must be positive");
  }
  if (tau_ < 0.0 || tau_ > smoothness_) {
    throw std::invalid_argument("schedule: tau must lie in [0, smoothness]");
  }
  if (is_strongly_convex(regime_) && !(tau_ > 0.0)) {
    throw std::invalid_argument("schedule: strongly convex regime needs tau > 0");
  }
  if (batch_ < 1) throw std::invalid_argument("schedule: batch must be positive");
  if (!(p0_ > 0.0) || p0_ >= 1.0) {
    throw std::invalid_argument("schedule: p must lie in (0, 1)");
  }
  s0_ = warmup_boundary(regime_, d_, n_);
  eta_ = options.eta.value_or(default_eta(regime_, d_, smoothness_));
  if (!(eta_ > 0.0)) throw std::invalid_argument("schedule: eta must be positive");
}

std::int64_t Schedule::epoch_length(int s) const {
  if (s < 1) throw std::invalid_argument("schedule: epoch index starts at 1");
  const int capped = std::min(s, s0_);
  return std::int64_t{1} << (capped - 1);
}

std::int64_t Schedule::inner_iterations(int s) const {
  const std::int64_t t = epoch_length(s);
  const std::int64_t b = batch_;
  return std::max<std::int64_t>(1, (t + b - 1) / b);
}

double Schedule::alpha(int s) const {
  if (s < 1) throw std::invalid_argument("schedule: epoch index starts at 1");
  if (s <= s0_) return 0.5;
  switch (regime_) {
    case Regime::gaussian_convex:
    case Regime::coordinate_convex:
      return 2.0 / static_cast<double>(s - s0_ + 4);
    case Regime::gaussian_strongly_convex:
      return std::min(std::sqrt(static_cast<double>(n_) * tau_ /
                                (24.0 * smoothness_)),
                      0.5);
    case Regime::coordinate_strongly_convex:
      return std::min(std::sqrt(static_cast<double>(n_) * tau_ /
                                (12.0 * smoothness_)),
                      0.5);
  }
  throw std::logic_error("schedule: unknown regime");
}

double Schedule::gamma(int s) const { return eta_ / alpha(s); }

double Schedule::p(int s) const {
  if (s < 1) throw std::invalid_argument("schedule: epoch index starts at 1");
  return p0_;
}

Schedule make_schedule(Regime regime, int d, int n, double smoothness,
                       double tau, int batch, const ScheduleOptions& options) {
  return Schedule(regime, d, n, smoothness, tau, batch, options);
}

std::vector<double> theta_weights(const Schedule& schedule, int s) {
  const std::int64_t m = schedule.inner_iterations(s);
  const double alpha = schedule.alpha(s);
  const double gamma = schedule.gamma(s);
  const double p = schedule.p(s);
  std::vector<double> theta(static_cast<std::size_t>(m));

  const bool geometric =
      is_strongly_convex(schedule.regime()) && s > schedule.warmup_epochs();
  if (!geometric) {
    // Flat weights scaled by (alpha + p), except the final iterate.
    const double ratio = gamma / alpha;
    for (std::int64_t t = 1; t < m; ++t) {
      theta[static_cast<std::size_t>(t - 1)] = ratio * (alpha + p);
    }
    theta[static_cast<std::size_t>(m - 1)] = ratio;
    return theta;
  }

  // Geometric weights Gamma_t = (1 + tau*gamma/2)^t for Gaussian regimes and
  // (1 + tau*gamma)^t for coordinate regimes.
  const double growth =
      is_gaussian(schedule.regime())
          ? 1.0 + 0.5 * schedule.strong_convexity() * gamma
          : 1.0 + schedule.strong_convexity() * gamma;
  const double carry = 1.0 - alpha - p;
  double gamma_prev = 1.0;  // Gamma_{t-1}, starting at Gamma_0 = 1
  for (std::int64_t t = 1; t < m; ++t) {
    const double gamma_t = gamma_prev * growth;
    theta[static_cast<std::size_t>(t - 1)] = gamma_prev - carry * gamma_t;
    gamma_prev = gamma_t;
  }
  theta[static_cast<std::size_t>(m - 1)] = gamma_prev;
  return theta;
}

ScheduleValidation validate_schedule(const Schedule& schedule, int horizon) {
  if (horizon < 1) throw std::invalid_argument("validate_schedule: horizon >= 1");
  const double L = schedule.smoothness();
  const double tau = schedule.strong_convexity();
  const double c = is_gaussian(schedule.regime())
                       ? 4.0 * static_cast<double>(schedule.dimension() + 4)
                       : 4.0;
  ScheduleValidation report;
  report.epochs.reserve(static_cast<std::size_t>(horizon));
  for (int s = 1; s <= horizon; ++s) {
    const double alpha = schedule.alpha(s);
    const double gamma = schedule.gamma(s);
    ScheduleValidation::EpochMargins margins;
    margins.epoch = s;
    margins.positivity = 1.0 + tau * gamma - L * alpha * gamma;
    margins.momentum =
        margins.positivity > 0.0
            ? schedule.p(s) - c * L * alpha * gamma / margins.positivity
            : -std::numeric_limits<double>::infinity();
    if (!margins.ok() && report.first_violation < 0) {
      report.first_violation = s;
      report.all_ok = false;
    }
    report.epochs.push_back(margins);
  }
  return report;
}

}  // namespace zodfo
