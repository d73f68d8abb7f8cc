#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "zodfo/problems.hpp"
#include "zodfo/varag.hpp"

using namespace zodfo;

namespace {

// Two-component diagonal quadratic used throughout: average curvature
// diag(0.7, 0.6), full gradient Dbar * x.
FiniteSumObjective two_d_quadratic() {
  std::vector<Vector> diags(2, Vector::Zero(2));
  diags[0] << 1.0, 0.3;
  diags[1] << 0.4, 0.9;
  return FiniteSumObjective(
      2, 2, /*smoothness=*/1.0, /*strong_convexity=*/0.0,
      [diags](int i, const Vector& x) {
        return 0.5 * diags[static_cast<std::size_t>(i)].dot(x.cwiseProduct(x));
      },
      [diags](int i, const Vector& x) {
        return Vector(diags[static_cast<std::size_t>(i)].cwiseProduct(x));
      });
}

std::function<Vector(const Vector&)> average_gradient_hook() {
  return [](const Vector& x) {
    Vector dbar(2);
    dbar << 0.7, 0.6;
    return Vector(dbar.cwiseProduct(x));
  };
}

// Independently written epoch recursion for the exact-gradient hook path.
// Plain loops, no shared helpers with the library.
struct RefState {
  Vector x;
  Vector x_bar;
  Vector x_tilde;
};

RefState reference_epoch(const std::function<Vector(const Vector&)>& grad,
                         const Schedule& sched, int s, const RefState& in,
                         PivotOption option) {
  const double alpha = sched.alpha(s);
  const double gamma = sched.gamma(s);
  const double p = sched.p(s);
  const double tau = sched.strong_convexity();
  const std::int64_t m = sched.inner_iterations(s);

  const Vector pivot = option == PivotOption::averaged ? in.x_tilde : in.x_bar;
  const Vector g_tilde = grad(pivot);
  (void)g_tilde;  // the hook path replaces the whole inner gradient

  Vector xs = in.x;
  Vector xb = pivot;
  const std::vector<double> theta = theta_weights(sched, s);
  Vector num = Vector::Zero(in.x.size());
  double den = 0.0;
  for (std::int64_t t = 1; t <= m; ++t) {
    const double tg = 1.0 + tau * gamma;
    Vector xu = (tg * (1.0 - alpha - p) * xb + alpha * xs + tg * p * pivot) /
                (1.0 + tau * gamma * (1.0 - alpha));
    Vector g = grad(xu);
    xs = (xs + gamma * tau * xu - gamma * g) / (1.0 + gamma * tau);
    xb = (1.0 - alpha - p) * xb + alpha * xs + p * pivot;
    const double w = theta[static_cast<std::size_t>(t - 1)];
    num += w * xb;
    den += w;
  }
  return RefState{xs, xb, num / den};
}

}  // namespace

TEST_CASE("inner extrapolation worked example") {
  Vector x_prev(2), x_bar(2), x_tilde(2);
  x_prev << 1.0, 0.0;
  x_bar << 0.0, 1.0;
  x_tilde << 0.0, 0.0;
  Vector out = inner_extrapolate(x_prev, x_bar, x_tilde, 0.5, 0.5, 0.0, 0.1);
  CHECK(out(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(out(1) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("inner extrapolation degenerate weights") {
  Vector x_prev(1), x_bar(1), x_tilde(1);
  x_prev << 3.0;
  x_bar << -2.0;
  x_tilde << 7.0;
  // alpha = 1, p = 0 returns the previous iterate for any tau*gamma.
  Vector out = inner_extrapolate(x_prev, x_bar, x_tilde, 1.0, 0.0, 0.5, 0.3);
  CHECK(out(0) == doctest::Approx(3.0).epsilon(1e-15));

  // All sequences at the same point: the extrapolation is a fixed point.
  Vector v(1);
  v << 1.25;
  Vector fixed = inner_extrapolate(v, v, v, 0.4, 0.3, 0.2, 0.6);
  CHECK(fixed(0) == doctest::Approx(1.25).epsilon(1e-14));
}

TEST_CASE("inner extrapolation against the raw formula") {
  Vector x_prev(1), x_bar(1), x_tilde(1);
  x_prev << 2.0;
  x_bar << -1.0;
  x_tilde << 0.5;
  const double alpha = 0.3, p = 0.25, tau = 0.4, gamma = 0.2;
  const double tg = 1.0 + tau * gamma;
  const double expected =
      (tg * (1.0 - alpha - p) * -1.0 + alpha * 2.0 + tg * p * 0.5) /
      (1.0 + tau * gamma * (1.0 - alpha));
  Vector out = inner_extrapolate(x_prev, x_bar, x_tilde, alpha, p, tau, gamma);
  CHECK(out(0) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("prox step worked examples") {
  Vector x_prev(2), x_under(2), g(2);
  x_prev << 0.0, 0.0;
  x_under << 0.0, 0.0;
  g << 1.0, 0.0;
  Vector out = prox_step(x_prev, x_under, g, 0.1, 0.0);
  CHECK(out(0) == doctest::Approx(-0.1).epsilon(1e-15));
  CHECK(out(1) == doctest::Approx(0.0));

  Vector a(1), b(1), c(1);
  a << 1.0;
  b << 2.0;
  c << 3.0;
  Vector out2 = prox_step(a, b, c, 0.2, 0.5);
  CHECK(out2(0) == doctest::Approx(6.0 / 11.0).epsilon(1e-15));
}

TEST_CASE("prox step satisfies the first order optimality condition") {
  Vector x_prev(3), x_under(3), g(3);
  x_prev << 1.0, -2.0, 0.5;
  x_under << 0.25, 0.75, -1.0;
  g << 0.3, -0.1, 0.9;
  const double gamma = 0.15;
  const double tau = 0.6;
  Vector x = prox_step(x_prev, x_under, g, gamma, tau);
  // gamma*(g + tau*(x - x_under)) + (x - x_prev) = 0 at the minimizer.
  Vector residual = gamma * (g + tau * (x - x_under)) + (x - x_prev);
  CHECK(residual.norm() <= 1e-14);

  auto objective = [&](const Vector& z) {
    return gamma * (g.dot(z) + 0.5 * tau * (x_under - z).squaredNorm()) +
           0.5 * (x_prev - z).squaredNorm();
  };
  const double at_min = objective(x);
  for (int j = 0; j < 3; ++j) {
    Vector zp = x;
    zp(j) += 1e-3;
    CHECK(objective(zp) > at_min);
    zp(j) -= 2e-3;
    CHECK(objective(zp) > at_min);
  }
}

TEST_CASE("inner aggregate handles unnormalized weights") {
  Vector a(2), b(2);
  a << 1.0, 0.0;
  b << 0.0, 1.0;
  Vector avg = inner_aggregate({a, b}, {3.0, 1.0});
  CHECK(avg(0) == doctest::Approx(0.75));
  CHECK(avg(1) == doctest::Approx(0.25));
  CHECK_THROWS_AS(inner_aggregate({a}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(inner_aggregate({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(inner_aggregate({a, b}, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("one epoch on a one dimensional quadratic, hand simulated") {
  // f(x) = x^2/2, n = 1, coordinate flavor, start at 1. The canonical
  // schedule has T = 1, alpha = p = 1/2, gamma = 1/6. The single inner step
  // lands at x_1 = 5/6 and the aggregate at xtilde = 11/12.
  FiniteSumObjective obj(1, 1, 1.0, 0.0,
                         [](int, const Vector& x) { return 0.5 * x(0) * x(0); });
  Schedule sched = make_schedule(Regime::coordinate_convex, 1, 1, 1.0, 0.0, 1);
  REQUIRE(sched.inner_iterations(1) == 1);

  VaragConfig cfg(sched);
  cfg.estimator.nu = 1e-3;
  Vector one(1);
  one << 1.0;
  cfg.start = one;

  QueryCounter counter;
  RngStream rng(0);
  EpochState state = run_epoch(obj, cfg, initial_state(one), counter, rng);
  CHECK(state.epoch == 1);
  CHECK(state.x(0) == doctest::Approx(5.0 / 6.0).epsilon(1e-9));
  CHECK(state.x_tilde(0) == doctest::Approx(11.0 / 12.0).epsilon(1e-9));
  CHECK(full_objective(obj, state.x_tilde) < full_objective(obj, one));

  // Same walkthrough through the exact hook: no estimator noise at all.
  VaragConfig exact(sched);
  exact.start = one;
  exact.exact_gradient = [](const Vector& x) { return x; };
  QueryCounter counter2;
  RngStream rng2(0);
  EpochState state2 = run_epoch(obj, exact, initial_state(one), counter2, rng2);
  CHECK(state2.x_tilde(0) == doctest::Approx(11.0 / 12.0).epsilon(1e-14));
  CHECK(counter2.total == 0);
}

TEST_CASE("epoch pivot equals the weighted aggregate average") {
  QuadraticProblem problem = quadratic_objective(3, 8, 0.2, 1.0, 6);
  Schedule sched = make_schedule(Regime::gaussian_convex, 3, 8, 1.0, 0.0, 1);
  VaragConfig cfg(sched);
  cfg.seed = 5;

  std::vector<Vector> aggregates;
  cfg.inner_observer = [&](int, std::int64_t, const Vector& x_bar_t) {
    aggregates.push_back(x_bar_t);
  };

  QueryCounter counter;
  RngStream rng(cfg.seed);
  Vector x0 = Vector::Ones(3);
  EpochState state = initial_state(x0);
  for (int s = 1; s <= 3; ++s) {
    aggregates.clear();
    state = run_epoch(problem.objective, cfg, std::move(state), counter, rng);
    const std::vector<double> theta = theta_weights(sched, s);
    REQUIRE(aggregates.size() == theta.size());
    Vector recombined = inner_aggregate(aggregates, theta);
    CHECK((recombined - state.x_tilde).norm() <= 1e-12);
  }
}

TEST_CASE("first inner gradient collapses onto the pivotal gradient") {
  // At epoch 1 the extrapolated point coincides with the pivot, so the
  // variance-reduced estimate cancels exactly regardless of the draw, and
  // the first prox step is fully determined by the pivotal gradient.
  QuadraticProblem problem = quadratic_objective(4, 6, 0.3, 1.0, 12);
  Schedule sched = make_schedule(Regime::gaussian_convex, 4, 6, 1.0, 0.0, 1);
  REQUIRE(sched.inner_iterations(1) == 1);
  VaragConfig cfg(sched);
  cfg.seed = 77;
  Vector x0(4);
  x0 << 1.0, -0.5, 0.25, 2.0;
  cfg.start = x0;

  QueryCounter counter;
  RngStream rng(cfg.seed);
  EpochState state = run_epoch(problem.objective, cfg, initial_state(x0), counter, rng);

  QueryCounter side;
  PivotalGradient pivotal =
      coordinate_full_estimate(problem.objective, x0, cfg.estimator, side);
  Vector expected = prox_step(x0, x0, pivotal.gradient, sched.gamma(1), 0.0);
  CHECK((state.x - expected).norm() == 0.0);
}

TEST_CASE("per epoch query increments match the closed form") {
  QuadraticProblem problem = quadratic_objective(3, 7, 0.917, 1.0, 2);

  // Gaussian flavor: 2dn pivot queries plus 4 per batched pair.
  {
    Schedule sched = make_schedule(Regime::gaussian_convex, 3, 7, 1.0, 0.0, 2);
    VaragConfig cfg(sched);
    cfg.epochs = 5;
    cfg.seed = 1;
    RunTrace trace = zo_varag(problem.objective, cfg);
    REQUIRE(trace.records.size() == 5);
    std::uint64_t previous = 0;
    for (int s = 1; s <= 5; ++s) {
      const std::uint64_t got = trace.records[static_cast<std::size_t>(s - 1)].queries;
      const std::uint64_t expected =
          2ull * 3 * 7 + 4ull * 2 * static_cast<std::uint64_t>(sched.inner_iterations(s));
      CHECK(got - previous == expected);
      previous = got;
    }
  }

  // Coordinate flavor: the batched pair costs 4d per draw.
  {
    Schedule sched = make_schedule(Regime::coordinate_strongly_convex, 3, 7, 1.0,
                                   0.917, 3);
    VaragConfig cfg(sched);
    cfg.epochs = 6;
    cfg.seed = 1;
    RunTrace trace = zo_varag(problem.objective, cfg);
    REQUIRE(trace.records.size() == 6);
    std::uint64_t previous = 0;
    for (int s = 1; s <= 6; ++s) {
      const std::uint64_t got = trace.records[static_cast<std::size_t>(s - 1)].queries;
      const std::uint64_t expected =
          2ull * 3 * 7 +
          4ull * 3 * 3 * static_cast<std::uint64_t>(sched.inner_iterations(s));
      CHECK(got - previous == expected);
      previous = got;
    }
  }
}

TEST_CASE("identical seeds give bit identical runs") {
  QuadraticProblem problem = quadratic_objective(5, 10, 0.1, 1.0, 3);
  Schedule sched = make_schedule(Regime::gaussian_strongly_convex, 5, 10, 1.0, 0.1, 1);
  VaragConfig cfg(sched);
  cfg.epochs = 6;
  cfg.seed = 99;
  cfg.start = Vector::Ones(5);

  RunTrace a = zo_varag(problem.objective, cfg);
  RunTrace b = zo_varag(problem.objective, cfg);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(a.records[k].f_value == b.records[k].f_value);
    CHECK(a.records[k].queries == b.records[k].queries);
  }

  cfg.seed = 100;
  RunTrace c = zo_varag(problem.objective, cfg);
  bool any_diff = false;
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    if (a.records[k].f_value != c.records[k].f_value) any_diff = true;
  }
  CHECK(any_diff);
}

TEST_CASE("pivot options agree early and then separate") {
  QuadraticProblem problem = quadratic_objective(4, 20, 0.2, 1.0, 9);
  Schedule sched = make_schedule(Regime::gaussian_convex, 4, 20, 1.0, 0.0, 1);
  VaragConfig averaged(sched);
  averaged.epochs = 4;
  averaged.seed = 21;
  averaged.start = Vector::Ones(4);
  VaragConfig aggregate = averaged;
  aggregate.pivot = PivotOption::aggregate;

  RunTrace a = zo_varag(problem.objective, averaged);
  RunTrace b = zo_varag(problem.objective, aggregate);
  REQUIRE(a.records.size() == 4);
  REQUIRE(b.records.size() == 4);
  // Epoch 1: both options start from the same pivot and the same stream.
  CHECK(a.records[0].f_value == b.records[0].f_value);
  // After a multi-step epoch the weighted average and the last aggregate
  // differ, so the runs separate.
  bool separated = false;
  for (std::size_t k = 1; k < 4; ++k) {
    if (a.records[k].f_value != b.records[k].f_value) separated = true;
  }
  CHECK(separated);
  CHECK(a.config_echo.at("pivot") == "1");
  CHECK(b.config_echo.at("pivot") == "2");
}

TEST_CASE("exact hook run matches an independent recursion, convex regime") {
  FiniteSumObjective obj = two_d_quadratic();
  Schedule sched = make_schedule(Regime::gaussian_convex, 2, 2, 1.0, 0.0, 1);
  auto hook = average_gradient_hook();

  Vector x0(2);
  x0 << 1.0, -2.0;

  VaragConfig cfg(sched);
  cfg.exact_gradient = hook;
  cfg.start = x0;

  QueryCounter counter;
  RngStream rng(0);
  EpochState state = initial_state(x0);
  RefState ref{x0, x0, x0};
  for (int s = 1; s <= 5; ++s) {
    state = run_epoch(obj, cfg, std::move(state), counter, rng);
    ref = reference_epoch(hook, sched, s, ref, PivotOption::averaged);
    CHECK((state.x - ref.x).norm() <= 1e-12);
    CHECK((state.x_bar - ref.x_bar).norm() <= 1e-12);
    CHECK((state.x_tilde - ref.x_tilde).norm() <= 1e-12);
  }
  CHECK(counter.total == 0);
}

TEST_CASE("exact hook run matches an independent recursion, strongly convex") {
  FiniteSumObjective obj(2, 2, 1.0, 0.6,
                         [](int i, const Vector& x) {
                           const double w = i == 0 ? 0.8 : 0.4;
                           return 0.5 * w * x.squaredNorm();
                         });
  auto hook = [](const Vector& x) { return Vector(0.6 * x); };
  Schedule sched = make_schedule(Regime::gaussian_strongly_convex, 2, 2, 1.0, 0.6, 1);

  Vector x0(2);
  x0 << -1.0, 0.5;
  VaragConfig cfg(sched);
  cfg.exact_gradient = hook;
  cfg.start = x0;
  cfg.pivot = PivotOption::aggregate;

  QueryCounter counter;
  RngStream rng(0);
  EpochState state = initial_state(x0);
  RefState ref{x0, x0, x0};
  // Run past the warmup boundary so the geometric weights engage.
  for (int s = 1; s <= sched.warmup_epochs() + 4; ++s) {
    state = run_epoch(obj, cfg, std::move(state), counter, rng);
    ref = reference_epoch(hook, sched, s, ref, PivotOption::aggregate);
    CHECK((state.x - ref.x).norm() <= 1e-12);
    CHECK((state.x_tilde - ref.x_tilde).norm() <= 1e-12);
  }
}

TEST_CASE("oversized steps divergence is reported, not thrown") {
  QuadraticProblem problem = quadratic_objective(3, 5, 0.4, 1.0, 14);
  ScheduleOptions opts;
  // Large enough that the first prox step overflows the objective. Moderately
  // oversized steps do not diverge: once |x| exceeds nu/epsilon the central
  // differences quantize to zero and the iterate freezes at a finite value.
  opts.eta = 1e200;
  Schedule sched = make_schedule(Regime::coordinate_convex, 3, 5, 1.0, 0.0, 1, opts);
  VaragConfig cfg(sched);
  cfg.epochs = 10;
  cfg.start = Vector::Ones(3);
  RunTrace trace = zo_varag(problem.objective, cfg);
  CHECK(trace.status == RunStatus::diverged);
  CHECK_FALSE(trace.diagnostic.empty());
  CHECK(trace.records.size() < 10);
}

TEST_CASE("configuration validation") {
  QuadraticProblem problem = quadratic_objective(3, 5, 0.4, 1.0, 14);
  Schedule sched = make_schedule(Regime::gaussian_convex, 3, 5, 1.0, 0.0, 1);

  VaragConfig bad_epochs(sched);
  bad_epochs.epochs = 0;
  CHECK_THROWS_AS(zo_varag(problem.objective, bad_epochs), std::invalid_argument);

  Schedule wrong_dim = make_schedule(Regime::gaussian_convex, 4, 5, 1.0, 0.0, 1);
  VaragConfig mismatched(wrong_dim);
  CHECK_THROWS_AS(zo_varag(problem.objective, mismatched), std::invalid_argument);

  VaragConfig bad_mu(sched);
  bad_mu.estimator.mu = 0.0;
  CHECK_THROWS_AS(zo_varag(problem.objective, bad_mu), std::invalid_argument);

  // The exact hook bypasses the estimators, so zero radii are fine there.
  VaragConfig hooked(sched);
  hooked.estimator.mu = 0.0;
  hooked.exact_gradient = [&](const Vector& x) {
    return problem.objective.full_gradient(x);
  };
  RunTrace trace = zo_varag(problem.objective, hooked);
  CHECK(trace.status == RunStatus::ok);

  VaragConfig bad_start(sched);
  bad_start.start = Vector::Ones(2);
  CHECK_THROWS_AS(zo_varag(problem.objective, bad_start), std::invalid_argument);
}

TEST_CASE("trace metadata echoes the run configuration") {
  QuadraticProblem problem = quadratic_objective(3, 5, 0.4, 1.0, 14);
  Schedule sched = make_schedule(Regime::coordinate_strongly_convex, 3, 5, 1.0, 0.4, 2);
  VaragConfig cfg(sched);
  cfg.epochs = 2;
  cfg.seed = 31;
  RunTrace trace = zo_varag(problem.objective, cfg);
  CHECK(trace.solver == "zo-varag");
  CHECK(trace.seed == 31);
  CHECK(trace.config_echo.at("estimator") == "coordinate");
  CHECK(trace.config_echo.at("batch") == "2");
  CHECK(trace.config_echo.at("warmup_epochs") ==
        std::to_string(sched.warmup_epochs()));
  REQUIRE(trace.records.size() == 2);
  CHECK(trace.records[0].epoch == 1);
  CHECK(trace.records[1].epoch == 2);
  CHECK(trace.total_queries() == trace.records[1].queries);
}
