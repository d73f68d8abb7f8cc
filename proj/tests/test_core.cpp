#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "zodfo/objective.hpp"
#include "zodfo/rng.hpp"
#include "zodfo/vector.hpp"

using namespace zodfo;

namespace {

// Two-component ridge-style sum used across the objective tests:
// f_i(x) = 0.5 * (<a_i, x> - y_i)^2 with a_1 = (1, 0), a_2 = (0, 1), y = 0.
FiniteSumObjective tiny_ridge() {
  std::vector<Vector> rows(2, Vector::Zero(2));
  rows[0] << 1.0, 0.0;
  rows[1] << 0.0, 1.0;
  return FiniteSumObjective(
      2, 2, /*smoothness=*/1.0, /*strong_convexity=*/0.0,
      [rows](int i, const Vector& x) {
        const double r = rows[static_cast<std::size_t>(i)].dot(x);
        return 0.5 * r * r;
      },
      [rows](int i, const Vector& x) {
        const Vector& a = rows[static_cast<std::size_t>(i)];
        return Vector(a * a.dot(x));
      });
}

}  // namespace

TEST_CASE("query counter accumulates") {
  QueryCounter counter;
  CHECK(counter.total == 0);
  counter.add(1);
  counter.add(41);
  CHECK(counter.total == 42);
}

TEST_CASE("component evaluation charges exactly one query") {
  FiniteSumObjective obj = tiny_ridge();
  QueryCounter counter;
  Vector x(2);
  x << 2.0, 0.0;
  const double v = evaluate_component(obj, 0, x, counter);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(counter.total == 1);
  evaluate_component(obj, 1, x, counter);
  CHECK(counter.total == 2);
}

TEST_CASE("full objective averages components and charges n queries") {
  FiniteSumObjective obj = tiny_ridge();
  QueryCounter counter;
  Vector x(2);
  x << 2.0, 2.0;
  const double counted = full_objective(obj, x, counter);
  CHECK(counted == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(counter.total == 2);

  // The uncounted overload exists for trace instrumentation only.
  const double silent = full_objective(obj, x);
  CHECK(silent == counted);
  CHECK(counter.total == 2);
}

TEST_CASE("objective validates construction and arguments") {
  auto value = [](int, const Vector& x) { return x.squaredNorm(); };
  CHECK_THROWS_AS(FiniteSumObjective(0, 1, 1.0, 0.0, value), std::invalid_argument);
  CHECK_THROWS_AS(FiniteSumObjective(1, 0, 1.0, 0.0, value), std::invalid_argument);
  CHECK_THROWS_AS(FiniteSumObjective(1, 1, 0.0, 0.0, value), std::invalid_argument);
  CHECK_THROWS_AS(FiniteSumObjective(1, 1, 1.0, -0.1, value), std::invalid_argument);
  CHECK_THROWS_AS(FiniteSumObjective(1, 1, 1.0, 2.0, value), std::invalid_argument);

  FiniteSumObjective obj = tiny_ridge();
  Vector x = Vector::Zero(2);
  CHECK_THROWS_AS(obj.component_value(-1, x), std::out_of_range);
  CHECK_THROWS_AS(obj.component_value(2, x), std::out_of_range);
  CHECK_THROWS_AS(obj.component_value(0, Vector::Zero(3)), std::invalid_argument);

  Vector bad(2);
  bad << 1.0, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(obj.component_value(0, bad), std::invalid_argument);
}

TEST_CASE("gradient oracle is optional") {
  FiniteSumObjective with = tiny_ridge();
  CHECK(with.has_gradient_oracle());
  Vector x(2);
  x << 3.0, -1.0;
  Vector g = with.component_gradient(0, x);
  CHECK(g(0) == doctest::Approx(3.0));
  CHECK(g(1) == doctest::Approx(0.0));

  Vector full = with.full_gradient(x);
  CHECK(full(0) == doctest::Approx(1.5));
  CHECK(full(1) == doctest::Approx(-0.5));

  FiniteSumObjective without(1, 2, 1.0, 0.0,
                             [](int, const Vector& x2) { return x2.squaredNorm(); });
  CHECK_FALSE(without.has_gradient_oracle());
  CHECK_THROWS_AS(without.component_gradient(0, x), std::logic_error);
}

TEST_CASE("objective metadata round trips") {
  FiniteSumObjective obj(3, 4, 2.5, 0.25,
                         [](int, const Vector& x) { return x.squaredNorm(); });
  CHECK(obj.component_count() == 3);
  CHECK(obj.dimension() == 4);
  CHECK(obj.smoothness() == doctest::Approx(2.5));
  CHECK(obj.strong_convexity() == doctest::Approx(0.25));
}

TEST_CASE("rng streams with equal seeds are bit identical") {
  RngStream a(42);
  RngStream b(42);
  for (int k = 0; k < 1000; ++k) {
    CHECK(a.uniform_index(17) == b.uniform_index(17));
    CHECK(a.normal() == b.normal());
  }
  Vector va = a.gaussian_vector(8);
  Vector vb = b.gaussian_vector(8);
  for (int j = 0; j < 8; ++j) CHECK(va(j) == vb(j));
}

TEST_CASE("rng streams with different seeds diverge") {
  RngStream a(1);
  RngStream b(2);
  int equal = 0;
  for (int k = 0; k < 64; ++k) {
    if (a.normal() == b.normal()) ++equal;
  }
  CHECK(equal < 4);
}

TEST_CASE("uniform indices stay in range and look uniform") {
  RngStream rng(7);
  const int n = 6;
  const int draws = 60000;
  std::vector<int> histogram(n, 0);
  for (int k = 0; k < draws; ++k) {
    const int i = rng.uniform_index(n);
    REQUIRE(i >= 0);
    REQUIRE(i < n);
    ++histogram[static_cast<std::size_t>(i)];
  }
  // Expected 10000 per bin; 5 sigma is about 480.
  for (int c : histogram) {
    CHECK(c > 9500);
    CHECK(c < 10500);
  }
  CHECK_THROWS_AS(rng.uniform_index(0), std::invalid_argument);
}

TEST_CASE("uniform01 lies in the half open unit interval") {
  RngStream rng(11);
  for (int k = 0; k < 10000; ++k) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("normal draws match standard moments") {
  RngStream rng(123);
  const int draws = 100000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int k = 0; k < draws; ++k) {
    const double z = rng.normal();
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / draws;
  const double var = sum_sq / draws - mean * mean;
  // 4 sigma bands: mean within 4/sqrt(N), variance within 4*sqrt(2/N).
  CHECK(std::fabs(mean) < 0.013);
  CHECK(std::fabs(var - 1.0) < 0.02);
}

TEST_CASE("gaussian vectors have independent looking coordinates") {
  RngStream rng(5);
  const int d = 4;
  const int draws = 40000;
  Vector mean = Vector::Zero(d);
  double cross = 0.0;
  for (int k = 0; k < draws; ++k) {
    Vector u = rng.gaussian_vector(d);
    mean += u;
    cross += u(0) * u(1);
  }
  mean /= draws;
  cross /= draws;
  for (int j = 0; j < d; ++j) CHECK(std::fabs(mean(j)) < 0.03);
  CHECK(std::fabs(cross) < 0.03);
  CHECK_THROWS_AS(rng.gaussian_vector(0), std::invalid_argument);
}

TEST_CASE("finiteness helpers") {
  Vector ok(2);
  ok << 1.0, 2.0;
  CHECK(is_finite(ok));
  Vector bad(2);
  bad << 1.0, std::numeric_limits<double>::infinity();
  CHECK_FALSE(is_finite(bad));
  CHECK_THROWS_AS(require_finite(bad, "x"), std::invalid_argument);
  CHECK_THROWS_AS(require_dimension(ok, 3, "x"), std::invalid_argument);
}
