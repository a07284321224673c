#include <atomic>
#include <cmath>

#include "doctest.h"
#include "qtransduce/errors.hpp"
#include "qtransduce/optimizer.hpp"

using namespace qtr;

TEST_CASE("quadratic bowl") {
  auto f = [](const std::vector<double>& x) { return (x[0] - 0.3) * (x[0] - 0.3) + 2.0 * (x[1] + 1.2) * (x[1] + 1.2); };
  const auto r = minimize(f, {{-2.0, 2.0}, {-3.0, 1.0}});
  CHECK(r.best_x[0] == doctest::Approx(0.3).epsilon(1e-3));
  CHECK(r.best_x[1] == doctest::Approx(-1.2).epsilon(1e-3));
  CHECK(r.evaluations <= 200);
  CHECK(r.converged);
}

TEST_CASE("Rosenbrock inside a box") {
  auto f = [](const std::vector<double>& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  NelderMeadOptions o;
  o.max_evaluations = 2000;
  o.tolerance = 1e-12;
  o.x_tolerance = 1e-7;
  const auto r = minimize(f, {{-2.0, 2.0}, {-1.0, 3.0}}, o);
  CHECK(r.best_x[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r.best_x[1] == doctest::Approx(1.0).epsilon(2e-3));
}

TEST_CASE("never leaves the bounds") {
  std::atomic<int> outside{0};
  const std::vector<Bound> b{{1.0, 2.0}, {1e-3, 1e3, true}};
  auto f = [&](const std::vector<double>& x) {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] < b[i].lo || x[i] > b[i].hi) ++outside;
    return -x[0] - std::log(x[1]);  // optimum in the corner
  };
  const auto r = minimize(f, b);
  CHECK(outside == 0);
  CHECK(r.best_x[0] == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(r.best_x[1] == doctest::Approx(1e3).epsilon(1e-2));
  for (const auto& e : r.trace) {
    CHECK(e.x[0] >= 1.0);
    CHECK(e.x[1] <= 1e3);
  }
}

TEST_CASE("degenerate bounds return a boundary point") {
  const double lo = 5.0, hi = 5.0 + 1e-9;
  const auto r = minimize([](const std::vector<double>& x) { return -x[0]; }, {{lo, hi}});
  CHECK(r.best_x[0] >= lo);
  CHECK(r.best_x[0] <= hi);
  CHECK(r.best_x[0] == doctest::Approx(hi).epsilon(1e-15));
}

TEST_CASE("same seed, same trace, any thread count") {
  auto f = [](const std::vector<double>& x) { return std::sin(3.0 * x[0]) + std::cos(2.0 * x[1]) + 0.1 * x[0] * x[1]; };
  NelderMeadOptions a, b;
  a.threads = 1;
  b.threads = 4;
  a.seed = b.seed = 99;
  const auto ra = minimize(f, {{-3.0, 3.0}, {-3.0, 3.0}}, a);
  const auto rb = minimize(f, {{-3.0, 3.0}, {-3.0, 3.0}}, b);
  REQUIRE(ra.trace.size() == rb.trace.size());
  for (std::size_t i = 0; i < ra.trace.size(); ++i) CHECK(ra.trace[i].x == rb.trace[i].x);
  CHECK(ra.best_value == rb.best_value);
  int starts = 0;
  for (const auto& e : ra.trace) starts = std::max(starts, e.start);
  CHECK(starts == 3);
}

TEST_CASE("infeasible regions and failures") {
  auto half = [](const std::vector<double>& x) {
    if (x[0] < 0.0) throw DomainError("left half undefined");
    return (x[0] - 0.5) * (x[0] - 0.5);
  };
  const auto r = minimize(half, {{-1.0, 1.0}});
  CHECK(r.best_x[0] == doctest::Approx(0.5).epsilon(1e-2));
  CHECK_THROWS_AS(minimize([](const std::vector<double>&) -> double { throw DomainError("never"); }, {{0.0, 1.0}}),
                  NoFeasiblePointError);
  CHECK_THROWS_AS(minimize([](const std::vector<double>& x) { return x[0]; }, {{1.0, 1.0}}), ConfigurationError);
  CHECK_THROWS_AS(minimize([](const std::vector<double>& x) { return x[0]; }, {{0.0, 1.0, true}}), ConfigurationError);
  CHECK_THROWS_AS(minimize([](const std::vector<double>& x) { return x[0]; }, {}), ConfigurationError);
}
