#include <cmath>
#include <span>
#include <vector>

#include "doctest.h"
#include "ljopt/localopt.hpp"
#include "ljopt/potential.hpp"
#include "ljopt/rng.hpp"

using namespace ljopt;

namespace {

const Objective lj_objective = [](std::span<const double> x,
                                  std::span<double> grad) {
  return lj_value_and_gradient(x, grad);
};

// f(x) = ||x - c||^2 with gradient 2(x - c).
Objective bowl(std::vector<double> center) {
  return [center = std::move(center)](std::span<const double> x,
                                      std::span<double> grad) {
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - center[i];
      f += d * d;
      grad[i] = 2.0 * d;
    }
    return f;
  };
}

const Objective rosenbrock = [](std::span<const double> x,
                                std::span<double> grad) {
  const double a = 1.0 - x[0];
  const double b = x[1] - x[0] * x[0];
  grad[0] = -2.0 * a - 400.0 * x[0] * b;
  grad[1] = 200.0 * b;
  return a * a + 100.0 * b * b;
};

double pair_distance(std::span<const double> x) {
  const double dx = x[0] - x[3], dy = x[1] - x[4], dz = x[2] - x[5];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace

TEST_CASE("quadratic bowl converges to its center") {
  const std::vector<double> center = {1.0, -2.0, 3.5, 0.0};
  const LocalOptResult res =
      minimize_local(bowl(center), {10.0, 10.0, -10.0, 4.0});
  CHECK(res.converged);
  CHECK(res.f_star <= 1e-14);
  for (std::size_t i = 0; i < center.size(); ++i)
    CHECK(std::abs(res.x_star[i] - center[i]) <= 1e-7);
  CHECK(res.grad_norm <= 1e-8);
}

TEST_CASE("pair of atoms relaxes to the well bottom") {
  const LocalOptResult res =
      minimize_local(lj_objective, {0.0, 0.0, 0.0, 1.5, 0.0, 0.0});
  CHECK(res.converged);
  CHECK(std::abs(res.f_star - (-1.0)) <= 1e-9);
  CHECK(std::abs(pair_distance(res.x_star) - kWellMinimumFactor) <= 1e-6);
}

TEST_CASE("noisy tetrahedron falls back into its basin") {
  const double s = kWellMinimumFactor / std::sqrt(2.0);
  std::vector<double> x0 = {s, s, s, s, -s, -s, -s, s, -s, -s, -s, s};
  Rng rng(3);
  for (double& c : x0) c += rng.uniform(-0.05, 0.05);
  const LocalOptResult res = minimize_local(lj_objective, x0);
  CHECK(res.converged);
  CHECK(std::abs(res.f_star - (-6.0)) <= 1e-8);
}

TEST_CASE("rosenbrock valley") {
  const LocalOptResult res = minimize_local(rosenbrock, {-1.2, 1.0});
  CHECK(res.converged);
  CHECK(std::abs(res.x_star[0] - 1.0) <= 1e-6);
  CHECK(std::abs(res.x_star[1] - 1.0) <= 1e-6);
}

TEST_CASE("objective values never increase along the run") {
  const LocalOptResult res =
      minimize_local(lj_objective, {0.0, 0.0, 0.0, 0.95, 0.0, 0.0});
  REQUIRE(res.f_history.size() >= 2);
  for (std::size_t k = 1; k < res.f_history.size(); ++k)
    CHECK(res.f_history[k] <= res.f_history[k - 1]);
  CHECK(res.f_star == res.f_history.back());
}

TEST_CASE("restart from the optimum is an immediate no-op") {
  const LocalOptResult first =
      minimize_local(lj_objective, {0.0, 0.0, 0.0, 1.5, 0.0, 0.0});
  REQUIRE(first.converged);
  const LocalOptResult again = minimize_local(lj_objective, first.x_star);
  CHECK(again.converged);
  CHECK(again.iters <= 2);
  CHECK(std::abs(again.f_star - first.f_star) <= 1e-12);
}

TEST_CASE("iteration budget exhaustion is reported, not thrown") {
  LocalOptOptions opts;
  opts.max_iters = 3;
  const LocalOptResult res = minimize_local(rosenbrock, {-1.2, 1.0}, opts);
  CHECK_FALSE(res.converged);
  CHECK(res.iters == 3);
  CHECK(res.f_history.size() == 4);  // f(x0) plus one entry per step
}

TEST_CASE("non-finite objective at the start point throws") {
  const Objective bad = [](std::span<const double> x, std::span<double> grad) {
    grad[0] = 1.0;
    return std::log(x[0]);  // NaN for negative input
  };
  CHECK_THROWS_AS(minimize_local(bad, {-1.0}), NonFiniteError);
  try {
    minimize_local(bad, {-1.0});
  } catch (const NonFiniteError& err) {
    CHECK(err.last_x() == std::vector<double>{-1.0});
  }
}

TEST_CASE("an inconsistent gradient ends with a diagnostic, not a lie") {
  // The reported "gradient" points downhill exactly backwards, so every
  // search direction the driver builds is an ascent direction. The driver
  // must give up after its steepest-descent fallback and say so.
  const Objective liar = [](std::span<const double> x, std::span<double> grad) {
    grad[0] = -2.0 * x[0];  // true gradient is +2x
    return x[0] * x[0];
  };
  const LocalOptResult res = minimize_local(liar, {1.0});
  CHECK_FALSE(res.converged);
  CHECK_FALSE(res.message.empty());
  CHECK(res.f_star == 1.0);  // never accepted an uphill move
}

TEST_CASE("options are validated") {
  LocalOptOptions opts;
  opts.grad_tol = 0.0;
  CHECK_THROWS_AS(minimize_local(rosenbrock, {0.0, 0.0}, opts), DomainError);
  opts = {};
  opts.max_iters = 0;
  CHECK_THROWS_AS(minimize_local(rosenbrock, {0.0, 0.0}, opts), DomainError);
  opts = {};
  opts.max_iters = 20'000'000;
  CHECK_THROWS_AS(minimize_local(rosenbrock, {0.0, 0.0}, opts), DomainError);
  opts = {};
  opts.memory = 0;
  CHECK_THROWS_AS(minimize_local(rosenbrock, {0.0, 0.0}, opts), DomainError);
  opts = {};
  opts.initial_step = -1.0;
  CHECK_THROWS_AS(minimize_local(rosenbrock, {0.0, 0.0}, opts), DomainError);
  CHECK_THROWS_AS(minimize_local(rosenbrock, {}), DomainError);
}

TEST_CASE("line search satisfies the sufficient-decrease condition") {
  const Objective parabola = [](std::span<const double> x,
                                std::span<double> grad) {
    grad[0] = 2.0 * x[0];
    return x[0] * x[0];
  };
  const std::vector<double> x = {1.0};
  const std::vector<double> dir = {-1.0};
  std::vector<double> x_out(1), grad_out(1);
  double f_out = 0.0;
  const auto step =
      line_search(parabola, x, dir, 1.0, -2.0, x_out, grad_out, f_out);
  REQUIRE(step.has_value());
  CHECK(*step > 0.0);
  CHECK(f_out <= 1.0 + 1e-4 * *step * -2.0);
  CHECK(f_out == x_out[0] * x_out[0]);
}

TEST_CASE("line search backtracks on a wildly overshooting direction") {
  // Steep repulsive pair: descent points apart, but the trial direction is
  // scaled so far that the Armijo bound forces several halvings.
  std::vector<double> x = {0.0, 0.0, 0.0, 0.9, 0.0, 0.0};
  std::vector<double> g(6);
  const double f0 = lj_value_and_gradient(x, g);
  std::vector<double> dir(6);
  for (std::size_t i = 0; i < 6; ++i) dir[i] = -1e6 * g[i];
  double slope = 0.0;
  for (std::size_t i = 0; i < 6; ++i) slope += g[i] * dir[i];
  REQUIRE(slope < 0.0);
  std::vector<double> x_out(6), grad_out(6);
  double f_out = 0.0;
  const auto step =
      line_search(lj_objective, x, dir, f0, slope, x_out, grad_out, f_out);
  REQUIRE(step.has_value());
  CHECK(*step < 1.0);  // backtracking engaged
  CHECK(f_out < f0);   // and the move still went downhill
}

TEST_CASE("line search rejects non-descent slopes") {
  const Objective parabola = [](std::span<const double> x,
                                std::span<double> grad) {
    grad[0] = 2.0 * x[0];
    return x[0] * x[0];
  };
  std::vector<double> x_out(1), grad_out(1);
  double f_out = 0.0;
  CHECK_THROWS_AS(line_search(parabola, std::vector<double>{1.0},
                              std::vector<double>{1.0}, 1.0, 2.0, x_out,
                              grad_out, f_out),
                  DomainError);
}
