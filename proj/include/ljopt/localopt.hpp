#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ljopt/errors.hpp"

namespace ljopt {

/// Smooth objective callback: returns f(x) and writes the gradient into
/// `grad` (same length as x). Every evaluation produces both, so the driver
/// can always pair a value with its gradient at the same point.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

/// Armijo sufficient-decrease coefficient.
inline constexpr double kArmijoC1 = 1e-4;
/// Backtracking shrink factor.
inline constexpr double kBacktrackFactor = 0.5;
/// Steps below this signal line-search failure.
inline constexpr double kMinStep = 1e-16;

struct LocalOptOptions {
  double grad_tol = 1e-8;    // converged when ||grad||_inf <= grad_tol
  int max_iters = 10000;     // accepted-step budget, capped at 1e7
  double initial_step = 1.0; // trial-step scale while no curvature history exists
  int memory = 10;           // quasi-Newton history length

  void validate() const;  // throws DomainError on bad fields
};

struct LocalOptResult {
  std::vector<double> x_star;
  double f_star = 0.0;
  double grad_norm = 0.0;  // ||grad||_inf at x_star
  int iters = 0;           // accepted steps
  bool converged = false;
  std::vector<double> f_history;  // f at x0 and after each accepted step
  std::string message;            // non-empty when the run ended on a diagnostic
};

/// Thrown when the objective returns a non-finite value or gradient at an
/// iterate the driver must trust; carries the last good point seen.
class NonFiniteError : public Error {
 public:
  NonFiniteError(const std::string& what, std::vector<double> last_x, double last_f)
      : Error(what), last_x_(std::move(last_x)), last_f_(last_f) {}
  const std::vector<double>& last_x() const noexcept { return last_x_; }
  double last_f() const noexcept { return last_f_; }

 private:
  std::vector<double> last_x_;
  double last_f_;
};

/// Backtracking Armijo search along `direction` from x, where f_x = f(x) and
/// slope = grad(x) . direction (must be negative; DomainError otherwise).
/// On success the accepted point, its gradient, and its value are written to
/// x_out / grad_out / f_out and the step is returned. Returns nullopt when no
/// step above kMinStep passes; trial evaluations that throw toolkit errors or
/// produce non-finite values are treated as rejections.
std::optional<double> line_search(const Objective& objective, std::span<const double> x,
                                  std::span<const double> direction, double f_x,
                                  double slope, std::span<double> x_out,
                                  std::span<double> grad_out, double& f_out,
                                  double initial_step = 1.0);

/// Limited-memory quasi-Newton minimization with backtracking line search.
/// The iterate sequence is deterministic for identical inputs and options.
/// Exhausting max_iters is not an error: the result comes back with
/// converged = false. A failed line search falls back to steepest descent
/// once, then stops with a diagnostic message in the result.
LocalOptResult minimize_local(const Objective& objective, std::vector<double> x0,
                              const LocalOptOptions& opts = {});

}  // namespace ljopt
