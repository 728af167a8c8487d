#pragma once

// Shared numerical oracles for the test suite: central finite differences
// (implemented against nothing but the definition of a derivative, so it can
// referee every analytic gradient) and rigid-motion helpers for invariance
// checks.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ljopt/rng.hpp"

namespace testutil {

using ScalarFn = std::function<double(std::span<const double>)>;

// Central finite differences: g_k = (f(x + h e_k) - f(x - h e_k)) / (2h).
inline std::vector<double> fd_gradient(const ScalarFn& f, std::vector<double> x,
                                       double h = 1e-6) {
  std::vector<double> grad(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double saved = x[k];
    x[k] = saved + h;
    const double fp = f(x);
    x[k] = saved - h;
    const double fm = f(x);
    x[k] = saved;
    grad[k] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

// Worst component-wise error between an analytic and a reference gradient:
// relative where the reference is meaningfully nonzero, absolute below
// `abs_floor`.
inline double max_gradient_error(std::span<const double> got,
                                 std::span<const double> want,
                                 double abs_floor = 1e-8) {
  double worst = 0.0;
  for (std::size_t k = 0; k < got.size(); ++k) {
    const double denom = std::abs(want[k]) > abs_floor ? std::abs(want[k]) : 1.0;
    worst = std::max(worst, std::abs(got[k] - want[k]) / denom);
  }
  return worst;
}

// Rotation matrix (row-major 3x3) about a random axis by a random angle.
inline std::array<double, 9> random_rotation(ljopt::Rng& rng) {
  double ax = 0.0, ay = 0.0, az = 0.0, norm = 0.0;
  do {
    ax = rng.uniform(-1.0, 1.0);
    ay = rng.uniform(-1.0, 1.0);
    az = rng.uniform(-1.0, 1.0);
    norm = std::sqrt(ax * ax + ay * ay + az * az);
  } while (norm < 1e-3);
  ax /= norm;
  ay /= norm;
  az /= norm;
  const double theta = rng.uniform(0.0, 6.283185307179586);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double t = 1.0 - c;
  return {c + t * ax * ax,      t * ax * ay - s * az, t * ax * az + s * ay,
          t * ax * ay + s * az, c + t * ay * ay,      t * ay * az - s * ax,
          t * ax * az - s * ay, t * ay * az + s * ax, c + t * az * az};
}

// Applies x -> R x + t to every atom of a flattened coordinate vector.
inline std::vector<double> apply_rigid(std::span<const double> coords,
                                       const std::array<double, 9>& rot,
                                       const std::array<double, 3>& shift) {
  std::vector<double> out(coords.size());
  for (std::size_t a = 0; a + 2 < coords.size(); a += 3) {
    const double x = coords[a], y = coords[a + 1], z = coords[a + 2];
    out[a] = rot[0] * x + rot[1] * y + rot[2] * z + shift[0];
    out[a + 1] = rot[3] * x + rot[4] * y + rot[5] * z + shift[1];
    out[a + 2] = rot[6] * x + rot[7] * y + rot[8] * z + shift[2];
  }
  return out;
}

}  // namespace testutil
