#include "ljopt/potential.hpp"

#include <cmath>
#include <string>

namespace ljopt {

namespace {

void check_coords(std::span<const double> x) {
  if (x.empty() || x.size() % 3 != 0)
    throw DomainError("coordinate vector must have positive length divisible by 3");
  for (double v : x)
    if (!std::isfinite(v)) throw DomainError("coordinate vector contains a non-finite value");
}

void check_params(const PairPotentialParams& p) {
  if (!(p.epsilon > 0.0)) throw DomainError("epsilon must be > 0");
  if (!(p.sigma > 0.0)) throw DomainError("sigma must be > 0");
}

void check_params(const ABParams& p) {
  if (!(p.a > 0.0) || !(p.b > 0.0)) throw DomainError("A and B must be > 0");
}

void check_params(const HBParams& p) {
  if (!(p.c > 0.0) || !(p.d > 0.0)) throw DomainError("C and D must be > 0");
}

void check_pair_index(int idx, std::size_t n_atoms) {
  if (idx < 0 || static_cast<std::size_t>(idx) >= n_atoms)
    throw DomainError("pair index " + std::to_string(idx) + " out of range for " +
                      std::to_string(n_atoms) + " atoms");
}

}  // namespace

Configuration::Configuration(std::vector<double> c) : coords(std::move(c)) {
  check_coords(coords);
}

double lj_pair_energy(double r, const PairPotentialParams& params) {
  check_params(params);
  if (!(r > 0.0)) throw DomainError("lj_pair_energy: r must be > 0");
  // Evaluated through the squared-distance ratio so that the reduced-unit
  // case agrees bit-for-bit with the cluster-energy pair loop.
  const double sr2 = (params.sigma * params.sigma) / (r * r);
  const double sr6 = sr2 * sr2 * sr2;
  return 4.0 * params.epsilon * (sr6 * sr6 - sr6);
}

double lj_energy(std::span<const double> x) {
  check_coords(x);
  const std::size_t n = x.size() / 3;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[3 * i] - x[3 * j];
      const double dy = x[3 * i + 1] - x[3 * j + 1];
      const double dz = x[3 * i + 2] - x[3 * j + 2];
      const double tau = dx * dx + dy * dy + dz * dz;
      if (tau < kSingularTauTol)
        throw SingularPairError(static_cast<int>(i), static_cast<int>(j));
      const double it = 1.0 / tau;
      const double it3 = it * it * it;
      sum += it3 * it3 - it3;
    }
  }
  return 4.0 * sum;
}

double lj_energy(const Configuration& config) { return lj_energy(config.coords); }

double lj_value_and_gradient(std::span<const double> x, std::span<double> grad) {
  check_coords(x);
  if (grad.size() != x.size())
    throw DomainError("gradient buffer size does not match coordinate vector");
  const std::size_t n = x.size() / 3;
  for (auto& g : grad) g = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[3 * i] - x[3 * j];
      const double dy = x[3 * i + 1] - x[3 * j + 1];
      const double dz = x[3 * i + 2] - x[3 * j + 2];
      const double tau = dx * dx + dy * dy + dz * dz;
      if (tau < kSingularTauTol)
        throw SingularPairError(static_cast<int>(i), static_cast<int>(j));
      const double it = 1.0 / tau;
      const double it3 = it * it * it;
      const double it6 = it3 * it3;
      sum += it6 - it3;
      // d/dX_i of 4(tau^-6 - tau^-3) = 8(3 tau^-4 - 6 tau^-7)(X_i - X_j)
      const double coef = 8.0 * it * (3.0 * it3 - 6.0 * it6);
      grad[3 * i] += coef * dx;
      grad[3 * i + 1] += coef * dy;
      grad[3 * i + 2] += coef * dz;
      grad[3 * j] -= coef * dx;
      grad[3 * j + 1] -= coef * dy;
      grad[3 * j + 2] -= coef * dz;
    }
  }
  return 4.0 * sum;
}

std::vector<double> lj_gradient(std::span<const double> x) {
  std::vector<double> grad(x.size());
  lj_value_and_gradient(x, grad);
  return grad;
}

std::vector<double> lj_gradient(const Configuration& config) {
  return lj_gradient(std::span<const double>(config.coords));
}

ABParams ab_from_eps_sigma(const PairPotentialParams& params) {
  check_params(params);
  const double s2 = params.sigma * params.sigma;
  const double s6 = s2 * s2 * s2;
  return ABParams{4.0 * params.epsilon * s6 * s6, 4.0 * params.epsilon * s6};
}

PairPotentialParams eps_sigma_from_ab(const ABParams& params) {
  check_params(params);
  const double sigma = std::pow(params.a / params.b, 1.0 / 6.0);
  const double epsilon = params.b * params.b / (4.0 * params.a);
  return PairPotentialParams{epsilon, sigma};
}

double ab_energy(double r, const ABParams& params) {
  check_params(params);
  if (!(r > 0.0)) throw DomainError("ab_energy: r must be > 0");
  const double r2 = r * r;
  const double r6 = r2 * r2 * r2;
  return params.a / (r6 * r6) - params.b / r6;
}

double hb_energy(double r, const HBParams& params) {
  check_params(params);
  if (!(r > 0.0)) throw DomainError("hb_energy: r must be > 0");
  const double r2 = r * r;
  const double r6 = r2 * r2 * r2;
  const double r10 = r6 * r2 * r2;
  return params.c / (r6 * r6) - params.d / r10;
}

HBParams hb_params_from_depth(double depth, double r_min) {
  if (!(depth > 0.0)) throw DomainError("hb_params_from_depth: depth must be > 0");
  if (!(r_min > 0.0)) throw DomainError("hb_params_from_depth: r_min must be > 0");
  const double r2 = r_min * r_min;
  const double r10 = r2 * r2 * r2 * r2 * r2;
  return HBParams{5.0 * depth * r10 * r2, 6.0 * depth * r10};
}

namespace {

// Shared pair loop for the explicit-pair-list potentials. Energies are written
// in squared-distance form: A/r^12 = A tau^-6, etc.
template <bool WithGrad>
double accumulate_pairs(std::span<const double> x, std::span<const VdwPair> vdw_pairs,
                        std::span<const HbPair> hb_pairs, std::span<double> grad) {
  check_coords(x);
  const std::size_t n = x.size() / 3;
  if constexpr (WithGrad) {
    if (grad.size() != x.size())
      throw DomainError("gradient buffer size does not match coordinate vector");
    for (auto& g : grad) g = 0.0;
  }
  double energy = 0.0;
  auto pair_geometry = [&](int i, int j, double& dx, double& dy, double& dz) {
    check_pair_index(i, n);
    check_pair_index(j, n);
    if (i == j) throw DomainError("pair indices must differ");
    dx = x[3 * i] - x[3 * j];
    dy = x[3 * i + 1] - x[3 * j + 1];
    dz = x[3 * i + 2] - x[3 * j + 2];
    const double tau = dx * dx + dy * dy + dz * dz;
    if (tau < kSingularTauTol) throw SingularPairError(i, j);
    return tau;
  };
  auto add_gradient = [&](int i, int j, double coef, double dx, double dy, double dz) {
    grad[3 * i] += coef * dx;
    grad[3 * i + 1] += coef * dy;
    grad[3 * i + 2] += coef * dz;
    grad[3 * j] -= coef * dx;
    grad[3 * j + 1] -= coef * dy;
    grad[3 * j + 2] -= coef * dz;
  };

  for (const VdwPair& p : vdw_pairs) {
    check_params(p.params);
    double dx, dy, dz;
    const double tau = pair_geometry(p.i, p.j, dx, dy, dz);
    const double it = 1.0 / tau;
    const double it3 = it * it * it;
    const double it6 = it3 * it3;
    energy += p.params.a * it6 - p.params.b * it3;
    if constexpr (WithGrad) {
      // d/dX_i of (A tau^-6 - B tau^-3) = (6B tau^-4 - 12A tau^-7)(X_i - X_j)
      const double coef = it * (6.0 * p.params.b * it3 - 12.0 * p.params.a * it6);
      add_gradient(p.i, p.j, coef, dx, dy, dz);
    }
  }
  for (const HbPair& p : hb_pairs) {
    check_params(p.params);
    double dx, dy, dz;
    const double tau = pair_geometry(p.i, p.j, dx, dy, dz);
    const double it = 1.0 / tau;
    const double it2 = it * it;
    const double it5 = it2 * it2 * it;
    const double it6 = it5 * it;
    energy += p.params.c * it6 - p.params.d * it5;
    if constexpr (WithGrad) {
      // d/dX_i of (C tau^-6 - D tau^-5) = (10D tau^-6 - 12C tau^-7)(X_i - X_j)
      const double coef = it * (10.0 * p.params.d * it5 - 12.0 * p.params.c * it6);
      add_gradient(p.i, p.j, coef, dx, dy, dz);
    }
  }
  return energy;
}

}  // namespace

double total_energy(std::span<const double> x, std::span<const VdwPair> vdw_pairs,
                    std::span<const HbPair> hb_pairs) {
  return accumulate_pairs<false>(x, vdw_pairs, hb_pairs, {});
}

double total_value_and_gradient(std::span<const double> x,
                                std::span<const VdwPair> vdw_pairs,
                                std::span<const HbPair> hb_pairs, std::span<double> grad) {
  return accumulate_pairs<true>(x, vdw_pairs, hb_pairs, grad);
}

}  // namespace ljopt
