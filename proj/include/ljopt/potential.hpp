#pragma once

#include <span>
#include <vector>

#include "ljopt/errors.hpp"

namespace ljopt {

/// Squared pair distances below this are treated as coincident atoms.
inline constexpr double kSingularTauTol = 1e-30;

/// Distance ratio between the potential minimum and the zero crossing:
/// the minimum of the 12-6 pair potential sits at 2^(1/6) * sigma.
inline constexpr double kWellMinimumFactor = 1.1224620483093730;  // 2^(1/6)

/// 12-6 pair potential parameters: well depth and zero-crossing distance.
struct PairPotentialParams {
  double epsilon = 1.0;
  double sigma = 1.0;
};

/// A/r^12 - B/r^6 form of the same potential.
struct ABParams {
  double a = 4.0;
  double b = 4.0;
};

/// C/r^12 - D/r^10 hydrogen-bond potential.
struct HBParams {
  double c = 5.0;
  double d = 6.0;
};

/// N points in 3-space stored flat: (x0,y0,z0, x1,y1,z1, ...). Reduced units
/// for cluster work, angstroms in structure mode.
struct Configuration {
  std::vector<double> coords;

  Configuration() = default;
  /// Validates: non-empty, length divisible by 3, all entries finite.
  explicit Configuration(std::vector<double> c);

  std::size_t n_atoms() const noexcept { return coords.size() / 3; }
  bool empty() const noexcept { return coords.empty(); }
};

/// 4*eps*[(sigma/r)^12 - (sigma/r)^6]. Zero at r = sigma, minimum -eps at
/// r = 2^(1/6) * sigma. Throws DomainError for r <= 0.
double lj_pair_energy(double r, const PairPotentialParams& params = {});

/// Reduced-unit (eps = sigma = 1) cluster energy: 4 * sum_{i<j} (tau^-6 - tau^-3)
/// with tau the squared pair distance. Throws SingularPairError when a pair
/// is closer than the coincidence tolerance.
double lj_energy(std::span<const double> x);
double lj_energy(const Configuration& config);

/// Analytic gradient of lj_energy.
std::vector<double> lj_gradient(std::span<const double> x);
std::vector<double> lj_gradient(const Configuration& config);

/// Energy and gradient in one pass; grad must have the same length as x.
double lj_value_and_gradient(std::span<const double> x, std::span<double> grad);

/// A = 4*eps*sigma^12, B = 4*eps*sigma^6, so A/r^12 - B/r^6 matches the
/// eps/sigma form pointwise.
ABParams ab_from_eps_sigma(const PairPotentialParams& params);

/// Inverse of ab_from_eps_sigma: sigma = (A/B)^(1/6), eps = B^2 / (4A).
PairPotentialParams eps_sigma_from_ab(const ABParams& params);

/// A/r^12 - B/r^6 at distance r. Throws DomainError for r <= 0.
double ab_energy(double r, const ABParams& params);

/// C/r^12 - D/r^10 at distance r. Throws DomainError for r <= 0.
double hb_energy(double r, const HBParams& params);

/// Constants giving the 12-10 potential its unique minimum of -depth at
/// r_min: C = 5*depth*r_min^12, D = 6*depth*r_min^10.
HBParams hb_params_from_depth(double depth, double r_min);

/// One 12-6 interaction between atoms i and j of a configuration.
struct VdwPair {
  int i = 0;
  int j = 0;
  ABParams params;
};

/// One 12-10 interaction between atoms i and j of a configuration.
struct HbPair {
  int i = 0;
  int j = 0;
  HBParams params;
};

/// Sum of the listed pair interactions at configuration x. Atom indices must
/// be in range; coincident listed pairs raise SingularPairError.
double total_energy(std::span<const double> x, std::span<const VdwPair> vdw_pairs,
                    std::span<const HbPair> hb_pairs);

/// total_energy plus its gradient; grad must have the same length as x.
double total_value_and_gradient(std::span<const double> x,
                                std::span<const VdwPair> vdw_pairs,
                                std::span<const HbPair> hb_pairs,
                                std::span<double> grad);

}  // namespace ljopt
