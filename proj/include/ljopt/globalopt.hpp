#pragma once

#include <cstdint>
#include <vector>

#include "ljopt/localopt.hpp"
#include "ljopt/potential.hpp"
#include "ljopt/rng.hpp"

namespace ljopt {

struct BasinHopOptions {
  int n_atoms = 2;
  int hops = 1000;                 // basin-hopping steps per restart
  int restarts = 10;               // independent restarts, each with its own RNG stream
  double perturb_magnitude = 0.35; // coordinate displacement bound, reduced units
  double temperature = 0.8;        // Metropolis acceptance scale
  std::uint64_t seed = 0;
  LocalOptOptions local_opts{};
  unsigned threads = 0;  // worker threads across restarts; 0 = hardware, 1 = serial

  void validate() const;
};

struct OptimizerReport {
  double best_energy = 0.0;
  Configuration best_config;
  long hops_taken = 0;
  long accepted = 0;
  int restarts_used = 0;
  // Best converged energy per restart, +inf for restarts that found none.
  std::vector<double> per_restart_best;
};

/// Atoms placed uniformly in a cube of side 1.2 * n_atoms^(1/3), resampling
/// any atom that lands closer than 0.5 to a placed one (<= 100 attempts per
/// atom, then PlacementError).
Configuration random_configuration(int n_atoms, std::uint64_t seed);
Configuration random_configuration(int n_atoms, Rng& rng);

/// Every coordinate displaced by an independent uniform draw from
/// [-magnitude, +magnitude]. The input is left untouched.
Configuration perturb(const Configuration& config, double magnitude, Rng& rng);

/// Basin hopping on the reduced-unit cluster energy: perturb, locally
/// minimize, Metropolis-accept, over `hops` steps in each of `restarts`
/// independent streams. Local-minimizer failures discard the hop; they never
/// abort the run. The report is identical whether restarts run serially or
/// concurrently.
OptimizerReport basin_hop(const BasinHopOptions& opts);

/// Local minimization from `restarts` independent random configurations,
/// reduced to the best result. Same restart-stream and reduction rules as
/// basin_hop.
OptimizerReport multi_start(int n_atoms, int restarts, std::uint64_t seed,
                            const LocalOptOptions& local_opts = {},
                            unsigned threads = 0);

}  // namespace ljopt
