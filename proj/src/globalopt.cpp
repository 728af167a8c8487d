#include "ljopt/globalopt.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ljopt/parallel.hpp"

namespace ljopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Objective lj_objective() {
  return [](std::span<const double> x, std::span<double> grad) {
    return lj_value_and_gradient(x, grad);
  };
}

struct RestartOutcome {
  double best_f = kInf;
  std::vector<double> best_x;
  long hops = 0;
  long accepted = 0;
};

// Reduction over restart outcomes: strict minimum, earlier restart kept on
// exact ties, so the reduce is independent of execution order.
OptimizerReport reduce_outcomes(const std::vector<RestartOutcome>& outcomes) {
  OptimizerReport report;
  report.restarts_used = static_cast<int>(outcomes.size());
  int best_r = -1;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    report.per_restart_best.push_back(outcomes[r].best_f);
    report.hops_taken += outcomes[r].hops;
    report.accepted += outcomes[r].accepted;
    if (outcomes[r].best_f < kInf &&
        (best_r < 0 || outcomes[r].best_f < outcomes[best_r].best_f))
      best_r = static_cast<int>(r);
  }
  if (best_r < 0)
    throw Error("no restart produced a converged local minimum");
  report.best_energy = outcomes[best_r].best_f;
  report.best_config = Configuration(outcomes[best_r].best_x);
  return report;
}

}  // namespace

void BasinHopOptions::validate() const {
  if (n_atoms < 2) throw DomainError("n_atoms must be >= 2");
  if (hops <= 0) throw DomainError("hops must be > 0");
  if (restarts < 1) throw DomainError("restarts must be >= 1");
  if (!(perturb_magnitude > 0.0)) throw DomainError("perturb_magnitude must be > 0");
  if (!(temperature > 0.0)) throw DomainError("temperature must be > 0");
  local_opts.validate();
}

Configuration random_configuration(int n_atoms, Rng& rng) {
  if (n_atoms < 1) throw DomainError("n_atoms must be >= 1");
  const double side = 1.2 * std::cbrt(static_cast<double>(n_atoms));
  constexpr double kMinDist2 = 0.5 * 0.5;
  std::vector<double> coords(3 * static_cast<std::size_t>(n_atoms));
  for (int i = 0; i < n_atoms; ++i) {
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 100)
        throw PlacementError("could not place atom " + std::to_string(i) +
                             " with spacing >= 0.5 after 100 attempts");
      const double px = (rng.uniform() - 0.5) * side;
      const double py = (rng.uniform() - 0.5) * side;
      const double pz = (rng.uniform() - 0.5) * side;
      bool ok = true;
      for (int j = 0; j < i; ++j) {
        const double dx = px - coords[3 * j];
        const double dy = py - coords[3 * j + 1];
        const double dz = pz - coords[3 * j + 2];
        if (dx * dx + dy * dy + dz * dz < kMinDist2) {
          ok = false;
          break;
        }
      }
      if (ok) {
        coords[3 * i] = px;
        coords[3 * i + 1] = py;
        coords[3 * i + 2] = pz;
        break;
      }
    }
  }
  return Configuration(std::move(coords));
}

Configuration random_configuration(int n_atoms, std::uint64_t seed) {
  Rng rng(seed);
  return random_configuration(n_atoms, rng);
}

Configuration perturb(const Configuration& config, double magnitude, Rng& rng) {
  if (!(magnitude > 0.0)) throw DomainError("perturb: magnitude must be > 0");
  Configuration out = config;
  for (double& c : out.coords) c += rng.uniform(-magnitude, magnitude);
  return out;
}

OptimizerReport basin_hop(const BasinHopOptions& opts) {
  opts.validate();
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(opts.restarts));
  const Objective objective = lj_objective();

  auto run_restart = [&](std::size_t r) {
    Rng rng(stream_seed(opts.seed, r));
    RestartOutcome& out = outcomes[r];

    auto track_best = [&](const LocalOptResult& local) {
      if (local.converged && local.f_star < out.best_f) {
        out.best_f = local.f_star;
        out.best_x = local.x_star;
      }
    };

    Configuration cur = random_configuration(opts.n_atoms, rng);
    double cur_f;
    try {
      LocalOptResult local = minimize_local(objective, cur.coords, opts.local_opts);
      track_best(local);
      cur_f = local.f_star;
      cur.coords = std::move(local.x_star);
    } catch (const Error&) {
      cur_f = lj_energy(cur);  // walk on from the raw start
    }

    for (int hop = 0; hop < opts.hops; ++hop) {
      ++out.hops;
      Configuration candidate = perturb(cur, opts.perturb_magnitude, rng);
      LocalOptResult local;
      try {
        local = minimize_local(objective, std::move(candidate.coords), opts.local_opts);
      } catch (const Error&) {
        continue;  // discard the hop, keep hopping
      }
      track_best(local);
      const double delta = local.f_star - cur_f;
      const bool accept =
          delta <= 0.0 || rng.uniform() < std::exp(-delta / opts.temperature);
      if (accept) {
        cur.coords = std::move(local.x_star);
        cur_f = local.f_star;
        ++out.accepted;
      }
    }
  };

  parallel_for_index(outcomes.size(), opts.threads, run_restart);
  return reduce_outcomes(outcomes);
}

OptimizerReport multi_start(int n_atoms, int restarts, std::uint64_t seed,
                            const LocalOptOptions& local_opts, unsigned threads) {
  if (n_atoms < 1) throw DomainError("n_atoms must be >= 1");
  if (restarts < 1) throw DomainError("restarts must be >= 1");
  local_opts.validate();

  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(restarts));
  const Objective objective = lj_objective();
  auto run_restart = [&](std::size_t r) {
    Rng rng(stream_seed(seed, r));
    RestartOutcome& out = outcomes[r];
    Configuration start = random_configuration(n_atoms, rng);
    try {
      LocalOptResult local = minimize_local(objective, std::move(start.coords), local_opts);
      if (local.converged) {
        out.best_f = local.f_star;
        out.best_x = std::move(local.x_star);
      }
    } catch (const Error&) {
      // leave the slot empty; the reduce skips it
    }
  };
  parallel_for_index(outcomes.size(), threads, run_restart);
  return reduce_outcomes(outcomes);
}

}  // namespace ljopt
