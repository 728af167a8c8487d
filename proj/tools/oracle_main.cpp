// lj_oracle: brute-force multi-start reference energies for small LJ clusters.
//
// This tool exists to generate the frozen expected values used by the test
// suite, by a route that shares no search logic with basin hopping: it only
// runs independent local minimizations from a large number of seeded random
// starts and keeps the best. Reproduce a frozen value with, e.g.:
//
//   lj_oracle --n 13 --starts 200000 --seed 1
//
#include <algorithm>
#include <cstdio>
#include <limits>

#include "CLI11.hpp"
#include "ljopt/globalopt.hpp"

int main(int argc, char** argv) {
  CLI::App app{"multi-start oracle for reduced-unit LJ cluster minima"};
  int n = 13;
  long starts = 100000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  long max_iters = 0;
  std::string xyz_path;
  app.add_option("--n", n, "number of atoms")->required();
  app.add_option("--starts", starts, "number of random starts");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--threads", threads, "worker threads (0 = hardware)");
  app.add_option("--max-iters", max_iters,
                 "per-start iteration cap (0 = library default); caps only "
                 "cut off non-converging starts early");
  app.add_option("--xyz", xyz_path, "write the best configuration here");
  CLI11_PARSE(app, argc, argv);

  try {
    ljopt::LocalOptOptions local_opts;
    if (max_iters > 0) local_opts.max_iters = max_iters;
    const ljopt::OptimizerReport report =
        ljopt::multi_start(n, static_cast<int>(starts), seed, local_opts, threads);
    long converged = 0;
    double second_best = std::numeric_limits<double>::infinity();
    for (double f : report.per_restart_best) {
      if (f == std::numeric_limits<double>::infinity()) continue;
      ++converged;
      if (f > report.best_energy + 1e-6) second_best = std::min(second_best, f);
    }
    std::printf("n=%d starts=%ld seed=%llu best=%.17g converged=%ld next_basin=%.17g\n",
                n, starts, static_cast<unsigned long long>(seed),
                report.best_energy, converged, second_best);
    if (!xyz_path.empty()) {
      std::FILE* out = std::fopen(xyz_path.c_str(), "w");
      if (out == nullptr) {
        std::fprintf(stderr, "cannot write %s\n", xyz_path.c_str());
        return 1;
      }
      std::fprintf(out, "%d\nbest of %ld starts, seed %llu\n", n, starts,
                   static_cast<unsigned long long>(seed));
      for (int a = 0; a < n; ++a)
        std::fprintf(out, "Ar %.17g %.17g %.17g\n",
                     report.best_config.coords[3 * a],
                     report.best_config.coords[3 * a + 1],
                     report.best_config.coords[3 * a + 2]);
      std::fclose(out);
    }
    return 0;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
}
