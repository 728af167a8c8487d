#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ljopt/localopt.hpp"
#include "ljopt/potential.hpp"

namespace ljopt {

// One distance constraint: target distance r with weight w between atoms i, j.
struct Constraint {
  std::size_t i = 0;
  std::size_t j = 0;
  double r = 1.0;
  double w = 1.0;
};

// A set of pairwise distance constraints over n_atoms points.
struct ConstraintSet {
  std::size_t n_atoms = 0;
  std::vector<Constraint> entries;

  ConstraintSet() = default;
  ConstraintSet(std::size_t n_atoms, std::vector<Constraint> entries);

  // Throws DomainError on invalid indices (i == j, out of range), duplicate
  // unordered pairs, or non-positive / non-finite r or w.
  void validate() const;
};

// Slack applied when testing triangle-inequality violations.
inline constexpr double kTriangleSlack = 1e-12;

// Default per-component perturbation used when perturbed mode is requested
// without explicit values.
inline constexpr double kDefaultPerturbation = 1e-3;

// Componentwise non-negative perturbation vector of length 3*n_atoms.
struct PerturbationVector {
  std::vector<double> eps;

  PerturbationVector() = default;
  explicit PerturbationVector(std::vector<double> eps);

  static PerturbationVector uniform(std::size_t n_atoms,
                                    double value = kDefaultPerturbation);
};

// Weighted squared-distance stress: sum of w * (|Xi - Xj|^2 - r^2)^2.
double stress(std::span<const double> x, const ConstraintSet& s);
std::vector<double> stress_gradient(std::span<const double> x,
                                    const ConstraintSet& s);
double stress_value_and_gradient(std::span<const double> x,
                                 const ConstraintSet& s,
                                 std::span<double> grad);

// Perturbed stress: stress(x, s) - eps . x.
double stress_perturbed(std::span<const double> x, const ConstraintSet& s,
                        const PerturbationVector& eps);
double stress_perturbed_value_and_gradient(std::span<const double> x,
                                           const ConstraintSet& s,
                                           const PerturbationVector& eps,
                                           std::span<double> grad);

struct FeasibilityViolation {
  std::size_t i = 0;
  std::size_t j = 0;
  double target = 0.0;     // constrained distance r_ij
  double actual = 0.0;     // realized distance |Xi - Xj|
  double deviation = 0.0;  // |actual - target|
};

struct FeasibilityReport {
  double tol = 0.0;
  std::vector<FeasibilityViolation> violations;

  bool feasible() const { return violations.empty(); }
};

// Lists every constraint whose realized distance deviates from its target by
// more than tol. An empty report certifies x solves the exact problem to tol.
FeasibilityReport check_feasibility(std::span<const double> x,
                                    const ConstraintSet& s, double tol);

struct TriangleViolation {
  std::size_t i = 0;  // canonical ordering i < j < k
  std::size_t j = 0;
  std::size_t k = 0;
  double excess = 0.0;  // largest r minus sum of the other two
};

// Scans every atom triple whose three pairwise constraints are all present
// and reports those where one target distance exceeds the sum of the other
// two beyond kTriangleSlack. A non-empty result certifies infeasibility.
std::vector<TriangleViolation> triangle_violations(const ConstraintSet& s);

struct EmbedOptions {
  int restarts = 20;
  std::uint64_t seed = 0;
  LocalOptOptions local_opts;
  double feasibility_tol = 1e-4;
  unsigned threads = 0;  // 0 = all hardware threads; restart streams are
                         // seeded independently so results do not depend on
                         // the thread count.

  void validate() const;  // throws DomainError on nonsense
};

struct EmbedResult {
  Configuration config;              // best embedding found
  double objective = 0.0;            // minimized objective at config
  double stress_value = 0.0;         // plain stress at config
  std::optional<double> perturbed_value;  // set when eps was supplied
  FeasibilityReport feasibility;     // at EmbedOptions::feasibility_tol
  int restarts_used = 0;
  int converged_restarts = 0;
};

// Multi-start local minimization of stress (or stress_perturbed when eps is
// supplied). Starts are uniform in a cube of side max r_ij; restart streams
// derive from the seed so results are independent of scheduling.
EmbedResult embed(const ConstraintSet& s, const EmbedOptions& opts = {});
EmbedResult embed(const ConstraintSet& s, const PerturbationVector& eps,
                  const EmbedOptions& opts = {});

// Plain-text constraint files: header line `atoms N`, then one entry per
// line `i j r w` (zero-based indices), `#` starts a comment.
ConstraintSet read_constraints(std::istream& in,
                               std::string_view source = "<stream>");
ConstraintSet read_constraints_file(const std::string& path);
std::string write_constraints(const ConstraintSet& s);
void write_constraints_file(const ConstraintSet& s, const std::string& path);

}  // namespace ljopt
