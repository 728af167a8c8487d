#include "ljopt/distgeom.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "ljopt/errors.hpp"
#include "ljopt/parallel.hpp"
#include "ljopt/rng.hpp"
#include "ljopt/text.hpp"

namespace ljopt {

namespace {

void check_dimensions(std::span<const double> x, const ConstraintSet& s) {
  if (x.size() != 3 * s.n_atoms)
    throw DomainError("coordinate vector has " + std::to_string(x.size()) +
                      " components, expected " + std::to_string(3 * s.n_atoms));
  for (double c : x)
    if (!std::isfinite(c)) throw DomainError("coordinates must be finite");
}

void check_indices(const Constraint& e, std::size_t n_atoms) {
  if (e.i >= n_atoms || e.j >= n_atoms)
    throw DomainError("constraint (" + std::to_string(e.i) + ", " +
                      std::to_string(e.j) + ") out of range for " +
                      std::to_string(n_atoms) + " atoms");
}

// Core evaluator shared by all stress entry points. Assumes dimensions are
// consistent; checks entry indices as it goes.
template <bool WithGrad>
double stress_core(std::span<const double> x, const ConstraintSet& s,
                   std::span<double> grad) {
  if constexpr (WithGrad) std::fill(grad.begin(), grad.end(), 0.0);
  double total = 0.0;
  for (const Constraint& e : s.entries) {
    check_indices(e, x.size() / 3);
    const double* xi = &x[3 * e.i];
    const double* xj = &x[3 * e.j];
    const double dx = xi[0] - xj[0];
    const double dy = xi[1] - xj[1];
    const double dz = xi[2] - xj[2];
    const double tau = dx * dx + dy * dy + dz * dz;
    const double resid = tau - e.r * e.r;
    total += e.w * resid * resid;
    if constexpr (WithGrad) {
      const double coef = 4.0 * e.w * resid;
      grad[3 * e.i + 0] += coef * dx;
      grad[3 * e.i + 1] += coef * dy;
      grad[3 * e.i + 2] += coef * dz;
      grad[3 * e.j + 0] -= coef * dx;
      grad[3 * e.j + 1] -= coef * dy;
      grad[3 * e.j + 2] -= coef * dz;
    }
  }
  return total;
}

void check_eps(const PerturbationVector& eps, std::span<const double> x) {
  if (eps.eps.size() != x.size())
    throw DomainError("perturbation vector has " +
                      std::to_string(eps.eps.size()) + " components, expected " +
                      std::to_string(x.size()));
}

}  // namespace

ConstraintSet::ConstraintSet(std::size_t n, std::vector<Constraint> es)
    : n_atoms(n), entries(std::move(es)) {
  validate();
}

void ConstraintSet::validate() const {
  if (n_atoms == 0) throw DomainError("constraint set needs at least one atom");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const Constraint& e : entries) {
    if (e.i == e.j)
      throw DomainError("constraint joins atom " + std::to_string(e.i) +
                        " to itself");
    check_indices(e, n_atoms);
    if (!(e.r > 0.0) || !std::isfinite(e.r))
      throw DomainError("constraint distance must be positive and finite");
    if (!(e.w > 0.0) || !std::isfinite(e.w))
      throw DomainError("constraint weight must be positive and finite");
    const auto key = std::minmax(e.i, e.j);
    if (!seen.insert(key).second)
      throw DomainError("duplicate constraint for pair (" +
                        std::to_string(key.first) + ", " +
                        std::to_string(key.second) + ")");
  }
}

PerturbationVector::PerturbationVector(std::vector<double> e)
    : eps(std::move(e)) {
  for (double v : eps)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw DomainError("perturbation components must be non-negative");
}

PerturbationVector PerturbationVector::uniform(std::size_t n_atoms,
                                               double value) {
  return PerturbationVector(std::vector<double>(3 * n_atoms, value));
}

double stress(std::span<const double> x, const ConstraintSet& s) {
  check_dimensions(x, s);
  return stress_core<false>(x, s, {});
}

std::vector<double> stress_gradient(std::span<const double> x,
                                    const ConstraintSet& s) {
  check_dimensions(x, s);
  std::vector<double> grad(x.size());
  stress_core<true>(x, s, grad);
  return grad;
}

double stress_value_and_gradient(std::span<const double> x,
                                 const ConstraintSet& s,
                                 std::span<double> grad) {
  check_dimensions(x, s);
  if (grad.size() != x.size())
    throw DomainError("gradient span size mismatch");
  return stress_core<true>(x, s, grad);
}

double stress_perturbed(std::span<const double> x, const ConstraintSet& s,
                        const PerturbationVector& eps) {
  check_dimensions(x, s);
  check_eps(eps, x);
  double value = stress_core<false>(x, s, {});
  for (std::size_t k = 0; k < x.size(); ++k) value -= eps.eps[k] * x[k];
  return value;
}

double stress_perturbed_value_and_gradient(std::span<const double> x,
                                           const ConstraintSet& s,
                                           const PerturbationVector& eps,
                                           std::span<double> grad) {
  check_dimensions(x, s);
  check_eps(eps, x);
  if (grad.size() != x.size())
    throw DomainError("gradient span size mismatch");
  double value = stress_core<true>(x, s, grad);
  for (std::size_t k = 0; k < x.size(); ++k) {
    value -= eps.eps[k] * x[k];
    grad[k] -= eps.eps[k];
  }
  return value;
}

FeasibilityReport check_feasibility(std::span<const double> x,
                                    const ConstraintSet& s, double tol) {
  if (!(tol > 0.0)) throw DomainError("feasibility tolerance must be positive");
  check_dimensions(x, s);
  FeasibilityReport report;
  report.tol = tol;
  for (const Constraint& e : s.entries) {
    const double dx = x[3 * e.i] - x[3 * e.j];
    const double dy = x[3 * e.i + 1] - x[3 * e.j + 1];
    const double dz = x[3 * e.i + 2] - x[3 * e.j + 2];
    const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
    const double dev = std::abs(d - e.r);
    if (dev > tol)
      report.violations.push_back({e.i, e.j, e.r, d, dev});
  }
  return report;
}

std::vector<TriangleViolation> triangle_violations(const ConstraintSet& s) {
  s.validate();
  std::map<std::pair<std::size_t, std::size_t>, double> pair_r;
  std::vector<std::vector<std::size_t>> nbrs(s.n_atoms);
  for (const Constraint& e : s.entries) {
    const auto key = std::minmax(e.i, e.j);
    pair_r.emplace(key, e.r);
    nbrs[e.i].push_back(e.j);
    nbrs[e.j].push_back(e.i);
  }
  for (auto& list : nbrs) std::sort(list.begin(), list.end());

  std::vector<TriangleViolation> out;
  for (const auto& [key, r_ij] : pair_r) {
    const auto [i, j] = key;  // i < j by construction
    for (std::size_t k : nbrs[j]) {
      if (k <= j) continue;
      const auto ik = pair_r.find({i, k});
      if (ik == pair_r.end()) continue;
      const double r_ik = ik->second;
      const double r_jk = pair_r.at({j, k});
      const double longest = std::max({r_ij, r_ik, r_jk});
      const double others = r_ij + r_ik + r_jk - longest;
      if (longest > others + kTriangleSlack)
        out.push_back({i, j, k, longest - others});
    }
  }
  return out;
}

void EmbedOptions::validate() const {
  if (restarts < 1) throw DomainError("embed needs at least one restart");
  if (!(feasibility_tol > 0.0))
    throw DomainError("feasibility tolerance must be positive");
  local_opts.validate();
}

namespace {

EmbedResult embed_impl(const ConstraintSet& s, const PerturbationVector* eps,
                       const EmbedOptions& opts) {
  opts.validate();
  s.validate();
  const std::size_t dim = 3 * s.n_atoms;
  if (eps != nullptr && eps->eps.size() != dim)
    throw DomainError("perturbation vector has " +
                      std::to_string(eps->eps.size()) +
                      " components, expected " + std::to_string(dim));

  double side = 1.0;
  for (const Constraint& e : s.entries) side = std::max(side, e.r);

  const Objective objective = [&s, eps](std::span<const double> x,
                                        std::span<double> grad) {
    if (eps == nullptr) return stress_core<true>(x, s, grad);
    double value = stress_core<true>(x, s, grad);
    for (std::size_t k = 0; k < x.size(); ++k) {
      value -= eps->eps[k] * x[k];
      grad[k] -= eps->eps[k];
    }
    return value;
  };

  struct RestartOutcome {
    double best_f = std::numeric_limits<double>::infinity();
    std::vector<double> best_x;
    bool usable = false;
    bool converged = false;
  };
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(opts.restarts));

  parallel_for_index(outcomes.size(), opts.threads, [&](std::size_t r) {
    Rng rng(stream_seed(opts.seed, r));
    std::vector<double> x0(dim);
    for (double& c : x0) c = rng.uniform(-side / 2.0, side / 2.0);
    RestartOutcome& out = outcomes[r];
    try {
      LocalOptResult local = minimize_local(objective, std::move(x0),
                                            opts.local_opts);
      out.best_f = local.f_star;
      out.best_x = std::move(local.x_star);
      out.usable = true;
      out.converged = local.converged;
    } catch (const Error&) {
      // This restart found nothing usable; others may still succeed.
    }
  });

  const RestartOutcome* best = nullptr;
  int converged_count = 0;
  for (const RestartOutcome& out : outcomes) {
    if (!out.usable) continue;
    if (out.converged) ++converged_count;
    if (best == nullptr || out.best_f < best->best_f) best = &out;
  }
  if (best == nullptr)
    throw Error("embed: no restart produced a usable minimum");

  EmbedResult result;
  result.config = Configuration(best->best_x);
  result.objective = best->best_f;
  result.stress_value = stress(best->best_x, s);
  if (eps != nullptr)
    result.perturbed_value = stress_perturbed(best->best_x, s, *eps);
  result.feasibility =
      check_feasibility(best->best_x, s, opts.feasibility_tol);
  result.restarts_used = opts.restarts;
  result.converged_restarts = converged_count;
  return result;
}

}  // namespace

EmbedResult embed(const ConstraintSet& s, const EmbedOptions& opts) {
  return embed_impl(s, nullptr, opts);
}

EmbedResult embed(const ConstraintSet& s, const PerturbationVector& eps,
                  const EmbedOptions& opts) {
  return embed_impl(s, &eps, opts);
}

ConstraintSet read_constraints(std::istream& in, std::string_view source) {
  const std::string src(source);
  std::string raw;
  int line_no = 0;
  bool have_header = false;
  std::size_t n_atoms = 0;
  std::vector<Constraint> entries;
  std::set<std::pair<std::size_t, std::size_t>> seen;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = strip_comment(raw);
    if (line.empty()) continue;

    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
      const auto start = line.find_first_not_of(" \t", pos);
      if (start == std::string_view::npos) break;
      auto end = line.find_first_of(" \t", start);
      if (end == std::string_view::npos) end = line.size();
      tokens.push_back(line.substr(start, end - start));
      pos = end;
    }

    if (!have_header) {
      if (tokens.size() != 2 || tokens[0] != "atoms" ||
          !parse_index(tokens[1], n_atoms) || n_atoms == 0)
        throw ParseError(src, line_no, "expected header 'atoms N'");
      have_header = true;
      continue;
    }

    if (tokens.size() < 3 || tokens.size() > 4)
      throw ParseError(src, line_no,
                       "expected 'i j r [w]', got " +
                           std::to_string(tokens.size()) + " fields");
    Constraint e;
    if (!parse_index(tokens[0], e.i) || !parse_index(tokens[1], e.j))
      throw ParseError(src, line_no, "atom indices must be non-negative integers");
    if (e.i == e.j)
      throw ParseError(src, line_no, "constraint joins an atom to itself");
    if (e.i >= n_atoms || e.j >= n_atoms)
      throw ParseError(src, line_no, "atom index out of range");
    if (!parse_double(tokens[2], e.r) || !(e.r > 0.0) || !std::isfinite(e.r))
      throw ParseError(src, line_no, "distance must be a positive number");
    e.w = 1.0;
    if (tokens.size() == 4 &&
        (!parse_double(tokens[3], e.w) || !(e.w > 0.0) || !std::isfinite(e.w)))
      throw ParseError(src, line_no, "weight must be a positive number");
    if (!seen.insert(std::minmax(e.i, e.j)).second)
      throw ParseError(src, line_no, "duplicate constraint pair");
    entries.push_back(e);
  }

  if (!have_header) throw ParseError(src, line_no, "missing 'atoms N' header");
  return ConstraintSet(n_atoms, std::move(entries));
}

ConstraintSet read_constraints_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open constraint file");
  return read_constraints(in, path);
}

std::string write_constraints(const ConstraintSet& s) {
  s.validate();
  std::string out = "atoms " + std::to_string(s.n_atoms) + "\n";
  for (const Constraint& e : s.entries) {
    out += std::to_string(e.i);
    out += ' ';
    out += std::to_string(e.j);
    out += ' ';
    out += format_double(e.r);
    out += ' ';
    out += format_double(e.w);
    out += '\n';
  }
  return out;
}

void write_constraints_file(const ConstraintSet& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write constraint file: " + path);
  out << write_constraints(s);
  if (!out) throw Error("write failed for constraint file: " + path);
}

}  // namespace ljopt
