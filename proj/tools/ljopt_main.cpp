// ljopt: command-line driver for the Lennard-Jones cluster and structure
// toolkit. Subcommands: pair, cluster, embed, contacts, relax, bench.
//
// Exit codes: 0 success, 1 domain-negative result (clashes found, relaxation
// failed), 2 usage or input error.
//
// Configuration precedence: command-line flags override --config file values
// override built-in defaults. Unknown keys in a config file are an error.
// Every run echoes its fully resolved configuration: embedded under "config"
// in JSON object outputs, on the diagnostic stream otherwise (bench's JSON
// output is pinned to a top-level array, so its echo also goes to the
// diagnostic stream).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ljopt/distgeom.hpp"
#include "ljopt/errors.hpp"
#include "ljopt/globalopt.hpp"
#include "ljopt/localopt.hpp"
#include "ljopt/potential.hpp"
#include "ljopt/radii.hpp"
#include "ljopt/structure.hpp"
#include "ljopt/xyz.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct CommonOpts {
  std::string format = "text";
  std::string config_path;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* sub, CommonOpts& c) {
  sub->add_option("--format", c.format, "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  sub->add_option("--config", c.config_path,
                  "JSON config file; command-line flags override its values");
  sub->add_option("--seed", c.seed, "random seed");
}

// Loads the JSON object at `path`, rejecting keys outside `known` so config
// typos fail loudly instead of being ignored.
json load_config_file(const std::string& path,
                      const std::vector<std::string>& known) {
  std::ifstream in(path);
  if (!in) throw ljopt::ParseError(path, 0, "cannot open config file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ljopt::ParseError(path, 0, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object())
    throw ljopt::ParseError(path, 0, "config root must be a JSON object");
  for (const auto& item : j.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end())
      throw ljopt::ParseError(path, 0,
                              "unknown config key \"" + item.key() + "\"");
  }
  return j;
}

// Applies cfg[key] to `value` unless the flag was given on the command line.
template <typename T>
void apply(const json& cfg, const CLI::App& sub, const std::string& flag,
           const std::string& key, T& value) {
  if (cfg.contains(key) && sub.count(flag) == 0) {
    try {
      value = cfg.at(key).get<T>();
    } catch (const json::exception&) {
      throw ljopt::DomainError("config key \"" + key + "\" has the wrong type");
    }
  }
}

// The resolved-config echo for text outputs (and for bench's JSON array).
void echo_config_stderr(const json& resolved) {
  std::cerr << "config: " << resolved.dump() << "\n";
}

int usage_error(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return kExitUsage;
}

json finite_or_null(double v) {
  return std::isfinite(v) ? json(v) : json(nullptr);
}

void write_cluster_xyz(const std::string& path, const ljopt::Configuration& c,
                       const std::string& element, const std::string& comment) {
  ljopt::XyzFrame frame;
  frame.comment = comment;
  frame.elements.assign(c.n_atoms(), element);
  frame.coords = c.coords;
  ljopt::write_xyz_file(frame, path);
}

ljopt::RadiiTable load_radii(const std::string& override_path) {
  if (override_path.empty()) return ljopt::RadiiTable::bondi();
  return ljopt::RadiiTable::bondi().merged_with(
      ljopt::RadiiTable::load_file(override_path));
}

std::string atom_label(const ljopt::Atom& a) {
  return a.residue_name + "." + std::string(1, a.chain) +
         std::to_string(a.residue_seq) + "." + a.name;
}

json contact_entry_json(const ljopt::ContactEntry& e,
                        const ljopt::Structure& s) {
  return json{{"i", e.i},
              {"j", e.j},
              {"atom_i", atom_label(s.atoms[e.i])},
              {"atom_j", atom_label(s.atoms[e.j])},
              {"distance", e.distance},
              {"vdw_sum", e.vdw_sum}};
}

void print_contact_lines(const char* tag,
                         const std::vector<ljopt::ContactEntry>& entries,
                         const ljopt::Structure& s) {
  for (const ljopt::ContactEntry& e : entries) {
    std::printf("  %s: (%zu)%s - (%zu)%s d=%.3f vdw_sum=%.3f\n", tag, e.i,
                atom_label(s.atoms[e.i]).c_str(), e.j,
                atom_label(s.atoms[e.j]).c_str(), e.distance, e.vdw_sum);
  }
}

// ---------------------------------------------------------------- pair ----

struct PairArgs {
  double r = std::numeric_limits<double>::quiet_NaN();
  double eps = 1.0;
  double sigma = 1.0;
  CommonOpts c;
};

int run_pair(const CLI::App& sub, PairArgs& a) {
  static const std::vector<std::string> keys = {"r", "eps", "sigma", "format",
                                                "seed"};
  const json cfg = a.c.config_path.empty()
                       ? json::object()
                       : load_config_file(a.c.config_path, keys);
  apply(cfg, sub, "--r", "r", a.r);
  apply(cfg, sub, "--eps", "eps", a.eps);
  apply(cfg, sub, "--sigma", "sigma", a.sigma);
  apply(cfg, sub, "--format", "format", a.c.format);
  apply(cfg, sub, "--seed", "seed", a.c.seed);
  if (std::isnan(a.r)) return usage_error("pair requires --r");

  const json resolved = {{"command", "pair"}, {"r", a.r},
                         {"eps", a.eps},      {"sigma", a.sigma},
                         {"format", a.c.format}, {"seed", a.c.seed}};
  const double e = ljopt::lj_pair_energy(a.r, {a.eps, a.sigma});
  if (a.c.format == "json") {
    std::cout << json{{"config", resolved}, {"energy", e}}.dump(2) << "\n";
  } else {
    echo_config_stderr(resolved);
    std::printf("%g\n", e);
  }
  return kExitOk;
}

// ------------------------------------------------------------- cluster ----

struct ClusterArgs {
  int n = 0;
  int hops = 1000;
  int restarts = 10;
  double perturb = 0.35;
  double temperature = 0.8;
  unsigned threads = 0;
  std::string out;
  CommonOpts c;
};

int run_cluster(const CLI::App& sub, ClusterArgs& a) {
  static const std::vector<std::string> keys = {
      "n",    "hops",    "restarts", "perturb", "temperature",
      "seed", "threads", "out",      "format"};
  const json cfg = a.c.config_path.empty()
                       ? json::object()
                       : load_config_file(a.c.config_path, keys);
  apply(cfg, sub, "--n", "n", a.n);
  apply(cfg, sub, "--hops", "hops", a.hops);
  apply(cfg, sub, "--restarts", "restarts", a.restarts);
  apply(cfg, sub, "--perturb", "perturb", a.perturb);
  apply(cfg, sub, "--temperature", "temperature", a.temperature);
  apply(cfg, sub, "--seed", "seed", a.c.seed);
  apply(cfg, sub, "--threads", "threads", a.threads);
  apply(cfg, sub, "--out", "out", a.out);
  apply(cfg, sub, "--format", "format", a.c.format);
  if (a.n == 0) return usage_error("cluster requires --n");

  const json resolved = {{"command", "cluster"},
                         {"n", a.n},
                         {"hops", a.hops},
                         {"restarts", a.restarts},
                         {"perturb", a.perturb},
                         {"temperature", a.temperature},
                         {"seed", a.c.seed},
                         {"threads", a.threads},
                         {"out", a.out},
                         {"format", a.c.format}};

  ljopt::BasinHopOptions opts;
  opts.n_atoms = a.n;
  opts.hops = a.hops;
  opts.restarts = a.restarts;
  opts.perturb_magnitude = a.perturb;
  opts.temperature = a.temperature;
  opts.seed = a.c.seed;
  opts.threads = a.threads;
  const ljopt::OptimizerReport rep = ljopt::basin_hop(opts);

  if (!a.out.empty()) {
    char comment[96];
    std::snprintf(comment, sizeof comment, "lj cluster n=%d energy=%.12g", a.n,
                  rep.best_energy);
    write_cluster_xyz(a.out, rep.best_config, "LJ", comment);
  }

  if (a.c.format == "json") {
    json per = json::array();
    for (double v : rep.per_restart_best) per.push_back(finite_or_null(v));
    std::cout << json{{"config", resolved},
                      {"best_energy", rep.best_energy},
                      {"hops_taken", rep.hops_taken},
                      {"accepted", rep.accepted},
                      {"restarts_used", rep.restarts_used},
                      {"per_restart_best", per}}
                     .dump(2)
              << "\n";
  } else {
    echo_config_stderr(resolved);
    std::printf("best energy: %.6f\n", rep.best_energy);
    std::printf("hops: %ld\n", rep.hops_taken);
    std::printf("accepted: %ld\n", rep.accepted);
    std::printf("restarts: %d\n", rep.restarts_used);
  }
  return kExitOk;
}

// --------------------------------------------------------------- embed ----

struct EmbedArgs {
  std::string constraints;
  bool eps = false;
  double eps_value = ljopt::kDefaultPerturbation;
  int restarts = 20;
  double tol = 1e-4;
  unsigned threads = 0;
  std::string out;
  CommonOpts c;
};

int run_embed(const CLI::App& sub, EmbedArgs& a) {
  static const std::vector<std::string> keys = {
      "constraints", "eps",     "eps-value", "restarts", "tol",
      "threads",     "out",     "seed",      "format"};
  const json cfg = a.c.config_path.empty()
                       ? json::object()
                       : load_config_file(a.c.config_path, keys);
  apply(cfg, sub, "constraints", "constraints", a.constraints);
  apply(cfg, sub, "--eps", "eps", a.eps);
  apply(cfg, sub, "--eps-value", "eps-value", a.eps_value);
  apply(cfg, sub, "--restarts", "restarts", a.restarts);
  apply(cfg, sub, "--tol", "tol", a.tol);
  apply(cfg, sub, "--threads", "threads", a.threads);
  apply(cfg, sub, "--out", "out", a.out);
  apply(cfg, sub, "--seed", "seed", a.c.seed);
  apply(cfg, sub, "--format", "format", a.c.format);
  if (sub.count("--eps-value") > 0 || cfg.contains("eps-value")) a.eps = true;
  if (a.constraints.empty())
    return usage_error("embed requires a constraints file");

  const json resolved = {{"command", "embed"},
                         {"constraints", a.constraints},
                         {"eps", a.eps},
                         {"eps-value", a.eps_value},
                         {"restarts", a.restarts},
                         {"tol", a.tol},
                         {"threads", a.threads},
                         {"out", a.out},
                         {"seed", a.c.seed},
                         {"format", a.c.format}};

  const ljopt::ConstraintSet set =
      ljopt::read_constraints_file(a.constraints);
  ljopt::EmbedOptions opts;
  opts.restarts = a.restarts;
  opts.seed = a.c.seed;
  opts.feasibility_tol = a.tol;
  opts.threads = a.threads;
  const ljopt::EmbedResult res =
      a.eps ? ljopt::embed(set,
                           ljopt::PerturbationVector::uniform(set.n_atoms,
                                                              a.eps_value),
                           opts)
            : ljopt::embed(set, opts);
  const std::vector<ljopt::TriangleViolation> tri =
      ljopt::triangle_violations(set);

  if (!a.out.empty())
    write_cluster_xyz(a.out, res.config, "X", "embedding of " + a.constraints);

  if (a.c.format == "json") {
    json fv = json::array();
    for (const auto& v : res.feasibility.violations)
      fv.push_back(json{{"i", v.i},
                        {"j", v.j},
                        {"target", v.target},
                        {"actual", v.actual},
                        {"deviation", v.deviation}});
    json tv = json::array();
    for (const auto& v : tri)
      tv.push_back(
          json{{"i", v.i}, {"j", v.j}, {"k", v.k}, {"excess", v.excess}});
    json out = {{"config", resolved},
                {"stress", res.stress_value},
                {"objective", res.objective},
                {"feasible", res.feasibility.feasible()},
                {"feasibility_violations", fv},
                {"triangle_violations", tv},
                {"restarts_used", res.restarts_used},
                {"converged_restarts", res.converged_restarts}};
    if (res.perturbed_value) out["perturbed"] = *res.perturbed_value;
    std::cout << out.dump(2) << "\n";
  } else {
    echo_config_stderr(resolved);
    std::printf("P*: %.12g\n", res.stress_value);
    if (res.perturbed_value)
      std::printf("P_eps*: %.12g\n", *res.perturbed_value);
    std::printf("feasible: %s\n", res.feasibility.feasible() ? "yes" : "no");
    std::printf("feasibility violations: %zu\n",
                res.feasibility.violations.size());
    for (const auto& v : res.feasibility.violations)
      std::printf("  (%zu,%zu) target=%.6g actual=%.6g deviation=%.3g\n", v.i,
                  v.j, v.target, v.actual, v.deviation);
    std::printf("triangle violations: %zu\n", tri.size());
    for (const auto& v : tri)
      std::printf("  (%zu,%zu,%zu) excess=%.6g\n", v.i, v.j, v.k, v.excess);
    std::printf("restarts: %d converged: %d\n", res.restarts_used,
                res.converged_restarts);
  }
  return kExitOk;
}

// ------------------------------------------------------------ contacts ----

struct ContactsArgs {
  std::string pdb;
  double tol = ljopt::kDefaultOverlapTol;
  double window = ljopt::kDefaultContactWindow;
  double cutoff = ljopt::kNeighborCutoff;
  std::string radii;
  CommonOpts c;
};

int run_contacts(const CLI::App& sub, ContactsArgs& a) {
  static const std::vector<std::string> keys = {
      "pdb", "tol", "window", "cutoff", "radii", "seed", "format"};
  const json cfg = a.c.config_path.empty()
                       ? json::object()
                       : load_config_file(a.c.config_path, keys);
  apply(cfg, sub, "pdb", "pdb", a.pdb);
  apply(cfg, sub, "--tol", "tol", a.tol);
  apply(cfg, sub, "--window", "window", a.window);
  apply(cfg, sub, "--cutoff", "cutoff", a.cutoff);
  apply(cfg, sub, "--radii", "radii", a.radii);
  apply(cfg, sub, "--seed", "seed", a.c.seed);
  apply(cfg, sub, "--format", "format", a.c.format);
  if (a.pdb.empty()) return usage_error("contacts requires a PDB file");

  const json resolved = {
      {"command", "contacts"}, {"pdb", a.pdb},       {"tol", a.tol},
      {"window", a.window},    {"cutoff", a.cutoff}, {"radii", a.radii},
      {"seed", a.c.seed},      {"format", a.c.format}};

  const ljopt::Structure s = ljopt::parse_pdb_file(a.pdb);
  const ljopt::RadiiTable table = load_radii(a.radii);
  const ljopt::ContactReport clash_rep = ljopt::find_clashes(s, a.tol, table);
  const ljopt::ContactReport buckets =
      ljopt::classify_contacts(s, a.window, a.tol, a.cutoff, table);

  if (a.c.format == "json") {
    json clashes = json::array();
    for (const auto& e : clash_rep.clashes)
      clashes.push_back(contact_entry_json(e, s));
    json b = {{"clash", json::array()},
              {"optimal", json::array()},
              {"far", json::array()}};
    for (const auto& e : buckets.clashes)
      b["clash"].push_back(contact_entry_json(e, s));
    for (const auto& e : buckets.optimal)
      b["optimal"].push_back(contact_entry_json(e, s));
    for (const auto& e : buckets.far)
      b["far"].push_back(contact_entry_json(e, s));
    std::cout << json{{"config", resolved},
                      {"clashes", clashes},
                      {"buckets", b}}
                     .dump(2)
              << "\n";
  } else {
    echo_config_stderr(resolved);
    std::printf("clashes: %zu\n", clash_rep.clashes.size());
    print_contact_lines("clash", clash_rep.clashes, s);
    std::printf("buckets: clash=%zu optimal=%zu far=%zu\n",
                buckets.clashes.size(), buckets.optimal.size(),
                buckets.far.size());
    print_contact_lines("bucket-clash", buckets.clashes, s);
    print_contact_lines("optimal", buckets.optimal, s);
    print_contact_lines("far", buckets.far, s);
  }
  return clash_rep.clashes.empty() ? kExitOk : kExitDomain;
}

// --------------------------------------------------------------- relax ----

struct RelaxArgs {
  std::string pdb;
  std::string pairs;
  std::string out;
  double tol = ljopt::kDefaultOverlapTol;
  std::string radii;
  CommonOpts c;
};

int run_relax(const CLI::App& sub, RelaxArgs& a) {
  static const std::vector<std::string> keys = {
      "pdb", "pairs", "out", "tol", "radii", "seed", "format"};
  const json cfg = a.c.config_path.empty()
                       ? json::object()
                       : load_config_file(a.c.config_path, keys);
  apply(cfg, sub, "pdb", "pdb", a.pdb);
  apply(cfg, sub, "pairs", "pairs", a.pairs);
  apply(cfg, sub, "--out", "out", a.out);
  apply(cfg, sub, "--tol", "tol", a.tol);
  apply(cfg, sub, "--radii", "radii", a.radii);
  apply(cfg, sub, "--seed", "seed", a.c.seed);
  apply(cfg, sub, "--format", "format", a.c.format);
  if (a.pdb.empty() || a.pairs.empty())
    return usage_error("relax requires a PDB file and a pairs file");
  if (a.out.empty()) return usage_error("relax requires --out");

  const json resolved = {{"command", "relax"}, {"pdb", a.pdb},
                         {"pairs", a.pairs},   {"out", a.out},
                         {"tol", a.tol},       {"radii", a.radii},
                         {"seed", a.c.seed},   {"format", a.c.format}};

  const ljopt::Structure s = ljopt::parse_pdb_file(a.pdb);
  const ljopt::PairLists pairs = ljopt::read_pairs_file(a.pairs);
  const ljopt::RadiiTable table = load_radii(a.radii);
  const ljopt::RelaxResult res =
      ljopt::relax_structure(s, pairs, {}, a.tol, table);
  ljopt::write_pdb_file(res.structure, a.out);

  if (a.c.format == "json") {
    std::cout << json{{"config", resolved},
                      {"before_clashes", res.before.clashes.size()},
                      {"after_clashes", res.after.clashes.size()},
                      {"listed_clashes", res.listed_clashes.size()},
                      {"success", res.success},
                      {"converged", res.opt.converged},
                      {"iters", res.opt.iters},
                      {"message", res.message}}
                     .dump(2)
              << "\n";
  } else {
    echo_config_stderr(resolved);
    std::printf("before clashes: %zu\n", res.before.clashes.size());
    std::printf("after clashes: %zu\n", res.after.clashes.size());
    std::printf("listed clashes: %zu\n", res.listed_clashes.size());
    std::printf("converged: %s\n", res.opt.converged ? "yes" : "no");
    std::printf("success: %s\n", res.success ? "yes" : "no");
    if (!res.message.empty()) std::printf("message: %s\n", res.message.c_str());
  }
  return res.success ? kExitOk : kExitDomain;
}

// --------------------------------------------------------------- bench ----

struct BenchArgs {
  std::string range;
  int hops = 1000;
  int restarts = 10;
  unsigned threads = 0;
  CommonOpts c;
};

// Accepts "N" or "A..B" (inclusive).
bool parse_range(const std::string& text, int& lo, int& hi) {
  const auto dots = text.find("..");
  try {
    std::size_t used = 0;
    if (dots == std::string::npos) {
      lo = hi = std::stoi(text, &used);
      return used == text.size();
    }
    lo = std::stoi(text.substr(0, dots), &used);
    if (used != dots) return false;
    const std::string tail = text.substr(dots + 2);
    hi = std::stoi(tail, &used);
    return used == tail.size();
  } catch (const std::exception&) {
    return false;
  }
}

int run_bench(const CLI::App& sub, BenchArgs& a) {
  static const std::vector<std::string> keys = {
      "n", "hops", "restarts", "threads", "seed", "format"};
  const json cfg = a.c.config_path.empty()
                       ? json::object()
                       : load_config_file(a.c.config_path, keys);
  apply(cfg, sub, "--n", "n", a.range);
  apply(cfg, sub, "--hops", "hops", a.hops);
  apply(cfg, sub, "--restarts", "restarts", a.restarts);
  apply(cfg, sub, "--threads", "threads", a.threads);
  apply(cfg, sub, "--seed", "seed", a.c.seed);
  apply(cfg, sub, "--format", "format", a.c.format);
  if (a.range.empty()) return usage_error("bench requires --n (e.g. --n 2..6)");
  int lo = 0, hi = 0;
  if (!parse_range(a.range, lo, hi) || lo < 2 || hi < lo)
    return usage_error("bench range must be N or A..B with 2 <= A <= B");

  const json resolved = {{"command", "bench"},     {"n", a.range},
                         {"hops", a.hops},         {"restarts", a.restarts},
                         {"threads", a.threads},   {"seed", a.c.seed},
                         {"format", a.c.format}};
  echo_config_stderr(resolved);

  json rows = json::array();
  if (a.c.format != "json") std::printf("n energy hops seconds\n");
  for (int n = lo; n <= hi; ++n) {
    ljopt::BasinHopOptions opts;
    opts.n_atoms = n;
    opts.hops = a.hops;
    opts.restarts = a.restarts;
    opts.seed = a.c.seed;
    opts.threads = a.threads;
    const auto t0 = std::chrono::steady_clock::now();
    const ljopt::OptimizerReport rep = ljopt::basin_hop(opts);
    const auto t1 = std::chrono::steady_clock::now();
    const double secs = std::chrono::duration<double>(t1 - t0).count();
    if (a.c.format == "json") {
      rows.push_back(json{{"n", n},
                          {"energy", rep.best_energy},
                          {"hops", rep.hops_taken},
                          {"seconds", secs}});
    } else {
      std::printf("%d %.6f %ld %.3f\n", n, rep.best_energy, rep.hops_taken,
                  secs);
    }
  }
  if (a.c.format == "json") std::cout << rows.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lennard-Jones cluster and structure toolkit"};
  app.require_subcommand(1);

  PairArgs pair_args;
  CLI::App* pair_sub =
      app.add_subcommand("pair", "12-6 pair energy at a given distance");
  pair_sub->add_option("--r", pair_args.r, "pair distance (> 0)");
  pair_sub->add_option("--eps", pair_args.eps, "well depth");
  pair_sub->add_option("--sigma", pair_args.sigma, "zero-crossing distance");
  add_common(pair_sub, pair_args.c);

  ClusterArgs cluster_args;
  CLI::App* cluster_sub = app.add_subcommand(
      "cluster", "basin-hopping search for the minimum-energy cluster");
  cluster_sub->add_option("--n", cluster_args.n, "number of atoms (>= 2)");
  cluster_sub->add_option("--hops", cluster_args.hops,
                          "basin-hopping steps per restart");
  cluster_sub->add_option("--restarts", cluster_args.restarts,
                          "independent restarts");
  cluster_sub->add_option("--perturb", cluster_args.perturb,
                          "hop displacement bound");
  cluster_sub->add_option("--temperature", cluster_args.temperature,
                          "Metropolis acceptance temperature");
  cluster_sub->add_option("--threads", cluster_args.threads,
                          "worker threads (0 = all hardware threads)");
  cluster_sub->add_option("--out", cluster_args.out,
                          "write the best configuration as XYZ");
  add_common(cluster_sub, cluster_args.c);

  EmbedArgs embed_args;
  CLI::App* embed_sub = app.add_subcommand(
      "embed", "embed a distance-constraint set into 3-space");
  embed_sub->add_option("constraints", embed_args.constraints,
                        "constraint file (atoms N header, then i j r [w])");
  embed_sub->add_flag("--eps", embed_args.eps,
                      "minimize the perturbed objective as well");
  embed_sub->add_option("--eps-value", embed_args.eps_value,
                        "uniform perturbation magnitude (implies --eps)");
  embed_sub->add_option("--restarts", embed_args.restarts,
                        "independent restarts");
  embed_sub->add_option("--tol", embed_args.tol, "feasibility tolerance");
  embed_sub->add_option("--threads", embed_args.threads,
                        "worker threads (0 = all hardware threads)");
  embed_sub->add_option("--out", embed_args.out,
                        "write the embedding as XYZ");
  add_common(embed_sub, embed_args.c);

  ContactsArgs contacts_args;
  CLI::App* contacts_sub = app.add_subcommand(
      "contacts", "detect and classify inter-residue contacts in a PDB file");
  contacts_sub->add_option("pdb", contacts_args.pdb, "input PDB file");
  contacts_sub->add_option("--tol", contacts_args.tol,
                           "clash overlap tolerance (Angstroms)");
  contacts_sub->add_option("--window", contacts_args.window,
                           "optimal-contact half-width (fraction of vdw sum)");
  contacts_sub->add_option("--cutoff", contacts_args.cutoff,
                           "neighbor cutoff (Angstroms)");
  contacts_sub->add_option("--radii", contacts_args.radii,
                           "radii override file (El radius lines)");
  add_common(contacts_sub, contacts_args.c);

  RelaxArgs relax_args;
  CLI::App* relax_sub = app.add_subcommand(
      "relax", "remove listed bad contacts by pair-potential minimization");
  relax_sub->add_option("pdb", relax_args.pdb, "input PDB file");
  relax_sub->add_option("pairs", relax_args.pairs,
                        "pair list (vdw i j [eps] / hb i j [depth [r_min]])");
  relax_sub->add_option("--out", relax_args.out, "output PDB path");
  relax_sub->add_option("--tol", relax_args.tol,
                        "clash overlap tolerance (Angstroms)");
  relax_sub->add_option("--radii", relax_args.radii,
                        "radii override file (El radius lines)");
  add_common(relax_sub, relax_args.c);

  BenchArgs bench_args;
  CLI::App* bench_sub = app.add_subcommand(
      "bench", "basin-hop a range of cluster sizes and tabulate results");
  bench_sub->add_option("--n", bench_args.range, "size range, N or A..B");
  bench_sub->add_option("--hops", bench_args.hops,
                        "basin-hopping steps per restart");
  bench_sub->add_option("--restarts", bench_args.restarts,
                        "independent restarts");
  bench_sub->add_option("--threads", bench_args.threads,
                        "worker threads (0 = all hardware threads)");
  add_common(bench_sub, bench_args.c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*pair_sub) return run_pair(*pair_sub, pair_args);
    if (*cluster_sub) return run_cluster(*cluster_sub, cluster_args);
    if (*embed_sub) return run_embed(*embed_sub, embed_args);
    if (*contacts_sub) return run_contacts(*contacts_sub, contacts_args);
    if (*relax_sub) return run_relax(*relax_sub, relax_args);
    if (*bench_sub) return run_bench(*bench_sub, bench_args);
  } catch (const ljopt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
