// End-to-end tests of the ljopt command-line driver: output formats, exit
// codes, config precedence, and reproducibility, all through real subprocess
// invocations of the installed binary.
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "ljopt/potential.hpp"
#include "ljopt/structure.hpp"
#include "ljopt/xyz.hpp"

#ifndef LJOPT_BIN_PATH
#error "LJOPT_BIN_PATH must point at the ljopt executable"
#endif
#ifndef LJOPT_FIXTURE_DIR
#error "LJOPT_FIXTURE_DIR must point at the fixture directory"
#endif

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fixture(const std::string& name) {
  return std::string(LJOPT_FIXTURE_DIR) + "/" + name;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("ljopt_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct CmdResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs `ljopt <args>` with stdout/stderr captured to scratch files.
CmdResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path out = scratch_dir() / ("out" + std::to_string(++counter));
  const fs::path err = scratch_dir() / ("err" + std::to_string(counter));
  const std::string cmd = std::string(LJOPT_BIN_PATH) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int raw = std::system(cmd.c_str());
  CmdResult r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

// Value following `label` on its own line, e.g. number_after(out, "P*:").
double number_after(const std::string& text, const std::string& label) {
  const auto pos = text.find(label);
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + label.size()));
}

}  // namespace

TEST_CASE("pair prints the well landmarks and rejects bad distances") {
  CmdResult zero = run_cli("pair --r 1.0");
  CHECK(zero.exit_code == 0);
  CHECK(zero.out == "0\n");

  CmdResult well = run_cli("pair --r 1.122462048");
  CHECK(well.exit_code == 0);
  CHECK(well.out == "-1\n");

  CmdResult bad = run_cli("pair --r 0");
  CHECK(bad.exit_code == 2);
  CHECK(!bad.err.empty());

  CHECK(run_cli("pair").exit_code == 2);  // --r is mandatory
}

TEST_CASE("pair scales with eps and sigma") {
  // Depth scales linearly with eps; the minimum sits at 2^(1/6) * sigma.
  CmdResult r = run_cli("pair --r 2.244924096618746 --eps 3.0 --sigma 2.0");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "-3\n");
}

TEST_CASE("cluster finds the tiny-cluster minima with fixed formatting") {
  CmdResult two = run_cli("cluster --n 2 --seed 1");
  CHECK(two.exit_code == 0);
  CHECK(contains(two.out, "best energy: -1.000000"));

  CmdResult four = run_cli("cluster --n 4 --seed 1");
  CHECK(four.exit_code == 0);
  CHECK(contains(four.out, "best energy: -6.000000"));

  CHECK(run_cli("cluster").exit_code == 2);       // missing --n
  CHECK(run_cli("cluster --n 1").exit_code == 2); // invalid n
}

TEST_CASE("cluster JSON report matches the pre-built N=13 oracle") {
  CmdResult r =
      run_cli("cluster --n 13 --seed 1 --hops 2000 --restarts 20 --format json");
  REQUIRE(r.exit_code == 0);
  const json out = json::parse(r.out);
  CHECK(out.at("config").at("n").get<int>() == 13);
  CHECK(out.at("config").at("seed").get<int>() == 1);
  CHECK(std::abs(out.at("best_energy").get<double>() -
                 (-44.326801419534064)) <= 1e-4);
  CHECK(out.at("hops_taken").get<long>() == 2000L * 20L);
  CHECK(out.at("restarts_used").get<int>() == 20);
}

TEST_CASE("cluster writes a round-trippable XYZ whose energy matches") {
  const fs::path xyz = scratch_dir() / "cluster4.xyz";
  CmdResult r =
      run_cli("cluster --n 4 --seed 1 --out " + xyz.string() + " --format json");
  REQUIRE(r.exit_code == 0);
  const json out = json::parse(r.out);
  const ljopt::XyzFrame frame = ljopt::read_xyz_file(xyz.string());
  REQUIRE(frame.n_atoms() == 4);
  CHECK(ljopt::lj_energy(frame.coords) ==
        doctest::Approx(out.at("best_energy").get<double>()).epsilon(1e-12));
}

TEST_CASE("embed solves the equilateral triangle and certifies it feasible") {
  CmdResult r = run_cli("embed " + fixture("triangle_eq.constraints") +
                        " --seed 3");
  CHECK(r.exit_code == 0);
  CHECK(number_after(r.out, "P*:") < 1e-10);
  CHECK(contains(r.out, "feasible: yes"));
  CHECK(contains(r.out, "triangle violations: 0"));
}

TEST_CASE("embed reports the infeasible 1,1,3 triangle") {
  CmdResult r = run_cli("embed " + fixture("triangle_bad.constraints") +
                        " --seed 3");
  CHECK(r.exit_code == 0);  // infeasibility is a finding, not a failure
  CHECK(number_after(r.out, "P*:") > 0.0);
  CHECK(contains(r.out, "feasible: no"));
  CHECK(contains(r.out, "triangle violations: 1"));
}

TEST_CASE("embed names the missing constraints file") {
  CmdResult r = run_cli("embed /no/such/file.constraints");
  CHECK(r.exit_code == 2);
  CHECK(contains(r.err, "/no/such/file.constraints"));
}

TEST_CASE("embed --eps reports the perturbed objective too") {
  CmdResult r = run_cli("embed " + fixture("triangle_eq.constraints") +
                        " --eps --seed 3 --format json");
  REQUIRE(r.exit_code == 0);
  const json out = json::parse(r.out);
  CHECK(out.contains("perturbed"));
  CHECK(out.at("config").at("eps").get<bool>());
  CHECK(out.at("stress").get<double>() >= 0.0);
}

TEST_CASE("contacts gates its exit code on the clash count") {
  CmdResult clash = run_cli("contacts " + fixture("two_carbons_clash.pdb"));
  CHECK(clash.exit_code == 1);
  CHECK(contains(clash.out, "clashes: 1"));

  CmdResult ok = run_cli("contacts " + fixture("two_carbons_ok.pdb"));
  CHECK(ok.exit_code == 0);
  CHECK(contains(ok.out, "clashes: 0"));

  // All four glycine atoms share one residue, so no pair is reported.
  CmdResult gly = run_cli("contacts " + fixture("glycine.pdb"));
  CHECK(gly.exit_code == 0);
  CHECK(contains(gly.out, "clashes: 0"));

  CmdResult garbage = run_cli("contacts " + fixture("bad_coords.pdb"));
  CHECK(garbage.exit_code == 2);
  CHECK(!garbage.err.empty());
}

TEST_CASE("contacts honors a radii override file") {
  // Inflating carbon to 2.5 A turns the 4.0 A pair into a clash
  // (vdw sum 5.0, tolerance 0.4).
  CmdResult r = run_cli("contacts " + fixture("two_carbons_ok.pdb") +
                        " --radii " + fixture("radii_override.txt"));
  CHECK(r.exit_code == 1);
  CHECK(contains(r.out, "clashes: 1"));
}

TEST_CASE("relax repairs the carbon clash and lands the pair on its optimum") {
  const fs::path out_pdb = scratch_dir() / "repaired.pdb";
  CmdResult r = run_cli("relax " + fixture("two_carbons_clash.pdb") + " " +
                        fixture("vdw_pair.pairs") + " --out " +
                        out_pdb.string());
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "before clashes: 1"));
  CHECK(contains(r.out, "after clashes: 0"));
  CHECK(contains(r.out, "success: yes"));

  const ljopt::Structure fixed = ljopt::parse_pdb_file(out_pdb.string());
  REQUIRE(fixed.n_atoms() == 2);
  const auto& a = fixed.atoms[0].position;
  const auto& b = fixed.atoms[1].position;
  const double d = std::hypot(b[0] - a[0], b[1] - a[1], b[2] - a[2]);
  CHECK(std::abs(d - 3.4) <= 1e-3);  // well bottom at the vdw sum
}

TEST_CASE("relax with no listed pairs is an identity transform") {
  const fs::path out_pdb = scratch_dir() / "identity.pdb";
  CmdResult r = run_cli("relax " + fixture("two_carbons_clash.pdb") + " " +
                        fixture("empty.pairs") + " --out " + out_pdb.string());
  CHECK(r.exit_code == 0);

  // Byte-for-byte round trip: writing the parsed input must reproduce the
  // relax output exactly (coordinates carry 3 decimals in both).
  const ljopt::Structure in =
      ljopt::parse_pdb_file(fixture("two_carbons_clash.pdb"));
  CHECK(slurp(out_pdb) == ljopt::write_pdb(in));
}

TEST_CASE("relax names an unknown element and exits 2") {
  const fs::path out_pdb = scratch_dir() / "never_written.pdb";
  CmdResult r = run_cli("relax " + fixture("unknown_element.pdb") + " " +
                        fixture("vdw_pair.pairs") + " --out " +
                        out_pdb.string());
  CHECK(r.exit_code == 2);
  CHECK(contains(r.err, "XQ"));
}

TEST_CASE("bench tabulates the trivial sizes") {
  CmdResult r = run_cli("bench --n 2..4 --seed 7");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "2 -1.000000"));
  CHECK(contains(r.out, "3 -3.000000"));
  CHECK(contains(r.out, "4 -6.000000"));

  CHECK(run_cli("bench --n 4..2").exit_code == 2);
  CHECK(run_cli("bench --n 1..3").exit_code == 2);
  CHECK(run_cli("bench --n x").exit_code == 2);
}

TEST_CASE("bench JSON is an array of {n, energy, hops, seconds}") {
  CmdResult r = run_cli("bench --n 2..4 --seed 7 --format json");
  REQUIRE(r.exit_code == 0);
  const json rows = json::parse(r.out);
  REQUIRE(rows.is_array());
  REQUIRE(rows.size() == 3);
  const double expected[] = {-1.0, -3.0, -6.0};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].at("n").get<int>() == static_cast<int>(i) + 2);
    CHECK(rows[i].at("energy").get<double>() ==
          doctest::Approx(expected[i]).epsilon(1e-6));
    CHECK(rows[i].at("hops").get<long>() > 0);
    CHECK(rows[i].at("seconds").is_number());
  }
}

TEST_CASE("bench JSON is reproducible apart from the seconds field") {
  json a = json::parse(run_cli("bench --n 2..3 --seed 11 --format json").out);
  json b = json::parse(run_cli("bench --n 2..3 --seed 11 --format json").out);
  for (auto& row : a) row["seconds"] = 0.0;
  for (auto& row : b) row["seconds"] = 0.0;
  CHECK(a.dump() == b.dump());
}

TEST_CASE("identical seeds give byte-identical reports") {
  CmdResult a = run_cli("cluster --n 5 --seed 3 --format json");
  CmdResult b = run_cli("cluster --n 5 --seed 3 --format json");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("config files merge under flags and reject unknown keys") {
  // File sets r at the well bottom and eps=2 -> energy -2.
  CmdResult file_only = run_cli("pair --config " + fixture("pair_config.json"));
  CHECK(file_only.exit_code == 0);
  CHECK(file_only.out == "-2\n");

  // Explicit flag outranks the file value.
  CmdResult flag_wins =
      run_cli("pair --config " + fixture("pair_config.json") + " --eps 1.0");
  CHECK(flag_wins.exit_code == 0);
  CHECK(flag_wins.out == "-1\n");

  CmdResult bad = run_cli("pair --config " + fixture("bad_key_config.json"));
  CHECK(bad.exit_code == 2);
  CHECK(contains(bad.err, "epz"));

  CmdResult cluster_cfg =
      run_cli("cluster --config " + fixture("cluster_config.json"));
  CHECK(cluster_cfg.exit_code == 0);
  CHECK(contains(cluster_cfg.out, "best energy: -3.000000"));
}

TEST_CASE("every run echoes its resolved config") {
  // JSON object outputs embed it; text outputs echo it on stderr.
  const json out = json::parse(run_cli("pair --r 1.5 --format json").out);
  CHECK(out.at("config").at("r").get<double>() == 1.5);
  CHECK(out.at("config").at("eps").get<double>() == 1.0);

  CmdResult text = run_cli("pair --r 1.5");
  CHECK(contains(text.err, "config:"));
  CHECK(contains(text.err, "\"r\":1.5"));
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli("").exit_code == 2);               // no subcommand
  CHECK(run_cli("frobnicate").exit_code == 2);     // unknown subcommand
  CHECK(run_cli("pair --bogus 1").exit_code == 2); // unknown flag
  CHECK(run_cli("pair --r abc").exit_code == 2);   // unparsable value
  CHECK(run_cli("--help").exit_code == 0);         // help is not an error
}
