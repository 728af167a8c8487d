#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ljopt/localopt.hpp"
#include "ljopt/potential.hpp"
#include "ljopt/radii.hpp"

namespace ljopt {

// Clash overlap tolerance in Angstroms, emulating common structure-checker
// practice: a pair is a clash when it sits more than this far inside the sum
// of its vdw radii.
inline constexpr double kDefaultOverlapTol = 0.4;

// Half-width of the "optimal contact" band as a fraction of the pair's
// optimal distance (the sum of vdw radii).
inline constexpr double kDefaultContactWindow = 0.1;

// Neighbor cutoff in Angstroms: pairs farther apart than this are left out
// of contact reports entirely.
inline constexpr double kNeighborCutoff = 8.0;

// Default per-pair well depth for relaxation; only relative depths matter
// for clash removal.
inline constexpr double kDefaultPairEpsilon = 0.2;

struct Atom {
  int serial = 0;
  std::string name;          // trimmed atom name, e.g. "CA"
  std::string element;       // normalized (uppercase) element symbol
  std::string residue_name;  // e.g. "GLY"
  char chain = ' ';
  int residue_seq = 0;
  std::array<double, 3> position{};  // Angstroms
  double occupancy = 1.0;            // carried through, unused
  double temp_factor = 0.0;          // carried through, unused
  bool hetatm = false;               // record type, preserved on write
};

struct Provenance {
  std::string source;       // file or stream name
  long lines = 0;           // lines consumed from the input
  long ignored_records = 0; // non-blank lines skipped (CONECT, ANISOU, ...)
};

struct Structure {
  std::vector<Atom> atoms;
  Provenance provenance;

  std::size_t n_atoms() const { return atoms.size(); }
  // Flattened coordinates (x0, y0, z0, x1, ...), 3 per atom.
  std::vector<double> coordinates() const;
};

// Fixed-column parser for the PDB v3.3 ATOM/HETATM subset. TER lines are
// skipped, END stops the scan, everything else is counted and ignored.
// Element symbols fall back to the first alphabetic character of the atom
// name when columns 77-78 are blank. Throws ParseError (with line number)
// on malformed fields or duplicate serials.
Structure parse_pdb(std::string_view text, std::string_view source = "<string>");
Structure parse_pdb_file(const std::string& path);

// Emits ATOM/HETATM records in input order, coordinates as fixed 8.3 fields,
// then a final END record. Throws FormatOverflowError when a value does not
// fit its column range (e.g. coordinate magnitude >= 10^4 Angstroms).
std::string write_pdb(const Structure& s);
void write_pdb_file(const Structure& s, const std::string& path);

struct ContactEntry {
  std::size_t i = 0;  // atom indices into Structure::atoms, i < j
  std::size_t j = 0;
  double distance = 0.0;  // Angstroms
  double vdw_sum = 0.0;   // vdw_radius(i) + vdw_radius(j)
};

struct ContactReport {
  std::vector<ContactEntry> clashes;
  std::vector<ContactEntry> optimal;
  std::vector<ContactEntry> far;
  // Thresholds the report was built with.
  double overlap_tol = kDefaultOverlapTol;
  double window = 0.0;  // 0 when produced by find_clashes
  double cutoff = kNeighborCutoff;
};

// Pair (i, j) is a clash iff distance < vdw_sum - overlap_tol. Pairs within
// the same residue (same chain + residue_seq) are excluded: bonded neighbors
// legitimately sit inside vdw distance.
ContactReport find_clashes(const Structure& s,
                           double overlap_tol = kDefaultOverlapTol,
                           const RadiiTable& table = RadiiTable::bondi());

// Buckets every (different-residue) pair against the pair's two landmark
// distances: with d* = vdw_sum, clash if d < d*/2^(1/6) - overlap_tol,
// optimal if |d - d*| <= window * d*, far otherwise (within cutoff).
// Branches are tested in that order, so the buckets are always disjoint.
ContactReport classify_contacts(const Structure& s,
                                double window = kDefaultContactWindow,
                                double overlap_tol = kDefaultOverlapTol,
                                double cutoff = kNeighborCutoff,
                                const RadiiTable& table = RadiiTable::bondi());

struct VdwPairSpec {
  std::size_t i = 0;
  std::size_t j = 0;
  double epsilon = kDefaultPairEpsilon;
};

struct HbPairSpec {
  std::size_t i = 0;
  std::size_t j = 0;
  double depth = kDefaultPairEpsilon;
  // Distance of the well bottom; defaults to the pair's vdw_sum.
  std::optional<double> r_min;
};

struct PairLists {
  std::vector<VdwPairSpec> vdw;
  std::vector<HbPairSpec> hb;

  bool empty() const { return vdw.empty() && hb.empty(); }
};

// Pair-list text format: one pair per line,
//   vdw i j [epsilon]
//   hb  i j [depth [r_min]]
// zero-based atom indices, '#' starts a comment.
PairLists read_pairs(std::istream& in, std::string_view source = "<stream>");
PairLists read_pairs_file(const std::string& path);

struct RelaxResult {
  Structure structure;    // best-found structure (also on failure)
  ContactReport before;
  ContactReport after;
  // Clashes among the listed pairs after relaxation; success requires this
  // list to be empty. Unlike ContactReport, same-residue pairs are NOT
  // excluded here: a listed pair is always checked.
  std::vector<ContactEntry> listed_clashes;
  bool success = false;
  std::string message;
  LocalOptResult opt;  // optimizer diagnostics
};

// Minimizes the combined pair energy over the listed pairs' atoms (atoms not
// named in any pair stay fixed). Per-pair sigma is chosen so the well bottom
// lands on the pair's vdw_sum: sigma = vdw_sum / 2^(1/6). Success requires
// optimizer convergence and a clash-free after-state among listed pairs;
// otherwise the result reports failure with diagnostics.
RelaxResult relax_structure(const Structure& s, const PairLists& pairs,
                            const LocalOptOptions& local_opts = {},
                            double overlap_tol = kDefaultOverlapTol,
                            const RadiiTable& table = RadiiTable::bondi());

}  // namespace ljopt
