#include "ljopt/structure.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "ljopt/errors.hpp"
#include "ljopt/text.hpp"

namespace ljopt {

namespace {

// Columns are 0-based here; the PDB documentation counts from 1.
std::string_view raw_col(std::string_view line, std::size_t start,
                         std::size_t len) {
  if (start >= line.size()) return {};
  return line.substr(start, std::min(len, line.size() - start));
}

std::string_view col(std::string_view line, std::size_t start,
                     std::size_t len) {
  return trim(raw_col(line, start, len));
}

int parse_int_col(std::string_view line, std::size_t start, std::size_t len,
                  const char* what, const std::string& source, long line_no) {
  const std::string_view token = col(line, start, len);
  int value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto res = std::from_chars(first, last, value);
  if (token.empty() || res.ec != std::errc() || res.ptr != last)
    throw ParseError(source, line_no,
                     std::string("malformed ") + what + " field");
  return value;
}

double parse_coord_col(std::string_view line, std::size_t start,
                       std::size_t len, const char* what,
                       const std::string& source, long line_no) {
  const std::string_view token = col(line, start, len);
  double value = 0.0;
  if (token.empty() || !parse_double(token, value) || !std::isfinite(value))
    throw ParseError(source, line_no,
                     std::string("malformed ") + what + " coordinate field");
  return value;
}

// Optional real field (occupancy / temp factor): blank means default.
double parse_real_col_or(std::string_view line, std::size_t start,
                         std::size_t len, double fallback, const char* what,
                         const std::string& source, long line_no) {
  const std::string_view token = col(line, start, len);
  if (token.empty()) return fallback;
  double value = 0.0;
  if (!parse_double(token, value) || !std::isfinite(value))
    throw ParseError(source, line_no,
                     std::string("malformed ") + what + " field");
  return value;
}

std::string element_for(std::string_view element_field, std::string_view name,
                        const std::string& source, long line_no) {
  if (!element_field.empty()) return normalize_element(element_field);
  for (char c : name)
    if (std::isalpha(static_cast<unsigned char>(c)))
      return normalize_element(std::string_view(&c, 1));
  throw ParseError(source, line_no,
                   "cannot determine element: columns 77-78 blank and atom "
                   "name has no letters");
}

Atom parse_atom_line(std::string_view line, bool hetatm,
                     const std::string& source, long line_no) {
  if (line.size() < 54)
    throw ParseError(source, line_no,
                     "record too short: coordinates need columns 31-54");
  Atom atom;
  atom.hetatm = hetatm;
  atom.serial = parse_int_col(line, 6, 5, "serial", source, line_no);
  atom.name = std::string(col(line, 12, 4));
  atom.residue_name = std::string(col(line, 17, 3));
  atom.chain = line[21];
  atom.residue_seq = parse_int_col(line, 22, 4, "residue number", source, line_no);
  atom.position[0] = parse_coord_col(line, 30, 8, "x", source, line_no);
  atom.position[1] = parse_coord_col(line, 38, 8, "y", source, line_no);
  atom.position[2] = parse_coord_col(line, 46, 8, "z", source, line_no);
  atom.occupancy =
      parse_real_col_or(line, 54, 6, 1.0, "occupancy", source, line_no);
  atom.temp_factor =
      parse_real_col_or(line, 60, 6, 0.0, "temp factor", source, line_no);
  atom.element = element_for(col(line, 76, 2), atom.name, source, line_no);
  return atom;
}

std::string fixed_real(double value, int width, int precision,
                       const char* what) {
  if (!std::isfinite(value))
    throw DomainError(std::string(what) + " must be finite");
  char buf[64];
  const int n = std::snprintf(buf, sizeof buf, "%*.*f", width, precision, value);
  if (n < 0 || n > width)
    throw FormatOverflowError(std::string(what) + " " + format_double(value) +
                              " does not fit a " + std::to_string(width) +
                              "-column field");
  return std::string(buf, static_cast<std::size_t>(n));
}

std::string fixed_int(long value, int width, const char* what) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%*ld", width, value);
  if (n < 0 || n > width)
    throw FormatOverflowError(std::string(what) + " " + std::to_string(value) +
                              " does not fit a " + std::to_string(width) +
                              "-column field");
  return std::string(buf, static_cast<std::size_t>(n));
}

// Atom names shorter than 4 characters start in column 14 by convention;
// 4-character names use the full 13-16 range.
std::string name_field(const std::string& name) {
  if (name.size() > 4)
    throw FormatOverflowError("atom name \"" + name +
                              "\" does not fit 4 columns");
  if (name.size() == 4) return name;
  std::string out = " " + name;
  out.resize(4, ' ');
  return out;
}

double distance(const Atom& a, const Atom& b) {
  const double dx = a.position[0] - b.position[0];
  const double dy = a.position[1] - b.position[1];
  const double dz = a.position[2] - b.position[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

bool same_residue(const Atom& a, const Atom& b) {
  return a.chain == b.chain && a.residue_seq == b.residue_seq;
}

std::vector<double> atom_radii(const Structure& s, const RadiiTable& table) {
  std::vector<double> radii;
  radii.reserve(s.atoms.size());
  for (const Atom& atom : s.atoms) radii.push_back(table.radius(atom.element));
  return radii;
}

}  // namespace

std::vector<double> Structure::coordinates() const {
  std::vector<double> coords;
  coords.reserve(3 * atoms.size());
  for (const Atom& atom : atoms) {
    coords.push_back(atom.position[0]);
    coords.push_back(atom.position[1]);
    coords.push_back(atom.position[2]);
  }
  return coords;
}

Structure parse_pdb(std::string_view text, std::string_view source) {
  const std::string src(source);
  Structure structure;
  structure.provenance.source = src;
  std::set<int> serials;
  long line_no = 0;
  std::size_t pos = 0;

  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    const std::string_view record = col(line, 0, 6);
    if (record.empty()) continue;  // blank line
    if (record == "END") break;    // stop the scan; trailing content ignored
    if (record == "TER") continue;
    if (record == "ATOM" || record == "HETATM") {
      Atom atom = parse_atom_line(line, record == "HETATM", src, line_no);
      if (!serials.insert(atom.serial).second)
        throw ParseError(src, line_no,
                         "duplicate atom serial " + std::to_string(atom.serial));
      structure.atoms.push_back(std::move(atom));
      continue;
    }
    ++structure.provenance.ignored_records;
  }

  structure.provenance.lines = line_no;
  return structure;
}

Structure parse_pdb_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open PDB file");
  std::ostringstream contents;
  contents << in.rdbuf();
  return parse_pdb(contents.str(), path);
}

std::string write_pdb(const Structure& s) {
  std::string out;
  out.reserve(81 * (s.atoms.size() + 1));
  for (const Atom& atom : s.atoms) {
    const std::string element = normalize_element(atom.element);
    if (element.empty() || element.size() > 2)
      throw FormatOverflowError("element \"" + atom.element +
                                "\" does not fit 2 columns");
    if (atom.residue_name.size() > 3)
      throw FormatOverflowError("residue name \"" + atom.residue_name +
                                "\" does not fit 3 columns");
    out += atom.hetatm ? "HETATM" : "ATOM  ";
    out += fixed_int(atom.serial, 5, "atom serial");
    out += ' ';
    out += name_field(atom.name);
    out += ' ';  // altLoc
    {
      char buf[8];
      std::snprintf(buf, sizeof buf, "%-3s", atom.residue_name.c_str());
      out += buf;
    }
    out += ' ';
    out += atom.chain;
    out += fixed_int(atom.residue_seq, 4, "residue number");
    out += "    ";  // iCode + columns 28-30
    out += fixed_real(atom.position[0], 8, 3, "coordinate");
    out += fixed_real(atom.position[1], 8, 3, "coordinate");
    out += fixed_real(atom.position[2], 8, 3, "coordinate");
    out += fixed_real(atom.occupancy, 6, 2, "occupancy");
    out += fixed_real(atom.temp_factor, 6, 2, "temp factor");
    out += "          ";  // columns 67-76
    if (element.size() == 1) out += ' ';
    out += element;
    out += '\n';
  }
  out += "END\n";
  return out;
}

void write_pdb_file(const Structure& s, const std::string& path) {
  const std::string text = write_pdb(s);
  std::ofstream out(path);
  if (!out) throw Error("cannot write PDB file: " + path);
  out << text;
  if (!out) throw Error("write failed for PDB file: " + path);
}

ContactReport find_clashes(const Structure& s, double overlap_tol,
                           const RadiiTable& table) {
  if (!(overlap_tol >= 0.0))
    throw DomainError("overlap tolerance must be non-negative");
  const std::vector<double> radii = atom_radii(s, table);
  ContactReport report;
  report.overlap_tol = overlap_tol;
  report.window = 0.0;
  for (std::size_t i = 0; i < s.atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < s.atoms.size(); ++j) {
      if (same_residue(s.atoms[i], s.atoms[j])) continue;
      const double d = distance(s.atoms[i], s.atoms[j]);
      const double vdw_sum = radii[i] + radii[j];
      if (d < vdw_sum - overlap_tol)
        report.clashes.push_back({i, j, d, vdw_sum});
    }
  }
  return report;
}

ContactReport classify_contacts(const Structure& s, double window,
                                double overlap_tol, double cutoff,
                                const RadiiTable& table) {
  if (!(window > 0.0) || !(window < 1.0))
    throw DomainError("contact window must be in (0, 1)");
  if (!(overlap_tol >= 0.0))
    throw DomainError("overlap tolerance must be non-negative");
  if (!(cutoff > 0.0)) throw DomainError("neighbor cutoff must be positive");
  const std::vector<double> radii = atom_radii(s, table);
  ContactReport report;
  report.overlap_tol = overlap_tol;
  report.window = window;
  report.cutoff = cutoff;
  for (std::size_t i = 0; i < s.atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < s.atoms.size(); ++j) {
      if (same_residue(s.atoms[i], s.atoms[j])) continue;
      const double d = distance(s.atoms[i], s.atoms[j]);
      const double d_star = radii[i] + radii[j];
      const ContactEntry entry{i, j, d, d_star};
      if (d < d_star / kWellMinimumFactor - overlap_tol)
        report.clashes.push_back(entry);
      else if (std::abs(d - d_star) <= window * d_star)
        report.optimal.push_back(entry);
      else if (d <= cutoff)
        report.far.push_back(entry);
    }
  }
  return report;
}

PairLists read_pairs(std::istream& in, std::string_view source) {
  const std::string src(source);
  PairLists lists;
  std::string raw;
  long line_no = 0;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = strip_comment(raw);
    if (line.empty()) continue;
    std::istringstream fields{std::string(line)};
    std::string kind;
    fields >> kind;
    std::vector<std::string> tokens;
    std::string token;
    while (fields >> token) tokens.push_back(token);

    if (kind != "vdw" && kind != "hb")
      throw ParseError(src, line_no,
                       "expected 'vdw' or 'hb', got '" + kind + "'");
    if (tokens.size() < 2)
      throw ParseError(src, line_no, "expected at least two atom indices");

    std::size_t i = 0, j = 0;
    if (!parse_index(tokens[0], i) || !parse_index(tokens[1], j))
      throw ParseError(src, line_no, "atom indices must be non-negative integers");
    if (i == j)
      throw ParseError(src, line_no, "pair joins an atom to itself");
    if (!seen.insert(std::minmax(i, j)).second)
      throw ParseError(src, line_no, "duplicate pair");

    if (kind == "vdw") {
      if (tokens.size() > 3)
        throw ParseError(src, line_no, "expected 'vdw i j [epsilon]'");
      VdwPairSpec spec{i, j, kDefaultPairEpsilon};
      if (tokens.size() == 3 &&
          (!parse_double(tokens[2], spec.epsilon) || !(spec.epsilon > 0.0) ||
           !std::isfinite(spec.epsilon)))
        throw ParseError(src, line_no, "epsilon must be a positive number");
      lists.vdw.push_back(spec);
    } else {
      if (tokens.size() > 4)
        throw ParseError(src, line_no, "expected 'hb i j [depth [r_min]]'");
      HbPairSpec spec{i, j, kDefaultPairEpsilon, std::nullopt};
      if (tokens.size() >= 3 &&
          (!parse_double(tokens[2], spec.depth) || !(spec.depth > 0.0) ||
           !std::isfinite(spec.depth)))
        throw ParseError(src, line_no, "depth must be a positive number");
      if (tokens.size() == 4) {
        double r_min = 0.0;
        if (!parse_double(tokens[3], r_min) || !(r_min > 0.0) ||
            !std::isfinite(r_min))
          throw ParseError(src, line_no, "r_min must be a positive number");
        spec.r_min = r_min;
      }
      lists.hb.push_back(spec);
    }
  }
  return lists;
}

PairLists read_pairs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open pairs file");
  return read_pairs(in, path);
}

RelaxResult relax_structure(const Structure& s, const PairLists& pairs,
                            const LocalOptOptions& local_opts,
                            double overlap_tol, const RadiiTable& table) {
  local_opts.validate();
  if (!(overlap_tol >= 0.0))
    throw DomainError("overlap tolerance must be non-negative");
  const std::size_t n = s.atoms.size();
  for (const VdwPairSpec& p : pairs.vdw)
    if (p.i >= n || p.j >= n || p.i == p.j)
      throw DomainError("vdw pair (" + std::to_string(p.i) + ", " +
                        std::to_string(p.j) + ") invalid for " +
                        std::to_string(n) + " atoms");
  for (const HbPairSpec& p : pairs.hb)
    if (p.i >= n || p.j >= n || p.i == p.j)
      throw DomainError("hb pair (" + std::to_string(p.i) + ", " +
                        std::to_string(p.j) + ") invalid for " +
                        std::to_string(n) + " atoms");

  RelaxResult result;
  result.before = find_clashes(s, overlap_tol, table);

  if (pairs.empty()) {
    result.structure = s;
    result.after = result.before;
    result.success = true;
    result.opt.converged = true;
    result.message = "no pairs listed; structure unchanged";
    return result;
  }

  const std::vector<double> radii = atom_radii(s, table);

  std::vector<VdwPair> vdw;
  vdw.reserve(pairs.vdw.size());
  for (const VdwPairSpec& p : pairs.vdw) {
    if (!(p.epsilon > 0.0) || !std::isfinite(p.epsilon))
      throw DomainError("vdw pair epsilon must be positive");
    const double sigma = (radii[p.i] + radii[p.j]) / kWellMinimumFactor;
    vdw.push_back({static_cast<int>(p.i), static_cast<int>(p.j),
                   ab_from_eps_sigma({p.epsilon, sigma})});
  }
  std::vector<HbPair> hb;
  hb.reserve(pairs.hb.size());
  for (const HbPairSpec& p : pairs.hb) {
    if (!(p.depth > 0.0) || !std::isfinite(p.depth))
      throw DomainError("hb pair depth must be positive");
    const double r_min = p.r_min.value_or(radii[p.i] + radii[p.j]);
    if (!(r_min > 0.0) || !std::isfinite(r_min))
      throw DomainError("hb pair r_min must be positive");
    hb.push_back({static_cast<int>(p.i), static_cast<int>(p.j),
                  hb_params_from_depth(p.depth, r_min)});
  }

  // Only atoms named in a pair move; everything else stays fixed.
  std::vector<std::size_t> moving;
  for (const VdwPairSpec& p : pairs.vdw) {
    moving.push_back(p.i);
    moving.push_back(p.j);
  }
  for (const HbPairSpec& p : pairs.hb) {
    moving.push_back(p.i);
    moving.push_back(p.j);
  }
  std::sort(moving.begin(), moving.end());
  moving.erase(std::unique(moving.begin(), moving.end()), moving.end());

  std::vector<double> base = s.coordinates();
  std::vector<double> full(base);
  std::vector<double> full_grad(base.size());

  const Objective objective = [&](std::span<const double> x,
                                  std::span<double> grad) {
    full = base;
    for (std::size_t m = 0; m < moving.size(); ++m)
      for (int c = 0; c < 3; ++c) full[3 * moving[m] + c] = x[3 * m + c];
    const double f = total_value_and_gradient(full, vdw, hb, full_grad);
    for (std::size_t m = 0; m < moving.size(); ++m)
      for (int c = 0; c < 3; ++c) grad[3 * m + c] = full_grad[3 * moving[m] + c];
    return f;
  };

  std::vector<double> x0(3 * moving.size());
  for (std::size_t m = 0; m < moving.size(); ++m)
    for (int c = 0; c < 3; ++c) x0[3 * m + c] = base[3 * moving[m] + c];

  result.opt = minimize_local(objective, std::move(x0), local_opts);

  result.structure = s;
  for (std::size_t m = 0; m < moving.size(); ++m)
    for (int c = 0; c < 3; ++c)
      result.structure.atoms[moving[m]].position[c] =
          result.opt.x_star[3 * m + c];

  result.after = find_clashes(result.structure, overlap_tol, table);

  // The success gate checks every listed pair directly, same-residue or not.
  std::set<std::pair<std::size_t, std::size_t>> listed;
  for (const VdwPairSpec& p : pairs.vdw) listed.insert(std::minmax(p.i, p.j));
  for (const HbPairSpec& p : pairs.hb) listed.insert(std::minmax(p.i, p.j));
  for (const auto& [i, j] : listed) {
    const double d = distance(result.structure.atoms[i], result.structure.atoms[j]);
    const double vdw_sum = radii[i] + radii[j];
    if (d < vdw_sum - overlap_tol)
      result.listed_clashes.push_back({i, j, d, vdw_sum});
  }

  if (!result.opt.converged) {
    result.success = false;
    result.message = "optimizer did not converge: " + result.opt.message;
  } else if (!result.listed_clashes.empty()) {
    result.success = false;
    result.message = std::to_string(result.listed_clashes.size()) +
                     " listed pair(s) still clash after relaxation";
  } else {
    result.success = true;
    result.message = "relaxation complete; listed pairs are clash-free";
  }
  return result;
}

}  // namespace ljopt
