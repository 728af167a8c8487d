#include "ljopt/xyz.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "ljopt/errors.hpp"
#include "ljopt/text.hpp"

namespace ljopt {

namespace {

std::string chomp(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

XyzFrame read_xyz(std::istream& in, std::string_view source) {
  const std::string src(source);
  std::string raw;
  long line_no = 0;

  if (!std::getline(in, raw))
    throw ParseError(src, 1, "missing atom-count line");
  ++line_no;
  std::size_t count = 0;
  if (!parse_index(trim(chomp(raw)), count))
    throw ParseError(src, line_no, "atom count must be a non-negative integer");

  XyzFrame frame;
  if (!std::getline(in, raw))
    throw ParseError(src, line_no + 1, "missing comment line");
  ++line_no;
  frame.comment = chomp(raw);

  frame.elements.reserve(count);
  frame.coords.reserve(3 * count);
  for (std::size_t k = 0; k < count; ++k) {
    if (!std::getline(in, raw))
      throw ParseError(src, line_no + 1,
                       "expected " + std::to_string(count) +
                           " atom lines, got " + std::to_string(k));
    ++line_no;
    std::istringstream fields{chomp(raw)};
    std::string element, xs, ys, zs, extra;
    if (!(fields >> element >> xs >> ys >> zs) || (fields >> extra))
      throw ParseError(src, line_no, "expected 'element x y z'");
    double x = 0.0, y = 0.0, z = 0.0;
    if (!parse_double(xs, x) || !parse_double(ys, y) || !parse_double(zs, z) ||
        !std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
      throw ParseError(src, line_no, "coordinates must be finite numbers");
    frame.elements.push_back(std::move(element));
    frame.coords.push_back(x);
    frame.coords.push_back(y);
    frame.coords.push_back(z);
  }
  return frame;
}

XyzFrame read_xyz_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open XYZ file");
  return read_xyz(in, path);
}

std::string write_xyz(const XyzFrame& frame) {
  if (frame.coords.size() != 3 * frame.elements.size())
    throw DomainError("XYZ frame needs exactly 3 coordinates per element");
  if (frame.comment.find('\n') != std::string::npos)
    throw DomainError("XYZ comment must be a single line");
  for (const std::string& el : frame.elements)
    if (el.empty() || el.find_first_of(" \t\n") != std::string::npos)
      throw DomainError("element symbols must be non-empty single tokens");
  for (double c : frame.coords)
    if (!std::isfinite(c)) throw DomainError("coordinates must be finite");

  std::string out = std::to_string(frame.elements.size());
  out += '\n';
  out += frame.comment;
  out += '\n';
  for (std::size_t k = 0; k < frame.elements.size(); ++k) {
    out += frame.elements[k];
    out += ' ';
    out += format_double(frame.coords[3 * k]);
    out += ' ';
    out += format_double(frame.coords[3 * k + 1]);
    out += ' ';
    out += format_double(frame.coords[3 * k + 2]);
    out += '\n';
  }
  return out;
}

void write_xyz_file(const XyzFrame& frame, const std::string& path) {
  const std::string text = write_xyz(frame);
  std::ofstream out(path);
  if (!out) throw Error("cannot write XYZ file: " + path);
  out << text;
  if (!out) throw Error("write failed for XYZ file: " + path);
}

}  // namespace ljopt
