#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ljopt {

// One frame of the XYZ coordinate format: line 1 atom count, line 2 comment
// (verbatim, may be empty), then one `El x y z` line per atom with
// free-format floats.
struct XyzFrame {
  std::string comment;
  std::vector<std::string> elements;  // one symbol per atom, as written
  std::vector<double> coords;         // 3 per atom, same order

  std::size_t n_atoms() const { return elements.size(); }
};

// Reads a single frame; trailing content after the counted atom lines is
// left in the stream. Throws ParseError (with line numbers) on malformed
// counts, coordinates, or truncated input.
XyzFrame read_xyz(std::istream& in, std::string_view source = "<stream>");
XyzFrame read_xyz_file(const std::string& path);

// Writes coordinates with shortest round-trip formatting, so
// read_xyz(write_xyz(f)) reproduces the frame exactly.
std::string write_xyz(const XyzFrame& frame);
void write_xyz_file(const XyzFrame& frame, const std::string& path);

}  // namespace ljopt
