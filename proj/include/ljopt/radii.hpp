#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace ljopt {

// Uppercases and trims an element symbol ("c" -> "C", " Zn" -> "ZN").
std::string normalize_element(std::string_view element);

// Per-element van der Waals radii in Angstroms. Keys are normalized
// (uppercase) element symbols.
class RadiiTable {
 public:
  RadiiTable() = default;

  // The shipped table, embedded at build time from data/vdw_radii.txt.
  static const RadiiTable& bondi();

  // Parses `El radius` lines; '#' starts a comment. Throws ParseError on
  // malformed lines, non-positive radii, or duplicate elements.
  static RadiiTable from_text(std::string_view text,
                              std::string_view source = "<string>");
  static RadiiTable load_file(const std::string& path);

  // Returns a copy where entries from `overrides` replace or extend this
  // table's entries.
  RadiiTable merged_with(const RadiiTable& overrides) const;

  // Radius in Angstroms; throws UnknownElementError for absent elements.
  double radius(std::string_view element) const;

  std::optional<double> find(std::string_view element) const;
  bool contains(std::string_view element) const;
  std::size_t size() const { return radii_.size(); }
  const std::map<std::string, double>& entries() const { return radii_; }

 private:
  std::map<std::string, double> radii_;
};

}  // namespace ljopt
